#include "fairpost/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

namespace fairpost {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& s, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " value '" + s + "'", line_no);
    }
}

int parse_outcome(const std::string& s, std::size_t line_no) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw ParseError("outcome must be 0 or 1, got '" + s + "'", line_no);
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) != v) continue;
        // a higher precision can still print shorter ("650" vs "6.5e+02")
        if (best.empty()) best = buf;
        for (int extra = 1; extra <= 3 && prec + extra <= 17; ++extra) {
            std::snprintf(buf, sizeof buf, "%.*g", prec + extra, v);
            if (std::stod(buf) == v && std::string_view(buf).size() < best.size()) best = buf;
        }
        return best;
    }
    return buf;
}

bool SampleTable::looks_binary() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const ScoreSample& s) { return s.score == 0.0 || s.score == 1.0; });
}

std::vector<BinarySample> SampleTable::as_binary() const {
    std::vector<BinarySample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.score != 0.0 && s.score != 1.0)
            throw Error("sample scores are not all binary predictions");
        out.push_back({s.group, s.score == 1.0 ? 1 : 0, s.outcome, s.weight});
    }
    return out;
}

SampleTable read_samples_csv(std::istream& in) {
    SampleTable table;
    std::map<std::string, GroupId> ids;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        auto cells = split_csv_line(line);
        if (!header_seen) {
            if (cells.size() < 3 || cells[0] != "group")
                throw ParseError("expected header 'group,score_or_pred,outcome[,weight]'",
                                 line_no);
            header_seen = true;
            continue;
        }
        if (cells.size() < 3 || cells.size() > 4)
            throw ParseError("expected 3 or 4 columns, got " + std::to_string(cells.size()),
                             line_no);
        ScoreSample s;
        auto [it, inserted] =
            ids.emplace(cells[0], static_cast<GroupId>(table.group_names.size()));
        if (inserted) table.group_names.push_back(cells[0]);
        s.group = it->second;
        s.score = parse_number(cells[1], line_no, "score");
        if (!std::isfinite(s.score)) throw ParseError("score must be finite", line_no);
        s.outcome = parse_outcome(cells[2], line_no);
        s.weight = cells.size() == 4 ? parse_number(cells[3], line_no, "weight") : 1.0;
        if (s.weight < 0.0) throw ParseError("weight must be >= 0", line_no);
        table.samples.push_back(s);
    }
    if (!header_seen) throw ParseError("missing header", line_no == 0 ? 1 : line_no);
    return table;
}

SampleTable read_samples_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_samples_csv(in);
}

void write_samples_csv(std::ostream& out, const SampleTable& table) {
    out << "group,score_or_pred,outcome,weight\n";
    for (const auto& s : table.samples) {
        out << table.group_names[s.group] << ',' << format_double(s.score) << ',' << s.outcome
            << ',' << format_double(s.weight) << '\n';
    }
}

MarginalsTable read_marginals_csv(std::istream& in) {
    MarginalsTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        auto cells = split_csv_line(line);
        if (!header_seen) {
            if (cells.size() != 5 || cells[0] != "group")
                throw ParseError(
                    "expected header 'group,score,cumulative_fraction,nondefault_rate,"
                    "group_size'",
                    line_no);
            header_seen = true;
            continue;
        }
        if (cells.size() != 5)
            throw ParseError("expected 5 columns, got " + std::to_string(cells.size()), line_no);
        MarginalsRow r;
        r.group = cells[0];
        r.score = parse_number(cells[1], line_no, "score");
        r.cumulative_fraction = parse_number(cells[2], line_no, "cumulative_fraction");
        r.nondefault_rate = parse_number(cells[3], line_no, "nondefault_rate");
        r.group_size = parse_number(cells[4], line_no, "group_size");
        if (r.cumulative_fraction < 0.0 || r.cumulative_fraction > 1.0 + 1e-9)
            throw ParseError("cumulative_fraction outside [0,1]", line_no);
        if (r.nondefault_rate < 0.0 || r.nondefault_rate > 1.0)
            throw ParseError("nondefault_rate outside [0,1]", line_no);
        if (r.group_size <= 0.0) throw ParseError("group_size must be positive", line_no);
        table.rows.push_back(std::move(r));
    }
    if (!header_seen) throw ParseError("missing header", line_no == 0 ? 1 : line_no);
    return table;
}

MarginalsTable read_marginals_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_marginals_csv(in);
}

SampleTable MarginalsTable::to_samples() const {
    SampleTable out;
    std::map<std::string, GroupId> ids;
    struct PerGroup {
        std::vector<const MarginalsRow*> rows;
        double size = 0.0;
    };
    std::vector<PerGroup> groups;
    for (const auto& r : rows) {
        auto [it, inserted] = ids.emplace(r.group, static_cast<GroupId>(out.group_names.size()));
        if (inserted) {
            out.group_names.push_back(r.group);
            groups.emplace_back();
        }
        groups[it->second].rows.push_back(&r);
        groups[it->second].size = r.group_size;
    }
    for (GroupId g = 0; g < groups.size(); ++g) {
        auto& rows_g = groups[g].rows;
        std::sort(rows_g.begin(), rows_g.end(),
                  [](const MarginalsRow* a, const MarginalsRow* b) { return a->score < b->score; });
        double prev = 0.0;
        double final_cdf = rows_g.back()->cumulative_fraction;
        if (std::fabs(final_cdf - 1.0) > 1e-6)
            throw Error("group " + out.group_names[g] +
                        ": cumulative fractions must end at 1");
        for (const MarginalsRow* r : rows_g) {
            if (r->cumulative_fraction < prev - 1e-12)
                throw Error("group " + out.group_names[g] +
                            ": cumulative fractions must be nondecreasing");
            double mass = (r->cumulative_fraction - prev) / final_cdf;
            prev = r->cumulative_fraction;
            if (mass <= 0.0) continue;
            double w = mass * groups[g].size;
            double w1 = w * r->nondefault_rate;
            double w0 = w - w1;
            if (w1 > 0.0) out.samples.push_back({g, r->score, 1, w1});
            if (w0 > 0.0) out.samples.push_back({g, r->score, 0, w0});
        }
    }
    return out;
}

}  // namespace fairpost
