#include "fairpost/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "fairpost/rng.hpp"

namespace fairpost {

namespace {

// Four counter slots per record keep the two samplers aligned and allow
// sharded generation.
constexpr std::uint64_t kDrawsPerRecord = 4;

}  // namespace

std::vector<ScenarioRecord> sample_scenario_one(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error("sample count must be positive");
    std::vector<ScenarioRecord> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t base = i * kDrawsPerRecord;
        ScenarioRecord& r = out[i];
        r.a = rng::uniform01_at(seed, base) < 0.5 ? -1 : 1;
        r.y = rng::uniform01_at(seed, base + 1) < logistic(2.0 * r.a) ? 1 : -1;
        r.x1 = r.a;
        r.x2 = r.y + normal_ppf(rng::uniform01_at(seed, base + 2));
        r.r_star = r.x1 + r.x2;
        r.r_tilde = r.x2;
    }
    return out;
}

std::vector<ScenarioRecord> sample_scenario_two(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error("sample count must be positive");
    std::vector<ScenarioRecord> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t base = i * kDrawsPerRecord;
        ScenarioRecord& r = out[i];
        r.a = rng::uniform01_at(seed, base) < 0.5 ? -1 : 1;
        double mean = rng::uniform01_at(seed, base + 1) < logistic(2.0 * r.a) ? r.a + 1.0
                                                                              : r.a - 1.0;
        r.x3 = mean + normal_ppf(rng::uniform01_at(seed, base + 2));
        r.y = rng::uniform01_at(seed, base + 3) < logistic(2.0 * r.x3) ? 1 : -1;
        r.r_star = r.x3;
        r.r_tilde = r.x3 - r.a;
    }
    return out;
}

std::vector<ScoreSample> to_score_samples(std::span<const ScenarioRecord> records,
                                          ScenarioScore which) {
    std::vector<ScoreSample> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        ScoreSample s;
        s.group = r.a > 0 ? 1 : 0;
        s.outcome = r.y > 0 ? 1 : 0;
        s.score = which == ScenarioScore::r_star ? r.r_star : r.r_tilde;
        s.weight = 1.0;
        out.push_back(s);
    }
    return out;
}

double ks_two_sample_band(std::size_t n1, std::size_t n2, double level) {
    double c = std::sqrt(-0.5 * std::log(level / 2.0));
    double m1 = static_cast<double>(n1), m2 = static_cast<double>(n2);
    return c * std::sqrt((m1 + m2) / (m1 * m2));
}

namespace {

double two_sample_ks(std::vector<double> v1, std::vector<double> v2) {
    std::sort(v1.begin(), v1.end());
    std::sort(v2.begin(), v2.end());
    const double s1 = 1.0 / static_cast<double>(v1.size());
    const double s2 = 1.0 / static_cast<double>(v2.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < v1.size() || j < v2.size()) {
        double t;
        if (j >= v2.size())
            t = v1[i];
        else if (i >= v1.size())
            t = v2[j];
        else
            t = std::min(v1[i], v2[j]);
        while (i < v1.size() && v1[i] == t) ++i;
        while (j < v2.size() && v2[j] == t) ++j;
        worst = std::max(worst,
                         std::fabs(static_cast<double>(i) * s1 - static_cast<double>(j) * s2));
    }
    return worst;
}

}  // namespace

bool TwoSampleReport::all_pass() const {
    for (const auto& e : ks)
        if (!e.pass) return false;
    for (const auto& e : cells)
        if (!e.pass) return false;
    return true;
}

TwoSampleReport two_sample_compare(std::span<const ScenarioRecord> s1,
                                   std::span<const ScenarioRecord> s2, double ks_level,
                                   double sigma_mult) {
    TwoSampleReport rep;
    for (GroupId g = 0; g < 2; ++g) {
        for (int y = 0; y < 2; ++y) {
            for (ScenarioScore score : {ScenarioScore::r_star, ScenarioScore::r_tilde}) {
                std::vector<double> v1, v2;
                auto collect = [&](std::span<const ScenarioRecord> recs, std::vector<double>& v) {
                    for (const auto& r : recs) {
                        if ((r.a > 0 ? 1u : 0u) != g) continue;
                        if ((r.y > 0 ? 1 : 0) != y) continue;
                        v.push_back(score == ScenarioScore::r_star ? r.r_star : r.r_tilde);
                    }
                };
                collect(s1, v1);
                collect(s2, v2);
                TwoSampleReport::KsEntry e;
                e.group = g;
                e.outcome = y;
                e.score = score;
                e.n1 = v1.size();
                e.n2 = v2.size();
                if (v1.empty() || v2.empty()) {
                    e.statistic = 1.0;
                    e.band = 0.0;
                    e.pass = false;
                } else {
                    e.statistic = two_sample_ks(std::move(v1), std::move(v2));
                    e.band = ks_two_sample_band(e.n1, e.n2, ks_level);
                    e.pass = e.statistic <= e.band;
                }
                rep.ks.push_back(e);
            }
        }
    }
    for (GroupId g = 0; g < 2; ++g) {
        for (int y = 0; y < 2; ++y) {
            auto freq = [&](std::span<const ScenarioRecord> recs) {
                std::size_t c = 0;
                for (const auto& r : recs)
                    if ((r.a > 0 ? 1u : 0u) == g && (r.y > 0 ? 1 : 0) == y) ++c;
                return static_cast<double>(c) / static_cast<double>(recs.size());
            };
            TwoSampleReport::CellEntry e;
            e.group = g;
            e.outcome = y;
            e.freq1 = freq(s1);
            e.freq2 = freq(s2);
            double pooled = 0.5 * (e.freq1 + e.freq2);
            e.sigma = std::sqrt(pooled * (1.0 - pooled) *
                                (1.0 / static_cast<double>(s1.size()) +
                                 1.0 / static_cast<double>(s2.size())));
            e.pass = std::fabs(e.freq1 - e.freq2) <= sigma_mult * e.sigma;
            rep.cells.push_back(e);
        }
    }
    return rep;
}

TwoSampleReport unidentifiability_check(std::size_t n, std::uint64_t seed1,
                                        std::uint64_t seed2) {
    auto s1 = sample_scenario_one(n, seed1);
    auto s2 = sample_scenario_two(n, seed2);
    return two_sample_compare(s1, s2);
}

}  // namespace fairpost
