#include "fairpost/joint.hpp"

#include <algorithm>
#include <cmath>

#include "fairpost/kernels.hpp"

namespace fairpost {

namespace {

std::vector<std::string> default_names(std::size_t k, std::vector<std::string> given) {
    std::vector<std::string> names = std::move(given);
    for (std::size_t i = names.size(); i < k; ++i) names.push_back(std::to_string(i));
    return names;
}

std::size_t deduce_num_groups(std::size_t max_seen_plus_one,
                              const std::vector<std::string>& names) {
    return names.empty() ? max_seen_plus_one : std::max(max_seen_plus_one, names.size());
}

}  // namespace

JointBinaryDistribution JointBinaryDistribution::from_cells(std::vector<double> cells,
                                                            std::vector<std::string> names) {
    if (cells.empty() || cells.size() % 4 != 0)
        throw Error("cell table size must be a positive multiple of 4");
    for (double c : cells)
        if (!(c >= 0.0)) throw Error("cells must be nonnegative");
    double total = kern::sum(cells.data(), cells.size());
    if (std::fabs(total - 1.0) > 1e-12) throw Error("cells must sum to 1 within 1e-12");
    return JointBinaryDistribution(std::move(cells), default_names(cells.size() / 4,
                                                                   std::move(names)));
}

JointBinaryDistribution JointBinaryDistribution::estimate(std::span<const BinarySample> samples,
                                                          std::vector<std::string> names) {
    std::size_t max_group = 0;
    std::vector<double> weights;
    weights.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.weight < 0.0) throw NegativeWeightError(s.weight);
        if (s.prediction != 0 && s.prediction != 1)
            throw Error("binary prediction must be 0 or 1");
        if (s.outcome != 0 && s.outcome != 1) throw Error("outcome must be 0 or 1");
        max_group = std::max<std::size_t>(max_group, s.group + 1);
        weights.push_back(s.weight);
    }
    std::size_t k = deduce_num_groups(max_group, names);
    if (k == 0) throw Error("no samples");

    std::vector<double> cells(k * 4, 0.0);
    for (const auto& s : samples)
        cells[s.group * 4 + static_cast<std::size_t>(s.prediction) * 2 +
              static_cast<std::size_t>(s.outcome)] += s.weight;

    double total = kern::sum(weights.data(), weights.size());
    if (total <= 0.0) throw Error("total sample weight must be positive");
    for (GroupId a = 0; a < k; ++a)
        for (int y = 0; y < 2; ++y)
            if (cells[a * 4 + y] + cells[a * 4 + 2 + y] <= 0.0)
                throw EmptyGroupOutcomeError(a, y, "estimate_binary_joint");
    for (double& c : cells) c /= total;
    return JointBinaryDistribution(std::move(cells), default_names(k, std::move(names)));
}

JointBinaryDistribution JointBinaryDistribution::merge(
    std::span<const JointBinaryDistribution> parts, std::span<const double> weights) {
    if (parts.empty() || parts.size() != weights.size())
        throw Error("merge needs matching nonempty parts and weights");
    std::vector<double> cells(parts[0].cells_.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].cells_.size() != cells.size())
            throw StructureMismatchError("group counts differ across shards");
        if (weights[i] < 0.0) throw NegativeWeightError(weights[i]);
        for (std::size_t j = 0; j < cells.size(); ++j)
            cells[j] += weights[i] * parts[i].cells_[j];
        total += weights[i];
    }
    if (total <= 0.0) throw Error("total merge weight must be positive");
    for (double& c : cells) c /= total;
    return JointBinaryDistribution(std::move(cells), parts[0].group_names_);
}

double JointBinaryDistribution::pr_group(GroupId a) const {
    if (a >= num_groups()) throw UnknownGroupError(a);
    return cell(a, 0, 0) + cell(a, 0, 1) + cell(a, 1, 0) + cell(a, 1, 1);
}

double JointBinaryDistribution::pr_group_outcome(GroupId a, int y) const {
    if (a >= num_groups()) throw UnknownGroupError(a);
    return cell(a, 0, y) + cell(a, 1, y);
}

double JointBinaryDistribution::pr_outcome(int y) const {
    double p = 0.0;
    for (GroupId a = 0; a < num_groups(); ++a) p += pr_group_outcome(a, y);
    return p;
}

RatePoint JointBinaryDistribution::gamma(GroupId a) const {
    if (a >= num_groups()) throw UnknownGroupError(a);
    double n0 = pr_group_outcome(a, 0);
    double n1 = pr_group_outcome(a, 1);
    if (n0 <= 0.0) throw EmptyGroupOutcomeError(a, 0, "gamma");
    if (n1 <= 0.0) throw EmptyGroupOutcomeError(a, 1, "gamma");
    return RatePoint{cell(a, 1, 0) / n0, cell(a, 1, 1) / n1};
}

ConditionalScoreDistribution ConditionalScoreDistribution::estimate(
    std::span<const ScoreSample> samples, std::vector<std::string> names) {
    std::size_t max_group = 0;
    for (const auto& s : samples) {
        if (s.weight < 0.0) throw NegativeWeightError(s.weight);
        if (!std::isfinite(s.score)) throw NonFiniteScoreError();
        if (s.outcome != 0 && s.outcome != 1) throw Error("outcome must be 0 or 1");
        max_group = std::max<std::size_t>(max_group, s.group + 1);
    }
    std::size_t k = deduce_num_groups(max_group, names);
    if (k == 0) throw Error("no samples");

    // Bucket (score, weight) pairs per (group, outcome), then sort and merge
    // duplicate support points.
    std::vector<std::vector<std::pair<double, double>>> buckets(k * 2);
    for (const auto& s : samples)
        if (s.weight > 0.0)
            buckets[s.group * 2 + static_cast<std::size_t>(s.outcome)].emplace_back(s.score,
                                                                                    s.weight);

    ConditionalScoreDistribution out;
    out.conditionals_.resize(k);
    out.pr_ay_.assign(k * 2, 0.0);
    double total = 0.0;
    for (GroupId a = 0; a < k; ++a) {
        for (int y = 0; y < 2; ++y) {
            auto& bucket = buckets[a * 2 + static_cast<std::size_t>(y)];
            if (bucket.empty()) throw EmptyGroupOutcomeError(a, y, "estimate_score_distribution");
            std::sort(bucket.begin(), bucket.end());
            Conditional cond;
            for (const auto& [score, w] : bucket) {
                if (!cond.support.empty() && cond.support.back() == score)
                    cond.mass.back() += w;
                else {
                    cond.support.push_back(score);
                    cond.mass.push_back(w);
                }
            }
            double cw = kern::sum(cond.mass.data(), cond.mass.size());
            if (cw <= 0.0) throw EmptyGroupOutcomeError(a, y, "estimate_score_distribution");
            out.pr_ay_[a * 2 + static_cast<std::size_t>(y)] = cw;
            total += cw;
            cond.cum.resize(cond.mass.size());
            double run = 0.0;
            for (std::size_t i = 0; i < cond.mass.size(); ++i) {
                cond.mass[i] /= cw;
                run += cond.mass[i];
                cond.cum[i] = std::min(run, 1.0);
            }
            cond.cum.back() = 1.0;  // tails at the top step must be exactly 0
            out.conditionals_[a][static_cast<std::size_t>(y)] = std::move(cond);
        }
    }
    for (double& p : out.pr_ay_) p /= total;
    out.group_names_ = default_names(k, std::move(names));
    return out;
}

ConditionalScoreDistribution ConditionalScoreDistribution::from_conditionals(
    std::vector<std::array<Conditional, 2>> conditionals, std::vector<double> pr_ay,
    std::vector<std::string> names) {
    std::size_t k = conditionals.size();
    if (k == 0 || pr_ay.size() != k * 2) throw Error("conditionals and pr_ay sizes disagree");
    for (double p : pr_ay)
        if (!(p >= 0.0)) throw Error("pr_ay entries must be nonnegative");
    double total = kern::sum(pr_ay.data(), pr_ay.size());
    if (std::fabs(total - 1.0) > 1e-9) throw Error("pr_ay must sum to 1");
    // renormalize exactly so downstream probability tables pass their own
    // 1e-12 sum checks
    for (double& p : pr_ay) p /= total;
    double sum = 0.0;
    for (double p : pr_ay) sum += p;
    auto largest = std::max_element(pr_ay.begin(), pr_ay.end());
    *largest += 1.0 - sum;
    for (GroupId a = 0; a < k; ++a) {
        for (int y = 0; y < 2; ++y) {
            auto& cond = conditionals[a][static_cast<std::size_t>(y)];
            if (cond.support.empty()) throw EmptyGroupOutcomeError(a, y, "from_conditionals");
            if (cond.support.size() != cond.mass.size())
                throw Error("support and mass sizes disagree");
            double m = kern::sum(cond.mass.data(), cond.mass.size());
            if (std::fabs(m - 1.0) > 1e-12)
                throw Error("conditional mass must sum to 1 within 1e-12");
            for (std::size_t i = 0; i + 1 < cond.support.size(); ++i)
                if (!(cond.support[i] < cond.support[i + 1]))
                    throw Error("support points must be strictly increasing");
            cond.cum.resize(cond.mass.size());
            double run = 0.0;
            for (std::size_t i = 0; i < cond.mass.size(); ++i) {
                run += cond.mass[i];
                cond.cum[i] = std::min(run, 1.0);
            }
            cond.cum.back() = 1.0;
        }
    }
    ConditionalScoreDistribution out;
    out.conditionals_ = std::move(conditionals);
    out.pr_ay_ = std::move(pr_ay);
    out.group_names_ = default_names(k, std::move(names));
    return out;
}

const ConditionalScoreDistribution::Conditional& ConditionalScoreDistribution::conditional(
    GroupId a, int y) const {
    if (a >= num_groups()) throw UnknownGroupError(a);
    return conditionals_[a][static_cast<std::size_t>(y)];
}

double ConditionalScoreDistribution::pr_group(GroupId a) const {
    if (a >= num_groups()) throw UnknownGroupError(a);
    return pr_ay_[a * 2] + pr_ay_[a * 2 + 1];
}

double ConditionalScoreDistribution::base_rate(GroupId a) const {
    double pg = pr_group(a);
    if (pg <= 0.0) throw EmptyGroupOutcomeError(a, 1, "base_rate");
    return pr_ay_[a * 2 + 1] / pg;
}

double ConditionalScoreDistribution::pr_group_outcome(GroupId a, int y) const {
    if (a >= num_groups()) throw UnknownGroupError(a);
    return pr_ay_[a * 2 + static_cast<std::size_t>(y)];
}

double ConditionalScoreDistribution::pr_outcome(int y) const {
    double p = 0.0;
    for (GroupId a = 0; a < num_groups(); ++a) p += pr_group_outcome(a, y);
    return p;
}

double ConditionalScoreDistribution::cdf(GroupId a, int y, double t) const {
    const Conditional& cond = conditional(a, y);
    auto it = std::upper_bound(cond.support.begin(), cond.support.end(), t);
    if (it == cond.support.begin()) return 0.0;
    return cond.cum[static_cast<std::size_t>(it - cond.support.begin()) - 1];
}

double ConditionalScoreDistribution::tail(GroupId a, int y, double t) const {
    return std::clamp(1.0 - cdf(a, y, t), 0.0, 1.0);
}

double ConditionalScoreDistribution::marginal_tail(GroupId a, double t) const {
    double p1 = base_rate(a);
    return p1 * tail(a, 1, t) + (1.0 - p1) * tail(a, 0, t);
}

std::vector<double> ConditionalScoreDistribution::group_support(GroupId a) const {
    const auto& c0 = conditional(a, 0).support;
    const auto& c1 = conditional(a, 1).support;
    std::vector<double> merged;
    merged.reserve(c0.size() + c1.size());
    std::merge(c0.begin(), c0.end(), c1.begin(), c1.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

std::vector<double> ConditionalScoreDistribution::pooled_support() const {
    std::vector<double> merged;
    for (GroupId a = 0; a < num_groups(); ++a)
        for (int y = 0; y < 2; ++y) {
            const auto& s = conditional(a, y).support;
            merged.insert(merged.end(), s.begin(), s.end());
        }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

}  // namespace fairpost
