#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fairpost/audit.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/scenarios.hpp"
#include "oracles.hpp"

using namespace fairpost;

namespace {

using Cond = ConditionalScoreDistribution::Conditional;

Cond make_cond(std::vector<double> support, std::vector<double> mass) {
    Cond c;
    c.support = std::move(support);
    c.mass = std::move(mass);
    return c;
}

ConditionalScoreDistribution one_group(Cond c0, Cond c1) {
    std::vector<std::array<Cond, 2>> conds;
    conds.push_back({std::move(c0), std::move(c1)});
    return ConditionalScoreDistribution::from_conditionals(std::move(conds), {0.5, 0.5});
}

}  // namespace

TEST_CASE("a perfect predictor has zero violations") {
    std::vector<double> cells = {0.3, 0.0, 0.0, 0.2, 0.25, 0.0, 0.0, 0.25};
    auto joint = JointBinaryDistribution::from_cells(std::move(cells));
    CHECK(equalized_odds_violation(joint) == 0.0);
    CHECK(equal_opportunity_violation(joint) == 0.0);
}

TEST_CASE("binary violations equal direct cell arithmetic") {
    rng::Stream s(9001);
    auto joint = oracles::random_joint(2, s);
    RatePoint g0 = joint.gamma(0), g1 = joint.gamma(1);
    CHECK(equalized_odds_violation(joint) ==
          doctest::Approx(std::max(std::fabs(g0.fpr - g1.fpr), std::fabs(g0.tpr - g1.tpr))));
    CHECK(equal_opportunity_violation(joint) == doctest::Approx(std::fabs(g0.tpr - g1.tpr)));
    CHECK(equal_opportunity_violation(joint) <= equalized_odds_violation(joint));
    double acc0 = (joint.cell(0, 1, 0) + joint.cell(0, 1, 1)) / joint.pr_group(0);
    double acc1 = (joint.cell(1, 1, 0) + joint.cell(1, 1, 1)) / joint.pr_group(1);
    CHECK(demographic_parity_violation(joint) == doctest::Approx(std::fabs(acc0 - acc1)));
}

TEST_CASE("a constant predictor satisfies demographic parity") {
    std::vector<double> cells = {0.0, 0.0, 0.3, 0.2, 0.0, 0.0, 0.25, 0.25};
    auto joint = JointBinaryDistribution::from_cells(std::move(cells));
    CHECK(demographic_parity_violation(joint) == 0.0);
}

TEST_CASE("scenario I: the corrected score passes, the optimal score fails") {
    auto records = sample_scenario_one(100000, 8080);
    auto tilde = ConditionalScoreDistribution::estimate(
        to_score_samples(records, ScenarioScore::r_tilde));
    auto star = ConditionalScoreDistribution::estimate(
        to_score_samples(records, ScenarioScore::r_star));

    CHECK(equalized_odds_violation(tilde) <= 0.02);

    // Conditionals of the optimal score are N(y-1,1) vs N(y+1,1) per group,
    // a shift of two: the sup CDF gap is 2*Phi(1)-1.
    double closed_form = 2.0 * normal_cdf(1.0) - 1.0;
    double v = equalized_odds_violation(star);
    CHECK(v >= 0.3);
    CHECK(std::fabs(v - closed_form) <= 0.02);
}

TEST_CASE("conditional Kolmogorov distance basics") {
    rng::Stream s(5);
    auto d = oracles::random_score_distribution(2, 12, s);
    CHECK(conditional_kolmogorov_distance(d, d) == 0.0);

    auto p1 = one_group(make_cond({0.3}, {1.0}), make_cond({0.5}, {1.0}));
    auto p2 = one_group(make_cond({0.7}, {1.0}), make_cond({0.5}, {1.0}));
    CHECK(conditional_kolmogorov_distance(p1, p2) == 1.0);

    auto d3 = oracles::random_score_distribution(3, 12, s);
    CHECK_THROWS_AS((void)conditional_kolmogorov_distance(d, d3), StructureMismatchError);
}

TEST_CASE("hand-enumerated 3-point distance") {
    auto a = one_group(make_cond({1.0, 2.0, 3.0}, {0.2, 0.3, 0.5}),
                       make_cond({0.0}, {1.0}));
    auto b = one_group(make_cond({1.5, 2.0, 4.0}, {0.4, 0.1, 0.5}),
                       make_cond({0.0}, {1.0}));
    // CDF gaps at the union support: 0.2, 0.2, 0.0, 0.5, 0.0
    CHECK(conditional_kolmogorov_distance(a, b) == doctest::Approx(0.5));
}

TEST_CASE("the distance is a pseudometric on random triples") {
    rng::Stream s(616);
    for (int trial = 0; trial < 10; ++trial) {
        auto x = oracles::random_score_distribution(2, 10, s);
        auto y = oracles::random_score_distribution(2, 10, s);
        auto z = oracles::random_score_distribution(2, 10, s);
        double xy = conditional_kolmogorov_distance(x, y);
        double yx = conditional_kolmogorov_distance(y, x);
        CHECK(xy == yx);
        double xz = conditional_kolmogorov_distance(x, z);
        double zy = conditional_kolmogorov_distance(z, y);
        CHECK(xy <= xz + zy + 1e-12);
    }
}

TEST_CASE("same-threshold curve points stay within sqrt(2) of the distance") {
    rng::Stream s(272727);
    for (int trial = 0; trial < 20; ++trial) {
        auto r1 = oracles::random_score_distribution(2, 15, s, trial % 2 == 0);
        auto r2 = oracles::random_score_distribution(2, 15, s, trial % 2 == 0);
        double dk = conditional_kolmogorov_distance(r1, r2);
        std::vector<double> thresholds = r1.pooled_support();
        auto t2 = r2.pooled_support();
        thresholds.insert(thresholds.end(), t2.begin(), t2.end());
        for (GroupId a = 0; a < 2; ++a) {
            for (double t : thresholds) {
                double d0 = r1.tail(a, 0, t) - r2.tail(a, 0, t);
                double d1 = r1.tail(a, 1, t) - r2.tail(a, 1, t);
                CHECK(std::hypot(d0, d1) <= std::sqrt(2.0) * dk + 1e-12);
            }
        }
    }
}

TEST_CASE("identical ROC check: single group passes, equalized-odds equivalence") {
    rng::Stream s(21);
    auto solo = oracles::random_score_distribution(1, 10, s);
    CHECK(identical_roc_check(solo, 0.0).pass);

    // zero equalized-odds violation iff identical curves at tolerance zero
    auto two = oracles::random_score_distribution(2, 10, s);
    double v = equalized_odds_violation(two);
    auto chk = identical_roc_check(two, 0.0);
    CHECK((v == 0.0) == chk.pass);

    std::vector<std::array<ConditionalScoreDistribution::Conditional, 2>> conds;
    conds.push_back({two.conditional(0, 0), two.conditional(0, 1)});
    conds.push_back({two.conditional(0, 0), two.conditional(0, 1)});
    auto same = ConditionalScoreDistribution::from_conditionals(std::move(conds),
                                                                {0.25, 0.25, 0.25, 0.25});
    CHECK(equalized_odds_violation(same) == 0.0);
    CHECK(identical_roc_check(same, 0.0).pass);
    CHECK(matching_roc_check(same, 0.0).pass);  // identical implies matching
}

TEST_CASE("scenario I optimal score has matching but not identical curves") {
    auto records = sample_scenario_one(100000, 1710);
    auto star = ConditionalScoreDistribution::estimate(
        to_score_samples(records, ScenarioScore::r_star));
    CHECK_FALSE(identical_roc_check(star, 0.02).pass);
    CHECK(matching_roc_check(star, 0.03).pass);
}

TEST_CASE("a score informative for one group only fails the matching check") {
    auto informative0 = make_cond({1.0, 2.0, 3.0, 4.0}, {0.4, 0.3, 0.2, 0.1});
    auto informative1 = make_cond({1.0, 2.0, 3.0, 4.0}, {0.1, 0.2, 0.3, 0.4});
    auto noise = make_cond({2.5}, {1.0});
    std::vector<std::array<Cond, 2>> conds;
    conds.push_back({informative0, informative1});
    conds.push_back({noise, noise});
    auto dist = ConditionalScoreDistribution::from_conditionals(std::move(conds),
                                                                {0.25, 0.25, 0.25, 0.25});
    CHECK_FALSE(matching_roc_check(dist, 0.1).pass);
}

TEST_CASE("matching frequencies: single group is trivially zero") {
    rng::Stream s(3141);
    auto solo = oracles::random_score_distribution(1, 10, s);
    auto edges = equal_mass_bin_edges(solo, 5);
    CHECK(matching_frequencies_violation(solo, edges) == 0.0);
}

TEST_CASE("scenario II: the optimal score matches frequencies, the corrected one does not") {
    auto records = sample_scenario_two(100000, 6060);
    auto star = ConditionalScoreDistribution::estimate(
        to_score_samples(records, ScenarioScore::r_star));
    auto tilde = ConditionalScoreDistribution::estimate(
        to_score_samples(records, ScenarioScore::r_tilde));
    auto edges_star = equal_mass_bin_edges(star, 20);
    auto edges_tilde = equal_mass_bin_edges(tilde, 20);
    CHECK(matching_frequencies_violation(star, edges_star) <= 0.05);
    CHECK(matching_frequencies_violation(tilde, edges_tilde) >= 0.3);
}

TEST_CASE("audit bundles entries and gates score-only checks on binary input") {
    rng::Stream s(11);
    auto joint = oracles::random_joint(2, s);

    AuditReport empty = audit(joint, std::span<const AuditCriterion>{});
    CHECK(empty.entries.empty());

    auto report = audit(joint, all_audit_criteria());
    REQUIRE(report.entries.size() == 6);
    bool saw_skip = false;
    for (const auto& e : report.entries) {
        if (e.criterion == AuditCriterion::identical_roc ||
            e.criterion == AuditCriterion::matching_roc) {
            CHECK(e.skipped);
            saw_skip = true;
        }
    }
    CHECK(saw_skip);
    CHECK(report.group_outcome_mass.size() == 4);
    CHECK_FALSE(report.notes.empty());
}
