#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fairpost/joint.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/scenarios.hpp"
#include "oracles.hpp"

using namespace fairpost;

TEST_CASE("uniform four-sample estimate puts 0.25 in each matching cell") {
    std::vector<BinarySample> samples = {
        {0, 1, 1, 1.0}, {0, 0, 0, 1.0}, {1, 1, 1, 1.0}, {1, 0, 0, 1.0}};
    auto joint = JointBinaryDistribution::estimate(samples);
    CHECK(joint.cell(0, 1, 1) == doctest::Approx(0.25));
    CHECK(joint.cell(0, 0, 0) == doctest::Approx(0.25));
    CHECK(joint.cell(1, 1, 1) == doctest::Approx(0.25));
    CHECK(joint.cell(1, 0, 0) == doctest::Approx(0.25));
    CHECK(joint.cell(0, 1, 0) == 0.0);
    CHECK(joint.cell(1, 0, 1) == 0.0);
}

TEST_CASE("degenerate conditioning raises EmptyGroupOutcome") {
    std::vector<BinarySample> samples = {{0, 1, 1, 1.0}, {0, 0, 1, 1.0}};
    CHECK_THROWS_AS((void)JointBinaryDistribution::estimate(samples), EmptyGroupOutcomeError);
    try {
        (void)JointBinaryDistribution::estimate(samples);
    } catch (const EmptyGroupOutcomeError& e) {
        CHECK(e.group == 0);
        CHECK(e.outcome == 0);
    }
}

TEST_CASE("negative weights are rejected") {
    std::vector<BinarySample> samples = {{0, 1, 1, -0.5}};
    CHECK_THROWS_AS((void)JointBinaryDistribution::estimate(samples), NegativeWeightError);
}

namespace {

BinarySample draw_cell(const JointBinaryDistribution& truth, double u) {
    double acc = 0.0;
    for (GroupId a = 0; a < truth.num_groups(); ++a)
        for (int p = 0; p < 2; ++p)
            for (int y = 0; y < 2; ++y) {
                acc += truth.cell(a, p, y);
                if (u < acc) return {a, p, y, 1.0};
            }
    return {static_cast<GroupId>(truth.num_groups() - 1), 1, 1, 1.0};
}

}  // namespace

TEST_CASE("estimate recovers a known 8-cell table from 10000 samples") {
    rng::Stream gen(12345);
    auto truth = oracles::random_joint(2, gen);
    std::vector<BinarySample> samples;
    rng::Stream draw(777);
    for (int i = 0; i < 10000; ++i) samples.push_back(draw_cell(truth, draw.next_uniform()));
    auto est = JointBinaryDistribution::estimate(samples);
    for (GroupId a = 0; a < 2; ++a)
        for (int p = 0; p < 2; ++p)
            for (int y = 0; y < 2; ++y)
                CHECK(std::fabs(est.cell(a, p, y) - truth.cell(a, p, y)) < 0.02);
}

TEST_CASE("estimation is invariant under uniform weight rescaling") {
    std::vector<BinarySample> samples = {
        {0, 1, 1, 2.0}, {0, 0, 0, 1.0}, {0, 1, 0, 0.5}, {0, 0, 1, 3.0},
        {1, 1, 1, 1.0}, {1, 0, 0, 4.0}, {1, 1, 0, 2.5}, {1, 0, 1, 1.5}};
    auto base = JointBinaryDistribution::estimate(samples);
    for (auto& s : samples) s.weight *= 7.25;
    auto scaled = JointBinaryDistribution::estimate(samples);
    for (GroupId a = 0; a < 2; ++a)
        for (int p = 0; p < 2; ++p)
            for (int y = 0; y < 2; ++y)
                CHECK(scaled.cell(a, p, y) == doctest::Approx(base.cell(a, p, y)).epsilon(1e-12));
}

TEST_CASE("estimation error shrinks from 1e3 to 1e5 samples") {
    rng::Stream gen(5150);
    auto truth = oracles::random_joint(2, gen);
    auto estimate_error = [&](std::size_t n, std::uint64_t seed) {
        std::vector<BinarySample> samples;
        rng::Stream draw(seed);
        for (std::size_t i = 0; i < n; ++i)
            samples.push_back(draw_cell(truth, draw.next_uniform()));
        auto est = JointBinaryDistribution::estimate(samples);
        double err = 0.0;
        for (GroupId a = 0; a < 2; ++a)
            for (int p = 0; p < 2; ++p)
                for (int y = 0; y < 2; ++y)
                    err = std::max(err, std::fabs(est.cell(a, p, y) - truth.cell(a, p, y)));
        return err;
    };
    CHECK(estimate_error(100000, 31) < estimate_error(1000, 31));
}

TEST_CASE("gamma of perfect and constant predictors") {
    // perfect: prediction == outcome
    std::vector<BinarySample> perfect = {{0, 1, 1, 3.0}, {0, 0, 0, 2.0},
                                         {1, 1, 1, 1.0}, {1, 0, 0, 1.0}};
    auto jp = JointBinaryDistribution::estimate(perfect);
    CHECK(jp.gamma(0) == RatePoint{0.0, 1.0});
    CHECK(jp.gamma(1) == RatePoint{0.0, 1.0});

    std::vector<BinarySample> constant = {{0, 1, 1, 3.0}, {0, 1, 0, 2.0},
                                          {1, 1, 1, 1.0}, {1, 1, 0, 1.0}};
    // constant predictor never emits 0, so estimation is fine but gamma is (1,1)
    auto jc = JointBinaryDistribution::estimate(constant);
    CHECK(jc.gamma(0) == RatePoint{1.0, 1.0});
}

TEST_CASE("gamma equals direct cell arithmetic on a random table") {
    rng::Stream gen(99);
    auto joint = oracles::random_joint(3, gen);
    for (GroupId a = 0; a < 3; ++a) {
        RatePoint g = joint.gamma(a);
        double n0 = joint.cell(a, 0, 0) + joint.cell(a, 1, 0);
        double n1 = joint.cell(a, 0, 1) + joint.cell(a, 1, 1);
        CHECK(g.fpr == doctest::Approx(joint.cell(a, 1, 0) / n0).epsilon(1e-14));
        CHECK(g.tpr == doctest::Approx(joint.cell(a, 1, 1) / n1).epsilon(1e-14));
        CHECK(g.fpr >= 0.0);
        CHECK(g.fpr <= 1.0);
        CHECK(g.tpr >= 0.0);
        CHECK(g.tpr <= 1.0);
    }
}

TEST_CASE("gamma of the flipped predictor is the reflected point") {
    rng::Stream gen(123);
    auto joint = oracles::random_joint(2, gen);
    // flip predictions by swapping the prediction slices
    std::vector<double> cells(8);
    for (GroupId a = 0; a < 2; ++a)
        for (int p = 0; p < 2; ++p)
            for (int y = 0; y < 2; ++y) cells[a * 4 + p * 2 + y] = joint.cell(a, 1 - p, y);
    auto flipped = JointBinaryDistribution::from_cells(std::move(cells));
    for (GroupId a = 0; a < 2; ++a) {
        RatePoint g = joint.gamma(a), f = flipped.gamma(a);
        CHECK(f.fpr == doctest::Approx(1.0 - g.fpr).epsilon(1e-12));
        CHECK(f.tpr == doctest::Approx(1.0 - g.tpr).epsilon(1e-12));
    }
}

TEST_CASE("merge is weighted cell addition") {
    rng::Stream gen(55);
    auto j1 = oracles::random_joint(2, gen);
    auto j2 = oracles::random_joint(2, gen);
    std::vector<JointBinaryDistribution> parts = {j1, j2};
    std::vector<double> weights = {3.0, 1.0};
    auto merged = JointBinaryDistribution::merge(parts, weights);
    for (GroupId a = 0; a < 2; ++a)
        for (int p = 0; p < 2; ++p)
            for (int y = 0; y < 2; ++y)
                CHECK(merged.cell(a, p, y) ==
                      doctest::Approx(0.75 * j1.cell(a, p, y) + 0.25 * j2.cell(a, p, y)));
}

TEST_CASE("score distribution counts and merges support points") {
    std::vector<ScoreSample> samples = {
        {0, 0.2, 1, 1.0}, {0, 0.2, 1, 1.0}, {0, 0.8, 1, 1.0}, {0, 0.5, 0, 1.0}};
    auto dist = ConditionalScoreDistribution::estimate(samples);
    const auto& c1 = dist.conditional(0, 1);
    REQUIRE(c1.support.size() == 2);
    CHECK(c1.support[0] == 0.2);
    CHECK(c1.mass[0] == doctest::Approx(2.0 / 3.0));
    CHECK(c1.mass[1] == doctest::Approx(1.0 / 3.0));
    CHECK(dist.base_rate(0) == doctest::Approx(0.75));
}

TEST_CASE("non-finite scores are rejected") {
    std::vector<ScoreSample> samples = {{0, std::nan(""), 1, 1.0}};
    CHECK_THROWS_AS((void)ConditionalScoreDistribution::estimate(samples), NonFiniteScoreError);
}

TEST_CASE("scenario II sample ECDF is close to the closed-form conditionals") {
    // Unidentifiability makes both constructions share R*|A,Y = N(a+y, 1)
    // with a,y in {-1,+1}.
    auto records = sample_scenario_two(100000, 2024);
    auto dist = ConditionalScoreDistribution::estimate(
        to_score_samples(records, ScenarioScore::r_star));
    for (GroupId g = 0; g < 2; ++g) {
        for (int y = 0; y < 2; ++y) {
            double mean = (g == 1 ? 1.0 : -1.0) + (y == 1 ? 1.0 : -1.0);
            const auto& cond = dist.conditional(g, y);
            double worst = 0.0;
            for (std::size_t i = 0; i < cond.support.size(); i += 7)
                worst = std::max(worst, std::fabs(cond.cum[i] -
                                                  normal_cdf(cond.support[i] - mean)));
            CHECK(worst < 0.02);
        }
    }
}

TEST_CASE("group names pad out to the deduced group count") {
    std::vector<BinarySample> samples = {
        {0, 1, 1, 1.0}, {0, 0, 0, 1.0}, {2, 1, 1, 1.0}, {2, 0, 0, 1.0},
        {1, 1, 1, 1.0}, {1, 0, 0, 1.0}};
    auto joint = JointBinaryDistribution::estimate(samples, {"only_one_name"});
    REQUIRE(joint.group_names().size() == 3);
    CHECK(joint.group_names()[0] == "only_one_name");
    CHECK(joint.group_names()[2] == "2");
}

TEST_CASE("slightly off priors are renormalized exactly") {
    using Cond = ConditionalScoreDistribution::Conditional;
    Cond c;
    c.support = {0.0, 1.0};
    c.mass = {0.5, 0.5};
    std::vector<std::array<Cond, 2>> conds = {{c, c}, {c, c}};
    std::vector<double> pr_ay = {0.25 + 3e-10, 0.25, 0.25, 0.25};
    auto dist = ConditionalScoreDistribution::from_conditionals(std::move(conds), pr_ay);
    double total = 0.0;
    for (GroupId a = 0; a < 2; ++a)
        for (int y = 0; y < 2; ++y) total += dist.pr_group_outcome(a, y);
    CHECK(total == 1.0);
}

TEST_CASE("tail uses the strict R > t convention") {
    std::vector<ScoreSample> samples = {
        {0, 1.0, 1, 1.0}, {0, 2.0, 1, 1.0}, {0, 1.0, 0, 1.0}, {0, 3.0, 0, 1.0}};
    auto dist = ConditionalScoreDistribution::estimate(samples);
    CHECK(dist.tail(0, 1, 1.0) == doctest::Approx(0.5));   // mass strictly above 1.0
    CHECK(dist.tail(0, 1, 0.99) == doctest::Approx(1.0));
    CHECK(dist.tail(0, 1, 2.0) == doctest::Approx(0.0));
    CHECK(dist.marginal_tail(0, 1.0) == doctest::Approx(0.5));
}
