#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <tuple>

#include "fairpost/binary_adjust.hpp"
#include "fairpost/geometry.hpp"
#include "fairpost/rng.hpp"
#include "oracles.hpp"

using namespace fairpost;

namespace {

JointBinaryDistribution perfect_joint() {
    // prediction == outcome in both groups
    std::vector<double> cells = {0.30, 0.0, 0.0, 0.20, 0.25, 0.0, 0.0, 0.25};
    return JointBinaryDistribution::from_cells(std::move(cells));
}

JointBinaryDistribution eq_odds_joint() {
    // both groups share gamma = (0.2, 0.8); group masses differ
    std::vector<double> cells(8);
    auto fill = [&](GroupId a, double w, double base) {
        double n0 = w * (1.0 - base), n1 = w * base;
        cells[a * 4 + 2 + 0] = 0.2 * n0;
        cells[a * 4 + 0] = 0.8 * n0;
        cells[a * 4 + 2 + 1] = 0.8 * n1;
        cells[a * 4 + 1] = 0.2 * n1;
    };
    fill(0, 0.6, 0.5);
    fill(1, 0.4, 0.3);
    return JointBinaryDistribution::from_cells(std::move(cells));
}

}  // namespace

TEST_CASE("identity parameters are feasible when the predictor already complies") {
    auto joint = eq_odds_joint();
    LossSpec loss{1.0, 1.0};
    auto res = derive_equalized_odds(joint, loss);

    DerivedBinaryPredictor identity{{0.0, 0.0}, {1.0, 1.0}};
    double identity_loss = expected_loss(joint, identity, loss);
    CHECK(res.expected_loss <= identity_loss + 1e-12);

    // gamma (0.2, 0.8) sits on the intersection hull here, so the optimum
    // cannot beat every derived predictor by more than the vertex sweep finds
    for (GroupId a = 0; a < 2; ++a) {
        CHECK(res.achieved[a].fpr == doctest::Approx(res.achieved[0].fpr).epsilon(1e-9));
        CHECK(res.achieved[a].tpr == doctest::Approx(res.achieved[0].tpr).epsilon(1e-9));
    }
}

TEST_CASE("perfect predictor adjusts to zero loss") {
    auto joint = perfect_joint();
    for (auto criterion : {BinaryCriterion::equalized_odds, BinaryCriterion::equal_opportunity}) {
        auto res = criterion == BinaryCriterion::equalized_odds
                       ? derive_equalized_odds(joint, {1.0, 1.0})
                       : derive_equal_opportunity(joint, {1.0, 1.0});
        CHECK(res.expected_loss == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("solver matches the grid oracle on a fixed random joint") {
    rng::Stream s(314159);
    auto joint = oracles::random_joint(2, s);
    LossSpec loss{1.0, 1.0};
    auto eo = derive_equalized_odds(joint, loss);
    CHECK(std::fabs(eo.expected_loss - oracles::grid_equalized_odds_loss(joint, loss)) < 1e-3);
    auto opp = derive_equal_opportunity(joint, loss);
    CHECK(std::fabs(opp.expected_loss - oracles::grid_equal_opportunity_loss(joint, loss)) <
          1e-3);
}

TEST_CASE("equal opportunity relaxation never loses to equalized odds") {
    rng::Stream s(17);
    for (int trial = 0; trial < 25; ++trial) {
        auto joint = oracles::random_joint(2, s);
        LossSpec loss{0.3 + s.next_uniform(), 0.3 + s.next_uniform()};
        auto eo = derive_equalized_odds(joint, loss);
        auto opp = derive_equal_opportunity(joint, loss);
        CHECK(opp.expected_loss <= eo.expected_loss + 1e-9);
    }
}

TEST_CASE("solver output satisfies the constraints within 1e-9") {
    rng::Stream s(2025);
    for (int trial = 0; trial < 25; ++trial) {
        auto joint = oracles::random_joint(2, s);
        LossSpec loss{0.2 + s.next_uniform(), 0.2 + s.next_uniform()};

        auto eo = derive_equalized_odds(joint, loss);
        for (GroupId a = 0; a < 2; ++a) {
            auto poly = binary_polytope(joint, a);
            CHECK(poly.contains(eo.achieved[a], 1e-9));
            CHECK(std::fabs(eo.achieved[a].fpr - eo.achieved[0].fpr) <= 1e-9);
            CHECK(std::fabs(eo.achieved[a].tpr - eo.achieved[0].tpr) <= 1e-9);
            // reported rates match the parameter evaluation
            RatePoint r = derived_rates(joint, eo.predictor, a);
            CHECK(r.fpr == doctest::Approx(eo.achieved[a].fpr).epsilon(1e-9));
            CHECK(r.tpr == doctest::Approx(eo.achieved[a].tpr).epsilon(1e-9));
        }

        auto opp = derive_equal_opportunity(joint, loss);
        for (GroupId a = 0; a < 2; ++a) {
            auto poly = binary_polytope(joint, a);
            CHECK(poly.contains(opp.achieved[a], 1e-9));
            CHECK(std::fabs(opp.achieved[a].tpr - opp.achieved[0].tpr) <= 1e-9);
        }

        // constant predictors are always feasible
        double constant_bound = std::min(loss.cost_fn * joint.pr_outcome(1),
                                         loss.cost_fp * joint.pr_outcome(0));
        CHECK(eo.expected_loss <= constant_bound + 1e-9);
        CHECK(opp.expected_loss <= constant_bound + 1e-9);
    }
}

TEST_CASE("re-deriving from the adjusted predictor does not change the loss") {
    rng::Stream s(606);
    for (int trial = 0; trial < 10; ++trial) {
        auto joint = oracles::random_joint(2, s);
        LossSpec loss{0.5 + s.next_uniform(), 0.5 + s.next_uniform()};
        auto first = derive_equalized_odds(joint, loss);
        auto second = derive_equalized_odds(adjusted_joint(joint, first.predictor), loss);
        CHECK(std::fabs(first.expected_loss - second.expected_loss) <= 1e-9);
    }
}

TEST_CASE("scaling the loss scales the optimum and keeps the argmin") {
    rng::Stream s(321);
    auto joint = oracles::random_joint(2, s);
    LossSpec loss{0.7, 0.4};
    auto base = derive_equalized_odds(joint, loss);
    auto scaled = derive_equalized_odds(joint, {loss.cost_fp * 3.5, loss.cost_fn * 3.5});
    CHECK(scaled.expected_loss == doctest::Approx(3.5 * base.expected_loss).epsilon(1e-12));
    for (GroupId a = 0; a < 2; ++a) {
        CHECK(scaled.predictor.p_given_0[a] ==
              doctest::Approx(base.predictor.p_given_0[a]).epsilon(1e-9));
        CHECK(scaled.predictor.p_given_1[a] ==
              doctest::Approx(base.predictor.p_given_1[a]).epsilon(1e-9));
    }
}

TEST_CASE("three-group instances match a coarser grid oracle") {
    rng::Stream s(73);
    auto joint = oracles::random_joint(3, s);
    LossSpec loss{0.82, 0.18};
    auto eo = derive_equalized_odds(joint, loss);
    CHECK(std::fabs(eo.expected_loss - oracles::grid_equalized_odds_loss(joint, loss, 0.01)) <
          2e-3);
    auto opp = derive_equal_opportunity(joint, loss);
    CHECK(std::fabs(opp.expected_loss -
                    oracles::grid_equal_opportunity_loss(joint, loss, 0.01)) < 2e-3);
    for (GroupId a = 1; a < 3; ++a) {
        CHECK(std::fabs(eo.achieved[a].fpr - eo.achieved[0].fpr) <= 1e-9);
        CHECK(std::fabs(eo.achieved[a].tpr - eo.achieved[0].tpr) <= 1e-9);
        CHECK(std::fabs(opp.achieved[a].tpr - opp.achieved[0].tpr) <= 1e-9);
    }
}

TEST_CASE("degenerate loss is rejected, degenerate groups propagate") {
    rng::Stream s(8);
    auto joint = oracles::random_joint(2, s);
    CHECK_THROWS_AS((void)derive_equalized_odds(joint, {0.0, 0.0}), DegenerateLossError);
}

TEST_CASE("apply_derived is a seeded Bernoulli in the right parameter") {
    DerivedBinaryPredictor pred{{0.0, 0.3}, {1.0, 0.5}};
    rng::Stream s(1);
    for (int i = 0; i < 50; ++i) {
        CHECK(apply_derived(pred, 0, 0, s) == 0);
        CHECK(apply_derived(pred, 1, 0, s) == 1);
    }
    rng::Stream s2(99);
    std::size_t ones = 0, n = 1000000;
    for (std::size_t i = 0; i < n; ++i) ones += apply_derived(pred, 0, 1, s2);
    CHECK(std::fabs(static_cast<double>(ones) / n - 0.3) < 0.002);
    CHECK_THROWS_AS((void)apply_derived(pred, 0, 7, s2), UnknownGroupError);
}

TEST_CASE("expected_loss matches hand formulas and Monte Carlo") {
    rng::Stream s(52);
    auto joint = oracles::random_joint(2, s);
    LossSpec loss{0.9, 0.6};

    DerivedBinaryPredictor identity{{0.0, 0.0}, {1.0, 1.0}};
    double base_loss = loss.cost_fp * (joint.cell(0, 1, 0) + joint.cell(1, 1, 0)) +
                       loss.cost_fn * (joint.cell(0, 0, 1) + joint.cell(1, 0, 1));
    CHECK(expected_loss(joint, identity, loss) == doctest::Approx(base_loss).epsilon(1e-12));

    DerivedBinaryPredictor reject{{0.0, 0.0}, {0.0, 0.0}};
    CHECK(expected_loss(joint, reject, loss) ==
          doctest::Approx(loss.cost_fn * joint.pr_outcome(1)).epsilon(1e-12));

    DerivedBinaryPredictor random_pred{{0.25, 0.6}, {0.9, 0.15}};
    double analytic = expected_loss(joint, random_pred, loss);
    auto draw = [&](double u) {
        double acc = 0.0;
        for (GroupId a = 0; a < 2; ++a)
            for (int p = 0; p < 2; ++p)
                for (int y = 0; y < 2; ++y) {
                    acc += joint.cell(a, p, y);
                    if (u < acc) return std::tuple<GroupId, int, int>{a, p, y};
                }
        return std::tuple<GroupId, int, int>{1, 1, 1};
    };
    rng::Stream mc(777);
    double total = 0.0;
    std::size_t n = 1000000;
    for (std::size_t i = 0; i < n; ++i) {
        auto [a, p, y] = draw(mc.next_uniform());
        int dec = apply_derived(random_pred, p, a, mc);
        total += (dec == 1 && y == 0) ? loss.cost_fp : (dec == 0 && y == 1) ? loss.cost_fn : 0.0;
    }
    CHECK(std::fabs(total / static_cast<double>(n) - analytic) < 0.003);
}
