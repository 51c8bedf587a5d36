#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kinemb/kinematics.hpp"

using namespace kinemb;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;

namespace {

EmbeddingSequence sequence_from(std::vector<MatrixXd> steps) {
    EmbeddingSequence seq;
    seq.steps = std::move(steps);
    return seq;
}

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("velocities are consecutive position differences") {
    MatrixXd a(2, 2), b(2, 2), c(2, 2);
    a << 0, 0, 1, 1;
    b << 1, 0, 1, 3;
    c << 1, 5, 2, 3;
    auto vels = velocities(sequence_from({a, b, c}));
    REQUIRE(vels.size() == 2);
    CHECK((vels[0] - (b - a)).norm() == 0.0);
    CHECK((vels[1] - (c - b)).norm() == 0.0);
}

TEST_CASE("velocities need at least two timesteps") {
    MatrixXd a = MatrixXd::Zero(2, 2);
    CHECK_THROWS_AS(velocities(sequence_from({a})), std::invalid_argument);
    CHECK_THROWS_AS(velocities(sequence_from({})), std::invalid_argument);
}

TEST_CASE("recency weights are 2*eta/(h*(h+1)), oldest first") {
    // h = 3: weights 1/6, 2/6, 3/6 applied oldest -> newest.
    RowVectorXd v1(1), v2(1), v3(1);
    v1 << 6.0;
    v2 << 12.0;
    v3 << 18.0;
    RowVectorXd agg = recency_weighted_average(std::vector<RowVectorXd>{v1, v2, v3});
    CHECK(agg(0) == doctest::Approx(6.0 / 6 + 24.0 / 6 + 54.0 / 6).epsilon(1e-15));

    // h = 1 degenerates to the identity.
    RowVectorXd solo = recency_weighted_average(std::vector<RowVectorXd>{v2});
    CHECK(solo(0) == 12.0);
}

TEST_CASE("aggregating h copies of a vector returns that vector") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (std::size_t h = 1; h <= 9; ++h) {
        MatrixXd v(3, 4);
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = coord(rng);
        std::vector<MatrixXd> window(h, v);
        CHECK((recency_weighted_average(window) - v).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("aggregation rejects empty and mismatched windows") {
    CHECK_THROWS_AS(recency_weighted_average(std::vector<MatrixXd>{}), std::invalid_argument);
    std::vector<MatrixXd> bad{MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 2)};
    CHECK_THROWS_AS(recency_weighted_average(bad), std::invalid_argument);
}

TEST_CASE("advance adds the aggregated velocity to the current positions") {
    MatrixXd pos(2, 2), vel(2, 2);
    pos << 1, 2, 3, 4;
    vel << 0.5, -0.5, 0, 1;
    MatrixXd next = advance_positions(pos, vel);
    CHECK(next(0, 0) == 1.5);
    CHECK(next(1, 1) == 5.0);
    CHECK_THROWS_AS(advance_positions(pos, MatrixXd::Zero(3, 2)), std::invalid_argument);
}

TEST_CASE("neighborhood average includes the node itself") {
    // Path 0-1-2: node 1 averages all three, the ends average two.
    Snapshot s(0, {{0, 1}, {1, 2}}, 3);
    MatrixXd pos(3, 1);
    pos << 0.0, 3.0, 9.0;
    MatrixXd smoothed = neighborhood_average(pos, s);
    CHECK(smoothed(0, 0) == doctest::Approx(1.5));
    CHECK(smoothed(1, 0) == doctest::Approx(4.0));
    CHECK(smoothed(2, 0) == doctest::Approx(6.0));
}

TEST_CASE("isolated nodes keep their own position under smoothing") {
    Snapshot s(0, {{0, 1}}, 3);
    MatrixXd pos(3, 2);
    pos << 1, 1, 3, 3, 7, -7;
    MatrixXd smoothed = neighborhood_average(pos, s);
    CHECK(smoothed(2, 0) == 7.0);
    CHECK(smoothed(2, 1) == -7.0);
}

TEST_CASE("predict_locations runs aggregate, advance, smooth in order") {
    // Two nodes, one dimension, three observed steps.
    MatrixXd r0(2, 1), r1(2, 1), r2(2, 1);
    r0 << 0, 10;
    r1 << 1, 10;
    r2 << 3, 10;
    // velocities: step0 = (1, 0), step1 = (2, 0); predicted next = (4, 0).
    MatrixXd predicted(2, 1);
    predicted << 4, 0;
    Snapshot last(2, {{0, 1}}, 2);

    // h = 3 window oldest->newest: (1,0), (2,0), (4,0); weights 1/6, 2/6, 3/6.
    const double agg0 = (1.0 + 2 * 2.0 + 3 * 4.0) / 6.0;
    const double init0 = 3.0 + agg0;  // node 0 advanced
    const double init1 = 10.0;        // node 1 never moves
    const double want = (init0 + init1) / 2.0;  // both nodes smooth to the pair mean

    MatrixXd loc = predict_locations(sequence_from({r0, r1, r2}), predicted, 3, last);
    CHECK(loc(0, 0) == doctest::Approx(want).epsilon(1e-15));
    CHECK(loc(1, 0) == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("history of one uses only the predicted velocity") {
    MatrixXd r0(1, 1), r1(1, 1);
    r0 << 0;
    r1 << 5;
    MatrixXd predicted(1, 1);
    predicted << -2;
    Snapshot last(1, {}, 1);
    MatrixXd loc = predict_locations(sequence_from({r0, r1}), predicted, 1, last);
    CHECK(loc(0, 0) == 3.0);
}

TEST_CASE("predict_locations rejects windows longer than the observed series") {
    MatrixXd r0 = MatrixXd::Zero(1, 1), r1 = MatrixXd::Ones(1, 1);
    MatrixXd predicted = MatrixXd::Zero(1, 1);
    Snapshot last(1, {}, 1);
    // Two observed steps give one velocity; h = 3 needs two.
    CHECK_THROWS_AS(predict_locations(sequence_from({r0, r1}), predicted, 3, last),
                    std::invalid_argument);
    CHECK_THROWS_AS(predict_locations(sequence_from({r0, r1}), predicted, 0, last),
                    std::invalid_argument);
}

TEST_CASE("velocity sums telescope back to total displacement") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::vector<MatrixXd> steps;
    for (int t = 0; t < 7; ++t) {
        MatrixXd m(4, 3);
        for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = coord(rng);
        steps.push_back(m);
    }
    auto seq = sequence_from(steps);
    auto vels = velocities(seq);
    MatrixXd total = MatrixXd::Zero(4, 3);
    for (const auto& v : vels) total += v;
    CHECK((total - (steps.back() - steps.front())).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
