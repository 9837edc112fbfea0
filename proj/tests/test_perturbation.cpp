#include <cmath>
#include <cstddef>
#include <cstdint>

#include "doctest.h"

#include "collinlab/dataset.hpp"
#include "collinlab/errors.hpp"
#include "collinlab/perturbation.hpp"
#include "support/oracles.hpp"

using collinlab::Dataset;
using collinlab::Matrix;
using collinlab::NoiseDistribution;
using collinlab::NoiseStream;
using collinlab::PerturbationConfig;
using collinlab::PerturbationSummary;
using collinlab::Vector;

TEST_CASE("perturbing along a unit axis moves exactly one percent of the norm") {
    const Vector out = collinlab::perturb_vector({3.0, 4.0}, 0.01, {1.0, 0.0});
    REQUIRE(out.size() == 2);
    CHECK(std::abs(out[0] - 3.05) < 1e-12);
    CHECK(std::abs(out[1] - 4.0) < 1e-12);
}

TEST_CASE("a zero perturbation fraction leaves the vector unchanged") {
    const Vector x = {1.5, -2.5, 3.5};
    CHECK(collinlab::perturb_vector(x, 0.0, {1.0, 1.0, 1.0}) == x);
}

TEST_CASE("perturbation norm is exact for arbitrary noise directions") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        NoiseStream stream(seed, 0, 99);
        const std::size_t len = 2 + seed % 17;
        Vector x(len), noise(len);
        for (double& v : x) v = 5.0 * stream.uniform();
        for (double& v : noise) v = stream.gaussian();
        if (collinlab::euclidean_norm(x) == 0.0 || collinlab::euclidean_norm(noise) == 0.0) {
            continue;
        }
        const double pct = 0.01 + 0.003 * static_cast<double>(seed % 7);
        const Vector out = collinlab::perturb_vector(x, pct, noise);
        const double moved = collinlab::distance(out, x) / collinlab::euclidean_norm(x);
        CHECK(std::abs(moved - pct) < 1e-12);
    }
}

TEST_CASE("vector perturbation rejects degenerate inputs") {
    CHECK_THROWS_AS(collinlab::perturb_vector({0.0, 0.0}, 0.01, {1.0, 0.0}),
                    collinlab::ZeroNormError);
    CHECK_THROWS_AS(collinlab::perturb_vector({1.0, 2.0}, 0.01, {0.0, 0.0}),
                    collinlab::ZeroNormError);
    CHECK_THROWS_AS(collinlab::perturb_vector({1.0, 2.0}, 0.01, {1.0}),
                    collinlab::DimensionMismatchError);
}

TEST_CASE("noise streams are reproducible and distinct per substream") {
    NoiseStream a(7, 3, 1);
    NoiseStream b(7, 3, 1);
    for (int i = 0; i < 32; ++i) CHECK(a.gaussian() == b.gaussian());

    NoiseStream c(7, 3, 2);
    NoiseStream d(7, 4, 1);
    NoiseStream e(8, 3, 1);
    NoiseStream base(7, 3, 1);
    bool all_equal_c = true, all_equal_d = true, all_equal_e = true;
    for (int i = 0; i < 8; ++i) {
        const double v = base.gaussian();
        all_equal_c = all_equal_c && v == c.gaussian();
        all_equal_d = all_equal_d && v == d.gaussian();
        all_equal_e = all_equal_e && v == e.gaussian();
    }
    CHECK_FALSE(all_equal_c);
    CHECK_FALSE(all_equal_d);
    CHECK_FALSE(all_equal_e);
}

TEST_CASE("noise draws respect each distribution's support") {
    NoiseStream stream(123, 0, 0);
    for (int i = 0; i < 1000; ++i) {
        CHECK(stream.exponential() > 0.0);
    }
    NoiseStream ustream(123, 1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double u = ustream.uniform();
        CHECK(u > -1.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("noise distribution names round-trip and reject unknowns") {
    for (NoiseDistribution d : {NoiseDistribution::exponential, NoiseDistribution::gaussian,
                                NoiseDistribution::uniform}) {
        CHECK(collinlab::parse_noise_distribution(collinlab::to_string(d)) == d);
    }
    CHECK_THROWS_AS(collinlab::parse_noise_distribution("cauchy"), collinlab::Error);
}

TEST_CASE("design perturbation skips the first column and moves the rest exactly") {
    const Dataset data = testsupport::random_dataset(5, 10, 3);
    const double pct = 0.02;
    const Matrix perturbed = collinlab::perturb_design(data.X, pct, 11, 0, true);
    CHECK(perturbed.column(0) == data.X.column(0));
    for (std::size_t j = 1; j < data.k(); ++j) {
        const Vector before = data.X.column(j);
        const Vector after = perturbed.column(j);
        const double moved =
            collinlab::distance(after, before) / collinlab::euclidean_norm(before);
        CHECK(std::abs(moved - pct) < 1e-12);
    }
}

TEST_CASE("explicit stream ids make column noise independent of column order") {
    const Dataset data = testsupport::random_dataset(6, 9, 3);
    const Matrix& x = data.X;
    Matrix swapped = x;
    swapped.set_column(1, x.column(2));
    swapped.set_column(2, x.column(1));

    const std::vector<std::uint64_t> ids = {collinlab::kFrozenColumn, 5, 9};
    const std::vector<std::uint64_t> swapped_ids = {collinlab::kFrozenColumn, 9, 5};
    const Matrix p = collinlab::perturb_design(x, 0.01, 3, 2, ids);
    const Matrix ps = collinlab::perturb_design(swapped, 0.01, 3, 2, swapped_ids);
    CHECK(p.column(1) == ps.column(2));
    CHECK(p.column(2) == ps.column(1));
    CHECK(p.column(0) == x.column(0));  // frozen id leaves the column untouched
}

TEST_CASE("stream id list must cover every design column") {
    const Dataset data = testsupport::random_dataset(6, 9, 3);
    CHECK_THROWS_AS(collinlab::perturb_design(data.X, 0.01, 3, 2, {1, 2}),
                    collinlab::DimensionMismatchError);
}

TEST_CASE("dataset perturbation never touches the response or the intercept") {
    const Dataset data = testsupport::random_dataset(9, 12, 4);
    PerturbationConfig cfg;
    cfg.pct = 0.05;
    cfg.seed = 4;
    const Dataset perturbed = collinlab::perturb_design(data, cfg, 17);
    CHECK(perturbed.y == data.y);
    CHECK(perturbed.X.column(0) == data.X.column(0));
    CHECK(perturbed.X.column(1) != data.X.column(1));

    PerturbationConfig with_intercept = cfg;
    with_intercept.perturb_intercept = true;
    const Dataset all_moved = collinlab::perturb_design(data, with_intercept, 17);
    CHECK(all_moved.X.column(0) != data.X.column(0));
}

TEST_CASE("coefficient shift is the percent displacement of the full vector") {
    CHECK(std::abs(collinlab::coefficient_shift({1.0, 0.0}, {0.0, 1.0}) -
                   100.0 * std::sqrt(2.0)) < 1e-12);
    CHECK(collinlab::coefficient_shift({2.0, 3.0}, {2.0, 3.0}) == 0.0);
    CHECK_THROWS_AS(collinlab::coefficient_shift({0.0, 0.0}, {1.0, 0.0}),
                    collinlab::ZeroNormError);
    CHECK_THROWS_AS(collinlab::coefficient_shift({1.0}, {1.0, 2.0}),
                    collinlab::DimensionMismatchError);
}

TEST_CASE("perturbation configuration rejects a negative or non-finite fraction") {
    PerturbationConfig bad;
    bad.pct = -0.01;
    CHECK_THROWS_AS(bad.validate(), collinlab::Error);
    bad.pct = std::nan("");
    CHECK_THROWS_AS(bad.validate(), collinlab::Error);
}

TEST_CASE("monte carlo summary statistics agree with the recorded shifts") {
    const Dataset data = testsupport::random_dataset(14, 15, 3);
    PerturbationConfig cfg;
    cfg.trials = 64;
    cfg.seed = 2;
    const PerturbationSummary s = collinlab::monte_carlo_stability(data, cfg);
    REQUIRE(s.shifts.size() == 64);
    CHECK(s.failed == 0);

    double mean = 0.0, lo = s.shifts[0], hi = s.shifts[0];
    for (double v : s.shifts) {
        mean += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    mean /= 64.0;
    double ss = 0.0;
    for (double v : s.shifts) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / 63.0);
    CHECK(std::abs(s.mean - mean) < 1e-12);
    CHECK(std::abs(s.sd - sd) < 1e-12);
    CHECK(s.min == lo);
    CHECK(s.max == hi);
}

TEST_CASE("monte carlo runs are deterministic for a fixed seed and thread count") {
    const Dataset data = testsupport::random_dataset(14, 15, 3);
    PerturbationConfig cfg;
    cfg.trials = 40;
    cfg.seed = 9;

    cfg.threads = 1;
    const PerturbationSummary sequential = collinlab::monte_carlo_stability(data, cfg);
    const PerturbationSummary sequential_again = collinlab::monte_carlo_stability(data, cfg);
    CHECK(sequential.shifts == sequential_again.shifts);

    cfg.threads = 4;
    const PerturbationSummary parallel = collinlab::monte_carlo_stability(data, cfg);
    CHECK(sequential.shifts == parallel.shifts);

    cfg.threads = 0;  // hardware concurrency
    const PerturbationSummary hardware = collinlab::monte_carlo_stability(data, cfg);
    CHECK(sequential.shifts == hardware.shifts);
}

TEST_CASE("changing the seed or the noise distribution changes the shifts") {
    const Dataset data = testsupport::random_dataset(14, 15, 3);
    PerturbationConfig cfg;
    cfg.trials = 16;
    cfg.seed = 1;
    const PerturbationSummary a = collinlab::monte_carlo_stability(data, cfg);

    cfg.seed = 2;
    const PerturbationSummary b = collinlab::monte_carlo_stability(data, cfg);
    CHECK(a.shifts != b.shifts);

    cfg.seed = 1;
    cfg.distribution = NoiseDistribution::gaussian;
    const PerturbationSummary c = collinlab::monte_carlo_stability(data, cfg);
    CHECK(a.shifts != c.shifts);
    CHECK(c.distribution == NoiseDistribution::gaussian);
}

TEST_CASE("a zero-coefficient base fit makes every trial fail") {
    // A zero response propagates exactly through the solver, so the base
    // coefficients are exactly zero and no relative shift is defined.
    Matrix x(4, 1);
    for (std::size_t i = 0; i < 4; ++i) x(i, 0) = static_cast<double>(i + 1);
    const Dataset data = collinlab::make_dataset({0.0, 0.0, 0.0, 0.0}, x);

    PerturbationConfig cfg;
    cfg.trials = 8;
    const PerturbationSummary s = collinlab::monte_carlo_stability(data, cfg);
    CHECK(s.failed == 8);
    CHECK(s.shifts.empty());
    CHECK(std::isnan(s.mean));
    CHECK(std::isnan(s.sd));
}

TEST_CASE("a single zero-fraction trial reports a zero shift") {
    const Dataset data = testsupport::random_dataset(3, 10, 3);
    PerturbationConfig cfg;
    cfg.pct = 0.0;
    cfg.trials = 1;
    const PerturbationSummary s = collinlab::monte_carlo_stability(data, cfg);
    REQUIRE(s.shifts.size() == 1);
    CHECK(s.mean < 1e-9);
    CHECK(s.sd == 0.0);
}
