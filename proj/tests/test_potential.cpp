#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "raftmin/potential.hpp"
#include "test_support.hpp"

using namespace raftmin;
using namespace raftmin::testing;

TEST_CASE("quartic_truncated well values") {
    const Potential w = Potential::quartic_truncated();
    CHECK(w.value(1.0) == 0.0);
    CHECK(w.value(-1.0) == 0.0);
    CHECK(w.value(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.value(0.5) == doctest::Approx(0.5625).epsilon(1e-15));
}

TEST_CASE("derivatives are consistent with finite differences") {
    const Potential w = Potential::quartic_truncated();
    for (double s : {-5.0, -2.3, -2.0, -1.2, -0.4, 0.0, 0.7, 1.0, 1.9, 2.0, 2.1, 3.5, 8.0}) {
        // avoid straddling the crossover with the stencil
        if (std::abs(std::abs(s) - 2.0) < 2e-4) continue;
        CHECK(close(w.d1(s), fd1_oracle([&](double t) { return w.value(t); }, s), 1e-6,
                    1e-3 + std::abs(w.d1(s))));
        CHECK(std::abs(w.d2(s) - fd2_oracle([&](double t) { return w.value(t); }, s)) <
              1e-5 * (1.0 + std::abs(w.d2(s))));
    }
    // C^2 across the crossover: one-sided values agree
    CHECK(rel_err(w.value(2.0 - 1e-9), w.value(2.0 + 1e-9)) < 1e-7);
    CHECK(rel_err(w.d1(2.0 - 1e-9), w.d1(2.0 + 1e-9)) < 1e-6);
    CHECK(rel_err(w.d2(2.0 - 1e-9), w.d2(2.0 + 1e-9)) < 1e-6);
}

TEST_CASE("estimated constants match independent grid maximization") {
    const Potential w = Potential::quartic_truncated();
    const WellConstants c = w.constants();
    CHECK(c.valid());

    // K_w: dense grid oracle on [-10, 10]; the quadratic tail caps W'' at 12 s0^2 - 4
    double k_oracle = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double s = -10.0 + 20.0 * i / 20000.0;
        k_oracle = std::max(k_oracle, std::abs(w.d2(s)));
    }
    CHECK(std::isfinite(k_oracle));
    CHECK(k_oracle == doctest::Approx(44.0).epsilon(1e-12));
    CHECK(c.K_w == doctest::Approx(k_oracle).epsilon(1e-9));

    // C_w: |W'|/sqrt(W) = 2|s||1+s| inside the quartic region; limit 4 at s=1
    const double near_well = std::abs(w.d1(1.0 + 1e-7)) / std::sqrt(w.value(1.0 + 1e-7));
    CHECK(near_well == doctest::Approx(4.0).epsilon(1e-5));
    double c_oracle = 0.0;
    for (int i = 1; i < 40000; ++i) {
        const double s = -20.0 + 40.0 * i / 40000.0;
        const double ws = w.value(s);
        if (ws > 1e-13) c_oracle = std::max(c_oracle, std::abs(w.d1(s)) / std::sqrt(ws));
    }
    CHECK(c.C_w == doctest::Approx(c_oracle).epsilon(5e-2));
    CHECK(c.C_w >= 4.0);

    CHECK(c.c_w > 0.0);
    // quadratic bound with the estimated constant, including the tail region
    for (double s : {-9.0, -3.0, -2.0, -0.5, 0.0, 0.4, 2.5, 6.0}) {
        const double well = s >= 0.0 ? 1.0 : -1.0;
        CHECK(w.value(s) >= c.c_w * (s - well) * (s - well) * (1.0 - 1e-9) - 1e-12);
    }
}

TEST_CASE("pure quartic fails the bounded second derivative hypothesis") {
    const Potential pure = Potential::custom(
        [](double s) { return (1.0 - s * s) * (1.0 - s * s); },
        [](double s) { return 4.0 * s * s * s - 4.0 * s; },
        [](double s) { return 12.0 * s * s - 4.0; }, "pure_quartic");
    const WellConstants c = estimate_constants(pure);
    CHECK_FALSE(c.K_w_valid);
    CHECK_FALSE(pure.check_hypotheses().all());
}

TEST_CASE("hypotheses hold for the truncated quartic") {
    const HypothesesReport rep = Potential::quartic_truncated().check_hypotheses();
    CHECK(rep.positive_away_from_wells);
    CHECK(rep.zero_at_wells);
    CHECK(rep.quadratic_well_bound);
    CHECK(rep.derivative_bounds);
    CHECK(rep.all());

    // compactness-proof bound W(s) >= (c_w/4) s^2 for |s| >= 2
    const Potential w = Potential::quartic_truncated();
    for (double s : {-20.0, -5.0, -2.0, 2.0, 3.3, 12.0}) {
        CHECK(w.value(s) >= rep.constants.c_w / 4.0 * s * s * (1.0 - 1e-9));
    }
}

TEST_CASE("physical quartic normalization") {
    // wells at +/-1 exactly when a2 = -a4
    const double a4 = 1e-5;
    const double kappa = 1e-19;
    const double lambda = 4.9e-12;
    const Potential w = to_w(-a4, a4, kappa, lambda);
    REQUIRE(w.normalization().has_value());
    const NormalizationReport rep = *w.normalization();
    CHECK(rep.double_well);
    CHECK(rep.wells_at_unit);
    CHECK(rep.well_location == doctest::Approx(1.0).epsilon(1e-14));

    // barrier height (2 kappa / Lambda^2)(a4 / 4), by direct arithmetic
    const double want = 2.0 * kappa / (lambda * lambda) * (a4 / 4.0);
    CHECK(w.value(0.0) == doctest::Approx(want).epsilon(1e-12));
    CHECK(w.value(1.0) == doctest::Approx(0.0).epsilon(1e-18));
    CHECK(w.value(-1.0) == doctest::Approx(0.0).epsilon(1e-18));

    // shifted-off report: wells away from +/-1 is flagged
    const Potential skew = to_w(-2.0 * a4, a4, kappa, lambda);
    CHECK_FALSE(skew.normalization()->wells_at_unit);
    CHECK(skew.normalization()->well_location == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    // a2 >= 0 is not a double well
    const Potential mono = to_w(a4, a4, kappa, lambda);
    CHECK_FALSE(mono.normalization()->double_well);

    CHECK_THROWS_AS(to_w(-a4, -a4, kappa, lambda), std::invalid_argument);
}

TEST_CASE("geodesic integral of sqrt(W) over the wells") {
    // Int_{-1}^{1} sqrt((1-s^2)^2) ds = Int (1-s^2) = 4/3
    const Potential w = Potential::quartic_truncated();
    const double got = simpson_oracle([&](double s) { return std::sqrt(w.value(s)); }, -1.0, 1.0);
    CHECK(got == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
}
