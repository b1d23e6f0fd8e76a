#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "scuq/splines.hpp"

using namespace scuq;
using namespace scuq::spline;

namespace {

// Rational quartic written out directly from its closed form.
double rational_quartic(double ul, double ur, double h, double A, double B, double lam, double mul, double mur,
                        double tau) {
    const double s = 1.0 - tau;
    const double q = 1.0 + s * tau * (s * (B * lam + mul) + tau * (A * lam + mur));
    return s * ul + tau * ur - h * s * tau * (s * s * A + lam * s * tau * A * B + tau * tau * B) / q;
}

std::vector<double> random_knots(std::mt19937_64& rng, int L) {
    std::uniform_real_distribution<double> gap(0.05, 1.0);
    std::vector<double> k{-1.0};
    for (int l = 1; l < L; ++l) k.push_back(k.back() + gap(rng));
    const double span = k.back() - k.front();
    for (double& v : k) v = -1.0 + 2.0 * (v + 1.0) / span;
    k.back() = 1.0;
    return k;
}

std::vector<double> dense(const std::vector<double>& knots, int per_interval) {
    std::vector<double> x;
    for (std::size_t l = 0; l + 1 < knots.size(); ++l) {
        for (int p = 0; p < per_interval; ++p) x.push_back(knots[l] + (knots[l + 1] - knots[l]) * p / per_interval);
    }
    x.push_back(knots.back());
    return x;
}

std::vector<double> uniform_knots(int L) {
    std::vector<double> k;
    for (int l = 0; l < L; ++l) k.push_back(-1.0 + 2.0 * l / (L - 1));
    return k;
}

}  // namespace

TEST(KnotData, DerivedQuantities) {
    const std::vector<double> x{0.0, 1.0, 3.0, 4.0};
    const std::vector<double> u{1.0, 2.0, 0.0, 5.0};
    const KnotData k = make_knot_data(x, u);
    EXPECT_EQ(k.h, (std::vector<double>{1.0, 2.0, 1.0}));
    EXPECT_EQ(k.secant, (std::vector<double>{1.0, -1.0, 5.0}));
    // [(U_{l+1}-U_l)/h_l - (U_l-U_{l-1})/h_{l-1}] / (h_l + h_{l-1})
    EXPECT_DOUBLE_EQ(k.delta[1], (-1.0 - 1.0) / 3.0);
    EXPECT_DOUBLE_EQ(k.delta[2], (5.0 + 1.0) / 3.0);
    EXPECT_EQ(k.delta[0], 0.0);
    EXPECT_EQ(k.delta[3], 0.0);
    // first A uses the first interior delta, last B the last interior delta
    EXPECT_DOUBLE_EQ(k.A[0], 1.0 * k.delta[1]);
    EXPECT_DOUBLE_EQ(k.A[1], 2.0 * k.delta[1]);
    EXPECT_DOUBLE_EQ(k.A[2], 1.0 * k.delta[2]);
    EXPECT_DOUBLE_EQ(k.B[0], 1.0 * k.delta[1]);
    EXPECT_DOUBLE_EQ(k.B[1], 2.0 * k.delta[2]);
    EXPECT_DOUBLE_EQ(k.B[2], 1.0 * k.delta[2]);
}

TEST(KnotData, RejectsBadKnots) {
    EXPECT_THROW(make_knot_data(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(make_knot_data(std::vector<double>{0.0, 1.0, 1.0}, std::vector<double>{0.0, 1.0, 2.0}),
                 std::invalid_argument);
    EXPECT_THROW(make_knot_data(std::vector<double>{0.0, 2.0, 1.0}, std::vector<double>{0.0, 1.0, 2.0}),
                 std::invalid_argument);
    EXPECT_THROW(make_knot_data(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, NAN, 2.0}),
                 std::invalid_argument);
    EXPECT_THROW(make_knot_data(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 1.0}),
                 std::invalid_argument);
}

TEST(SPSpline, HandEvaluation) {
    const std::vector<double> x{0.0, 0.5, 1.0}, u{0.0, 0.0, 1.0};
    const KnotData k = make_knot_data(x, u);
    EXPECT_DOUBLE_EQ(k.delta[1], 2.0);
    EXPECT_DOUBLE_EQ(k.A[0], 1.0);
    EXPECT_DOUBLE_EQ(k.B[0], 1.0);
    const SPSpline s(k, default_parameters(k));
    // tau = 0.25 on the first interval
    EXPECT_DOUBLE_EQ(s(0.125), -0.5 * (0.75 * 0.25) * (0.5625 + 0.0625));
    EXPECT_DOUBLE_EQ(s(0.125), -0.05859375);
    EXPECT_DOUBLE_EQ(s(0.25), -0.0625);
}

TEST(SPSpline, MatchesClosedFormWithTension) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> v(-2.0, 2.0), t(0.0, 3.0), tau(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_knots(rng, 6);
        std::vector<double> u(6);
        for (double& w : u) w = v(rng);
        const KnotData k = make_knot_data(x, u);
        ShapeParameters p = default_parameters(k);
        for (double& l : p.lambda) l = t(rng);
        for (double& m : p.mu) m = t(rng);
        const SPSpline s(k, p);
        for (std::size_t l = 0; l < 5; ++l) {
            const double tt = tau(rng);
            const double expected =
                rational_quartic(u[l], u[l + 1], k.h[l], k.A[l], k.B[l], p.lambda[l], p.mu[l], p.mu[l + 1], tt);
            EXPECT_NEAR(s.evaluate_local(l, tt), expected, 1e-13);
        }
    }
}

TEST(SPSpline, KnotsAreExact) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> v(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_knots(rng, 3 + trial % 20);
        std::vector<double> u(x.size());
        for (double& w : u) w = v(rng);
        const KnotData k = make_knot_data(x, u);
        const SPSpline s(k, default_parameters(k));
        for (std::size_t l = 0; l < x.size(); ++l) EXPECT_EQ(s(x[l]), u[l]);
    }
}

TEST(SPSpline, LocateResolvesKnotHitsToTheRight) {
    const std::vector<double> x{-1.0, 0.0, 1.0};
    const KnotData k = make_knot_data(x, std::vector<double>{1.0, 2.0, 4.0});
    const SPSpline s(k, default_parameters(k));
    EXPECT_EQ(s.locate(0.0), (std::pair<std::size_t, double>{1, 0.0}));
    EXPECT_EQ(s.locate(-1.0), (std::pair<std::size_t, double>{0, 0.0}));
    EXPECT_EQ(s.locate(1.0), (std::pair<std::size_t, double>{1, 1.0}));
    EXPECT_EQ(s(1.0), 4.0);
    EXPECT_THROW(s(1.0 + 1e-12), std::out_of_range);
    EXPECT_THROW(s(NAN), std::out_of_range);
}

TEST(SPSpline, LinearAndConstantData) {
    const auto x = uniform_knots(9);
    std::vector<double> lin, con(9, 3.5);
    for (double xi : x) lin.push_back(2.0 * xi - 0.5);
    for (ShapeGoal g : {ShapeGoal::Monotonicity, ShapeGoal::C2, ShapeGoal::Convexity}) {
        const SPSpline s = build_sp_spline(x, lin, g);
        for (double e : s.parameters().lambda) EXPECT_EQ(e, 0.0);
        for (double e : s.parameters().mu) EXPECT_EQ(e, 0.0);
        for (double xi : dense(x, 37)) EXPECT_NEAR(s(xi), 2.0 * xi - 0.5, 1e-14);
    }
    const SPSpline c = build_sp_spline(x, con, ShapeGoal::Positivity);
    for (double xi : dense(x, 37)) EXPECT_EQ(c(xi), 3.5);
}

TEST(SPSpline, RejectsInvalidParameters) {
    const KnotData k = make_knot_data(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 1.0, 0.0});
    ShapeParameters p = default_parameters(k);
    p.mu[1] = -1.0;
    EXPECT_THROW(SPSpline(k, p), std::invalid_argument);
    p = default_parameters(k);
    p.lambda.pop_back();
    EXPECT_THROW(SPSpline(k, p), std::invalid_argument);
}

TEST(SelectTension, MonotoneExample) {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, u{0.0, 1.0, 3.0, 3.5};
    const SPSpline s = build_sp_spline(x, u, ShapeGoal::Monotonicity);
    EXPECT_TRUE(audit(s, ShapeGoal::Monotonicity).passed);
    double prev = -INFINITY;
    for (int i = 0; i <= 300; ++i) {
        const double v = s(3.0 * i / 300.0);
        EXPECT_GE(v, prev - 1e-14);
        prev = v;
    }
}

TEST(SelectTension, RandomMonotoneData) {
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> step(0.0, 1.0), coin(0.0, 1.0);
    std::uniform_int_distribution<int> size(3, 33);
    for (int trial = 0; trial < 500; ++trial) {
        const int L = size(rng);
        const auto x = random_knots(rng, L);
        std::vector<double> u{step(rng)};
        const double dir = trial % 2 ? 1.0 : -1.0;
        for (int l = 1; l < L; ++l) {
            const double r = coin(rng);
            const double d = r < 0.2 ? 0.0 : (r < 0.3 ? 10.0 * step(rng) : step(rng));
            u.push_back(u.back() + dir * d);
        }
        const SPSpline s = build_sp_spline(x, u, ShapeGoal::Monotonicity);
        ASSERT_TRUE(audit(s, ShapeGoal::Monotonicity, 101).passed) << "trial " << trial;
        double prev = s(x.front());
        for (double xi : dense(x, 100)) {
            const double v = s(xi);
            ASSERT_GE(dir * (v - prev), -1e-12) << "trial " << trial << " xi " << xi;
            prev = v;
        }
    }
}

TEST(SelectTension, RandomPositiveData) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> val(0.1, 5.0), tiny(0.0, 1.0);
    std::uniform_int_distribution<int> size(3, 33);
    for (int trial = 0; trial < 500; ++trial) {
        const int L = size(rng);
        const auto x = random_knots(rng, L);
        std::vector<double> u;
        for (int l = 0; l < L; ++l) {
            // occasional near-zero and zero values stress the bound
            const double r = tiny(rng);
            u.push_back(r < 0.1 ? 0.0 : (r < 0.25 ? 1e-3 * tiny(rng) : val(rng)));
        }
        const SPSpline s = build_sp_spline(x, u, ShapeGoal::Positivity);
        ASSERT_TRUE(audit(s, ShapeGoal::Positivity, 101).passed) << "trial " << trial;
        for (double xi : dense(x, 100)) ASSERT_GE(s(xi), 0.0) << "trial " << trial;
    }
    EXPECT_THROW(build_sp_spline(uniform_knots(4), std::vector<double>{1.0, -0.1, 1.0, 2.0}, ShapeGoal::Positivity),
                 std::invalid_argument);
}

TEST(SelectTension, RandomConvexData) {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> slope(-3.0, 3.0), inc(0.0, 2.0), coin(0.0, 1.0);
    std::uniform_int_distribution<int> size(3, 25);
    for (int trial = 0; trial < 300; ++trial) {
        const int L = size(rng);
        const auto x = random_knots(rng, L);
        std::vector<double> u{0.0};
        double d = slope(rng);
        for (int l = 1; l < L; ++l) {
            u.push_back(u.back() + d * (x[static_cast<std::size_t>(l)] - x[static_cast<std::size_t>(l - 1)]));
            if (coin(rng) > 0.3) d += inc(rng);
        }
        const SPSpline s = build_sp_spline(x, u, ShapeGoal::Convexity);
        ASSERT_TRUE(audit(s, ShapeGoal::Convexity, 101).passed) << "trial " << trial;
    }
    EXPECT_THROW(build_sp_spline(uniform_knots(4), std::vector<double>{0.0, 1.0, 0.0, 1.0}, ShapeGoal::Convexity),
                 std::invalid_argument);
}

TEST(SelectTension, C2StrategyIsTwiceDifferentiable) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> v(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_knots(rng, 8);
        std::vector<double> u(8);
        for (double& w : u) w = v(rng);
        const SPSpline s = build_sp_spline(x, u, ShapeGoal::C2);
        for (std::size_t l = 1; l + 1 < x.size(); ++l) {
            const double hl = 1e-3 * s.data().h[l - 1];
            const double hr = 1e-3 * s.data().h[l];
            // third-order one-sided stencils
            const auto left = [&](int i) { return s.evaluate_local(l - 1, 1.0 - i * 1e-3); };
            const auto right = [&](int i) { return s.evaluate_local(l, i * 1e-3); };
            const double d2l = (35 * left(0) - 104 * left(1) + 114 * left(2) - 56 * left(3) + 11 * left(4)) / (12 * hl * hl);
            const double d2r =
                (35 * right(0) - 104 * right(1) + 114 * right(2) - 56 * right(3) + 11 * right(4)) / (12 * hr * hr);
            EXPECT_NEAR(d2l, d2r, 1e-6 * std::max({1.0, std::abs(d2l), std::abs(d2r)})) << "trial " << trial;
        }
    }
}

TEST(SelectTension, StepDataStaysInBand) {
    for (int L : {6, 16, 32}) {
        const auto x = uniform_knots(L);
        for (int jump = 1; jump < L; ++jump) {
            std::vector<double> u;
            for (int l = 0; l < L; ++l) u.push_back(l < jump ? 1.0 : 2.0);
            const SPSpline s = build_sp_spline(x, u, ShapeGoal::Monotonicity);
            for (double xi : dense(x, 100)) {
                ASSERT_GE(s(xi), 1.0 - 1e-12);
                ASSERT_LE(s(xi), 2.0 + 1e-12);
            }
            // positivity only promises a positive interpolant
            const SPSpline p = build_sp_spline(x, u, ShapeGoal::Positivity);
            for (double xi : dense(x, 100)) ASSERT_GE(p(xi), 0.0);
        }
    }
}

TEST(SelectTension, AuditDetectsViolations) {
    // default parameters on step data undershoot
    const auto x = uniform_knots(6);
    const std::vector<double> u{1.0, 1.0, 1.0, 2.0, 2.0, 2.0};
    const KnotData k = make_knot_data(x, u);
    const SPSpline raw(k, default_parameters(k));
    EXPECT_FALSE(audit(raw, ShapeGoal::Monotonicity).passed);
    const SPSpline fixed = build_sp_spline(x, u, ShapeGoal::Monotonicity);
    EXPECT_TRUE(audit(fixed, ShapeGoal::Monotonicity).passed);
    EXPECT_THROW(audit(fixed, ShapeGoal::Monotonicity, 2), std::invalid_argument);
}

TEST(CubicSpline, ReproducesCubics) {
    const auto x = uniform_knots(8);
    std::vector<double> u;
    for (double xi : x) u.push_back(xi * xi * xi);
    const CubicSpline s(x, u);
    for (double xi : dense(x, 50)) EXPECT_NEAR(s(xi), xi * xi * xi, 1e-12);
    std::mt19937_64 rng(2);
    const auto xr = random_knots(rng, 11);
    std::vector<double> ur;
    for (double xi : xr) ur.push_back(1.0 - 2.0 * xi + 0.5 * xi * xi - 3.0 * xi * xi * xi);
    const CubicSpline sr(xr, ur);
    for (double xi : dense(xr, 50)) EXPECT_NEAR(sr(xi), 1.0 - 2.0 * xi + 0.5 * xi * xi - 3.0 * xi * xi * xi, 1e-12);
}

TEST(CubicSpline, ConstantKnotsAndErrors) {
    const auto x = uniform_knots(5);
    const CubicSpline c(x, std::vector<double>(5, 2.0));
    for (double xi : dense(x, 20)) EXPECT_NEAR(c(xi), 2.0, 1e-15);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    std::vector<double> u(12);
    for (double& w : u) w = v(rng);
    const auto xk = random_knots(rng, 12);
    const CubicSpline s(xk, u);
    for (std::size_t l = 0; l < xk.size(); ++l) EXPECT_EQ(s(xk[l]), u[l]);
    EXPECT_THROW(CubicSpline(uniform_knots(3), std::vector<double>(3, 1.0)), std::invalid_argument);
    EXPECT_THROW(c(-1.5), std::out_of_range);
}

TEST(CubicSpline, StepWitnessLeavesBand) {
    const auto x = uniform_knots(6);
    const std::vector<double> u{1.0, 1.0, 1.0, 2.0, 2.0, 2.0};
    const CubicSpline s(x, u);
    double lo = INFINITY, hi = -INFINITY;
    for (double xi : dense(x, 100)) {
        lo = std::min(lo, s(xi));
        hi = std::max(hi, s(xi));
    }
    EXPECT_LT(lo, 1.0 - 1e-3);
    EXPECT_GT(hi, 2.0 + 1e-3);
}
