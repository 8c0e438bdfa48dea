#include <gtest/gtest.h>

#include <random>

#include "stagwave/dispersion.hpp"
#include "test_support.hpp"

using namespace stagwave;
using stagwave::testing::make_config;
using stagwave::testing::rel_err;
using stagwave::testing::uniform;

TEST(CubicCoefficients, FrozenValues) {
    // mpmath, 60 digits
    const CubicCoefficients c = cubic_coefficients(make_config(2.0, 1.0), 50.0);
    EXPECT_LE(rel_err(c.A, -1.03), 1e-14);
    EXPECT_LE(rel_err(c.B, -0.176), 1e-14);
    EXPECT_LE(rel_err(c.C, 0.198162), 1e-14);
}

TEST(CubicCoefficients, MatchDirectHyperbolicFormulas) {
    const FluidConfig cfg = make_config(-1.2, 0.7, 0.8, 1.3, 4.0);
    for (double t : {0.05, 0.7, 3.0, 11.0}) {
        const double d1 = cfg.d1(), d2 = cfg.d2(), d = cfg.d(), g1 = cfg.gamma1(), g2 = cfg.gamma2(), g = cfg.g();
        const double A = -(g2 * (t * d2 + std::sinh(t * d2) * std::cosh(t * d1) / std::cosh(t * d)) +
                           g1 * std::sinh(t * d1) * std::cosh(t * d2) / std::cosh(t * d)) / t;
        const double P = std::sinh(t * d1) * std::sinh(t * d2) / std::sinh(t * d);
        const double B = std::tanh(t * d) * ((g2 * g2 * d2 - g) / t + g2 * (g1 - g2) * P / (t * t));
        const double C = g * std::tanh(t * d) / (t * t) * ((g1 - g2) * P + g2 * d2 * t);
        const CubicCoefficients c = cubic_coefficients(cfg, t);
        EXPECT_LE(rel_err(c.A, A), 1e-13);
        EXPECT_LE(rel_err(c.B, B), 1e-13);
        EXPECT_LE(rel_err(c.C, C), 1e-13);
    }
}

TEST(CubicCoefficients, ZeroTopVorticity) {
    const FluidConfig cfg = make_config(-1.5, 0.0, 0.9, 1.1);
    const double t = 2.3;
    const double expected = cfg.g() * std::tanh(t * cfg.d()) / (t * t) * cfg.gamma1() * std::sinh(t * cfg.d1()) *
                            std::sinh(t * cfg.d2()) / std::sinh(t * cfg.d());
    EXPECT_LE(rel_err(cubic_coefficients(cfg, t).C, expected), 1e-13);
}

TEST(CubicCoefficients, AsymptoticExpansionOfA) {
    const FluidConfig cfg = make_config(2.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    // beyond t ~ 20 the remainder is below double resolution
    for (double t : {1.0, 2.0, 4.0, 8.0, 1e2, 1e3, 1e4}) {
        const double err = t * std::abs(cubic_coefficients(cfg, t).A - *asymptotic_reference(cfg, t).A);
        if (t < 10) {
            EXPECT_LT(err, prev);
        } else {
            EXPECT_LE(err, 1e-15);
        }
        prev = err;
    }
}

TEST(CubicCoefficients, RejectsNonPositiveWavenumber) {
    try {
        cubic_coefficients(make_config(2.0, 1.0), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveWavenumber);
    }
}

TEST(CubicCoefficients, DerivativesMatchDifferences) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const FluidConfig cfg = make_config(uniform(rng, -4, 4), uniform(rng, -4, 4), uniform(rng, 0.3, 2),
                                            uniform(rng, 0.3, 2), uniform(rng, 1, 20));
        const double t = std::exp(uniform(rng, std::log(0.1), std::log(200.0)));
        const double h = t * 1e-5;
        const CubicCoefficients p = cubic_coefficients(cfg, t + h);
        const CubicCoefficients m = cubic_coefficients(cfg, t - h);
        const CubicDerivatives d = cubic_coefficient_derivatives(cfg, t);
        const double sA = std::abs(cubic_coefficients(cfg, t).A) / t;
        const double sB = (std::abs(cfg.gamma2() * cfg.gamma2() * cfg.d2()) + cfg.g()) / (t * t) + 1e-300;
        EXPECT_NEAR(d.dA, (p.A - m.A) / (2 * h), 1e-6 * (sA + std::abs(d.dA)));
        EXPECT_NEAR(d.dB, (p.B - m.B) / (2 * h), 1e-6 * (sB + std::abs(d.dB)));
        EXPECT_NEAR(d.dC, (p.C - m.C) / (2 * h), 1e-6 * (cfg.g() * sB + std::abs(d.dC)));
    }
}

TEST(SolveCubic, FactorableCubic) {
    CubicCoefficients c;
    c.t = 1.0;
    c.A = 0.0;
    c.B = -1.0;
    c.C = 0.0;
    const RootTriple r = solve_cubic(c);
    EXPECT_NEAR(r.lambda1, 1.0, 1e-15);
    EXPECT_NEAR(r.lambda2, 0.0, 1e-15);
    EXPECT_NEAR(r.lambda3, -1.0, 1e-15);
}

TEST(SolveCubic, SingleRealRootRejected) {
    CubicCoefficients c;
    c.t = 1.0;
    c.B = 1.0;
    try {
        solve_cubic(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotThreeRealRoots);
    }
}

TEST(SolveCubic, ShortWaveLimits) {
    const RootTriple r = dispersion_roots(make_config(2.0, 1.0), 1e4);
    EXPECT_NEAR(r.lambda1, 1.0, 1e-2);
    EXPECT_GT(r.lambda2, 0.0);
    EXPECT_LT(r.lambda3, 0.0);
    EXPECT_LT(std::abs(r.lambda2), 1e-1);
    EXPECT_LT(std::abs(r.lambda3), 1e-1);
}

TEST(SolveCubic, FrozenRoots) {
    // mpmath bisection, 60 digits
    const RootTriple r = dispersion_roots(make_config(-3.0, 1.0), 200.0);
    EXPECT_LE(rel_err(r.lambda1, 0.99), 1e-13);
    EXPECT_LE(rel_err(r.lambda2, 0.2239864555678292487), 1e-13);
    EXPECT_LE(rel_err(r.lambda3, -0.2189864555678292487), 1e-13);
}

TEST(SolveCubic, ResidualsAndOrdering) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 500; ++i) {
        const double g2 = uniform(rng, 0.2, 4);
        double g1 = uniform(rng, -4, 4);
        if (g1 == g2) g1 += 0.5;
        const FluidConfig cfg = make_config(g1, g2, uniform(rng, 0.3, 2), uniform(rng, 0.3, 2), uniform(rng, 1, 20));
        const double t = std::exp(uniform(rng, std::log(50.0), std::log(1e4)));
        const RootTriple r = dispersion_roots(cfg, t);
        EXPECT_GE(r.lambda1, r.lambda2);
        EXPECT_GE(r.lambda2, r.lambda3);
        EXPECT_LT(r.depressed.disc, 0.0);
        for (double L : r.values()) EXPECT_LE(std::abs(r.coeffs(L)), 1e-10 * r.coeffs.scale(L));
    }
}

TEST(Branch, MonotonicitySigns) {
    EXPECT_LT(branch(make_config(2.0, 1.0), 1, 500.0).dLambda_dt, 0.0);
    EXPECT_GT(branch(make_config(0.5, 1.0), 1, 500.0).dLambda_dt, 0.0);
    EXPECT_LT(branch(make_config(2.0, 1.0), 2, 500.0).dLambda_dt, 0.0);
    const FluidConfig zero_top = make_config(-1.0, 0.0);
    EXPECT_GT(branch(zero_top, 2, 500.0).dLambda_dt, 0.0);
    EXPECT_GT(branch(zero_top, 3, 500.0).dLambda_dt, 0.0);
}

TEST(Branch, DerivativeMatchesDifferences) {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
        const double g2 = uniform(rng, 0.2, 4);
        const FluidConfig cfg = make_config(uniform(rng, -4, 4) + 8.0 * (i % 2), g2, uniform(rng, 0.3, 2),
                                            uniform(rng, 0.3, 2), uniform(rng, 1, 20));
        const double t = std::exp(uniform(rng, std::log(50.0), std::log(2e3)));
        for (int id = 1; id <= 3; ++id) {
            const double h = t * 1e-5;
            const double fd = (branch(cfg, id, t + h).Lambda - branch(cfg, id, t - h).Lambda) / (2 * h);
            const double an = branch(cfg, id, t).dLambda_dt;
            EXPECT_LE(std::abs(fd - an), 1e-6 * std::abs(an) + 1e-11 * (1.0 + std::abs(branch(cfg, id, t).Lambda)) / t)
                << "branch " << id << " t " << t;
        }
    }
}

TEST(Asymptotics, ZeroTopExpansions) {
    const FluidConfig cfg = make_config(-1.0, 0.0);
    const double t = 1e6;
    const RootTriple r = dispersion_roots(cfg, t);
    const AsymptoticReference ref = asymptotic_reference(cfg, t);
    EXPECT_LE(std::abs(r.lambda3 + std::sqrt(cfg.g() / t)), 10.0 / (6.0 * t));
    for (double tt : {1e2, 2e2, 4e2, 8e2, 1.6e3, 1e4, 1e6}) {
        const RootTriple rr = dispersion_roots(cfg, tt);
        const AsymptoticReference a = asymptotic_reference(cfg, tt);
        EXPECT_LE(std::pow(tt, 1.5) * std::abs(rr.lambda2 - *a.lambda2), 1e-6);
        EXPECT_LE(std::pow(tt, 1.5) * std::abs(rr.lambda3 - *a.lambda3), 1e-6);
        EXPECT_LE(std::pow(tt, 1.5) * std::abs(rr.lambda1 - *a.lambda1), 1e-6);
    }
    EXPECT_LE(std::abs(*ref.r - r.depressed.r), 1e-3 * *ref.r);
}

TEST(Asymptotics, UnsupportedSignPattern) {
    try {
        asymptotic_reference(make_config(1.0, -1.0), 100.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedCase);
    }
}

TEST(Symmetry, NegatesAndReverses) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        const FluidConfig cfg = make_config(uniform(rng, -4, 4), uniform(rng, 0.2, 4), uniform(rng, 0.3, 2),
                                            uniform(rng, 0.3, 2), uniform(rng, 1, 20));
        const RootTriple r = dispersion_roots(cfg, std::exp(uniform(rng, std::log(50.0), std::log(1e4))));
        const RootTriple m = symmetry_map(cfg, r);
        const auto expect = negate_reverse(r);
        const double scale = std::abs(r.lambda1) + std::abs(r.lambda3);
        EXPECT_LE(std::abs(m.lambda1 - expect[0]), 1e-10 * scale);
        EXPECT_LE(std::abs(m.lambda2 - expect[1]), 1e-10 * scale);
        EXPECT_LE(std::abs(m.lambda3 - expect[2]), 1e-10 * scale);
    }
}

TEST(Symmetry, NegativeTopLimit) {
    const FluidConfig cfg = make_config(-2.0, -1.0, 1.0, 1.5);
    const RootTriple r = symmetry_map(cfg.mirrored(), dispersion_roots(cfg.mirrored(), 1e4));
    EXPECT_NEAR(r.lambda3, cfg.gamma2() * cfg.d2(), 1e-2);
    EXPECT_TRUE(regime_ordering_holds(cfg, r));
}

TEST(Symmetry, Involution) {
    const FluidConfig cfg = make_config(-1.3, 1.3);
    const RootTriple r = dispersion_roots(cfg, 300.0);
    const RootTriple back = symmetry_map(cfg.mirrored(), symmetry_map(cfg, r));
    EXPECT_DOUBLE_EQ(back.lambda1, r.lambda1);
    EXPECT_DOUBLE_EQ(back.lambda2, r.lambda2);
    EXPECT_DOUBLE_EQ(back.lambda3, r.lambda3);
}

TEST(Regimes, TableOrderings) {
    const double t = 1e3;
    for (const FluidConfig& cfg : {make_config(2.0, 1.0), make_config(-1.0, 0.0), make_config(1.0, 0.0),
                                   make_config(-2.0, -1.0)}) {
        EXPECT_TRUE(regime_ordering_holds(cfg, dispersion_roots(cfg, t))) << regime_tag(classify_regime(cfg));
    }
}

TEST(Threshold, BranchOneCertificate) {
    const FluidConfig cfg = make_config(2.0, 1.0);
    const ThresholdCertificate c = certify_threshold(cfg, 1, 1.0, 1e3, 2000);
    EXPECT_GT(c.t0, 1.0);
    EXPECT_LT(c.t0, 1e3);
    EXPECT_DOUBLE_EQ(c.L0, 2 * M_PI / c.t0);
}

TEST(Threshold, BranchTwoSeparation) {
    const FluidConfig cfg = make_config(2.0, 1.0);
    const ThresholdCertificate c = certify_threshold(cfg, 2, 1.0, 1e3, 2000);
    for (double t : threshold_grid(c.t_lo, c.t_hi, c.samples)) {
        if (t < c.t0) continue;
        const RootTriple r = dispersion_roots(cfg, t);
        EXPECT_LT(r.lambda2, r.lambda1);
    }
}

TEST(Threshold, ZeroTopOrdering) {
    const FluidConfig cfg = make_config(-1.0, 0.0);
    const ThresholdCertificate c = certify_threshold(cfg, 3, 1.0, 1e3, 1000);
    for (double t : threshold_grid(c.t_lo, c.t_hi, c.samples)) {
        if (t < c.t0) continue;
        const RootTriple r = dispersion_roots(cfg, t);
        EXPECT_TRUE(cfg.gamma1() * cfg.d1() < r.lambda3 && r.lambda3 < r.lambda2 && r.lambda2 < 0.0 &&
                    0.0 < r.lambda1);
    }
}

TEST(Threshold, Errors) {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    EXPECT_EQ(code([] { certify_threshold(make_config(2.0, 1.0), 3, 1.0, 1e3, 100); }),
              ErrorCode::UnsupportedRegime);
    EXPECT_EQ(code([] { certify_threshold(make_config(-1.0, 0.0), 1, 1.0, 1e3, 100); }),
              ErrorCode::UnsupportedRegime);
    EXPECT_EQ(code([] { certify_threshold(make_config(2.0, 1.0), 1, 0.01, 0.1, 10); }),
              ErrorCode::NoAdmissibleThreshold);
}
