// Tests for the mode profiles and the first-order flow field.
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stagwave/fields.hpp"
#include "stagwave/oracle.hpp"
#include "stagwave/reference_cases.hpp"
#include "test_support.hpp"

namespace stagwave {
namespace {

using testing::make_config;
using testing::rel_err;
using testing::uniform;

struct Draw {
    FluidConfig cfg;
    double Lambda;
    double R;
};

Draw random_draw(std::mt19937_64& rng) {
    const double g1 = uniform(rng, -10.0, 10.0);
    const double g2 = uniform(rng, -10.0, 10.0);
    const FluidConfig cfg = make_config(g1, g2, uniform(rng, 0.3, 2.5), uniform(rng, 0.3, 2.5), uniform(rng, 0.1, 12.0));
    return {cfg, uniform(rng, -6.0, 6.0), uniform(rng, 0.1, 6.0)};
}

double profile_scale(const Draw& d) {
    const FluidConfig& c = d.cfg;
    return 1.0 + std::abs(d.Lambda) + std::abs(c.gamma1()) * c.d1() + std::abs(c.gamma2()) * c.d2();
}

TEST(LinearizedCoefficients, BoundaryValuesVanish) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Draw d = random_draw(rng);
        const LinearizedCoefficients k(d.cfg, d.Lambda, d.R);
        const double tol = 1e-12 * profile_scale(d);
        const double d2 = d.cfg.d2();
        EXPECT_LE(std::abs(k.A(0.0)), tol);
        EXPECT_LE(std::abs(k.A(-d2)), tol);
        EXPECT_LE(std::abs(k.B(0.0)), tol);
        EXPECT_LE(std::abs(k.B(-d2)), tol);
        EXPECT_LE(std::abs(k.C(-d2)), tol);
        EXPECT_LE(std::abs(k.C(-d.cfg.d())), tol);
    }
}

TEST(LinearizedCoefficients, OdeResidualAtChebyshevPoints) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 50; ++i) {
        const Draw d = random_draw(rng);
        const LinearizedCoefficients k(d.cfg, d.Lambda, d.R);
        const double d2 = d.cfg.d2();
        const double dd = d.cfg.d();
        const double scale = profile_scale(d) * (1.0 + d.R * d.R);
        for (int j = 0; j < 100; ++j) {
            const double c = 0.5 * (1.0 - std::cos(M_PI * (j + 0.5) / 100.0));
            const double yt = -d2 + c * d2;
            const double yb = -dd + c * (dd - d2);
            const Jet2 a = k.A(Jet2::variable_y(yt));
            const Jet2 b = k.B(Jet2::variable_y(yt));
            const Jet2 cc = k.C(Jet2::variable_y(yb));
            EXPECT_LE(std::abs(a.dyy - d.R * d.R * a.v - k.rhs_A(yt)), 1e-9 * scale);
            EXPECT_LE(std::abs(b.dyy - d.R * d.R * b.v - k.rhs_B(yt)), 1e-9 * scale);
            EXPECT_LE(std::abs(cc.dyy - d.R * d.R * cc.v - k.rhs_C(yb)), 1e-9 * scale);
        }
    }
}

double fd_error(const oracle::BVPSpec& spec, int n, const std::function<double(double)>& exact) {
    const oracle::BVPSolution sol = oracle::fd_solve(spec, n);
    double e = 0.0;
    for (std::size_t i = 0; i < sol.y.size(); ++i) e = std::max(e, std::abs(sol.u[i] - exact(sol.y[i])));
    return e;
}

TEST(LinearizedCoefficients, FiniteDifferenceOracleConvergesAtSecondOrder) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const Draw d = random_draw(rng);
        const LinearizedCoefficients k(d.cfg, d.Lambda, d.R);
        const double d2 = d.cfg.d2();
        const double R2 = d.R * d.R;
        const std::vector<std::pair<oracle::BVPSpec, std::function<double(double)>>> problems = {
            {{-d2, 0.0, R2, [&](double y) { return k.rhs_A(y); }}, [&](double y) { return k.A(y); }},
            {{-d2, 0.0, R2, [&](double y) { return k.rhs_B(y); }}, [&](double y) { return k.B(y); }},
            {{-d.cfg.d(), -d2, R2, [&](double y) { return k.rhs_C(y); }}, [&](double y) { return k.C(y); }},
        };
        for (const auto& [spec, exact] : problems) {
            const double e1 = fd_error(spec, 64, exact);
            const double e2 = fd_error(spec, 128, exact);
            const double e3 = fd_error(spec, 256, exact);
            EXPECT_LE(e3, 1e-3 * profile_scale(d));
            EXPECT_GE(std::log2(e1 / e2), 1.9);
            EXPECT_GE(std::log2(e2 / e3), 1.9);
        }
    }
}

TEST(LinearizedCoefficients, PrintedLambdaCoefficientOfCViolatesItsBoundaryCondition) {
    const FluidConfig cfg = make_config(-3.0, 2.0);
    const double Lambda = 1.7;
    const double R = 2.0;
    const LinearizedCoefficients k(cfg, Lambda, R);
    // same polynomial part, hyperbolic coefficient Λ instead of γ2·d2 - Λ
    const auto printed = [&](double y) {
        return k.C(y) + (Lambda - (cfg.gamma2() * cfg.d2() - Lambda)) * std::sinh(R * (cfg.d() + y)) / std::sinh(R * cfg.d1());
    };
    EXPECT_LE(std::abs(k.C(-cfg.d2())), 1e-13);
    EXPECT_NEAR(printed(-cfg.d2()), 2.0 * Lambda - cfg.gamma2() * cfg.d2(), 1e-12);
}

TEST(LinearizedCoefficients, RejectsNonPositiveWavenumber) {
    const FluidConfig cfg = make_config(1.0, 2.0);
    try {
        LinearizedCoefficients k(cfg, 1.0, 0.0);
        FAIL() << "expected an exception";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveWavenumber);
    }
}

TEST(SymbolIdentities, SymbolsFollowFromProfileDerivatives) {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 200; ++i) {
        const Draw d = random_draw(rng);
        const SymbolMatrix m = symbol_matrix(d.cfg, d.Lambda, d.R);
        const SymbolMatrix p = symbols_from_profiles(d.cfg, d.Lambda, d.R);
        EXPECT_LE(rel_err(m.m11, p.m11), 1e-10);
        EXPECT_LE(rel_err(m.m12, p.m12), 1e-10);
        EXPECT_LE(rel_err(m.m21, p.m21), 1e-10);
        EXPECT_LE(rel_err(m.m22, p.m22), 1e-10);
    }
}

// ---------------------------------------------------------------------------

class ReferenceField : public ::testing::TestWithParam<ReferenceCase> {};

TEST_P(ReferenceField, BoundaryDefectsAreSecondOrderInAmplitude) {
    const BranchCertificate cert = certify_reference(GetParam());
    const double s0 = 2e-3 / std::max(std::abs(cert.kernel.a), std::abs(cert.kernel.b));
    FieldResiduals prev;
    for (int level = 0; level < 3; ++level) {
        const FlowField field(build_wave(cert, s0 / std::pow(2.0, level)));
        const FieldResiduals r = field_residuals(field, 64);
        const double scale = field.wave().laminar.Q;
        EXPECT_LE(r.bed_value, 1e-12 * scale);
        EXPECT_LE(r.surface_psi, 1e-13 * scale);
        EXPECT_LE(r.interface_value, 1e-12 * scale);
        if (level > 0) {
            for (const auto& [a, b] : {std::pair{prev.bernoulli, r.bernoulli},
                                       std::pair{prev.surface_psi_eulerian, r.surface_psi_eulerian},
                                       std::pair{prev.interface_jump, r.interface_jump}}) {
                EXPECT_GE(a / b, 3.5);
                EXPECT_LE(a / b, 4.5);
            }
        }
        prev = r;
    }
}

TEST_P(ReferenceField, VelocityMatchesCentredDifferences) {
    const BranchCertificate cert = certify_reference(GetParam());
    const FlowField field(build_wave(cert, 0.02 / std::max(std::abs(cert.kernel.a), std::abs(cert.kernel.b))));
    const double h = 1e-6 * field.cfg().d();
    std::mt19937_64 rng(15);
    for (int i = 0; i < 40; ++i) {
        const double x = uniform(rng, 0.0, field.period());
        const Layer layer = i % 2 ? Layer::Top : Layer::Bottom;
        const double y = field.physical_y(layer, x, layer == Layer::Top ? uniform(rng, -0.95, -0.05) * field.cfg().d2()
                                                                         : -field.cfg().d2() - uniform(rng, 0.05, 0.95) * field.cfg().d1());
        const auto [u, v] = velocity(field, x, y);
        const double px = (field.psi_layer(layer, x + h, y) - field.psi_layer(layer, x - h, y)) / (2.0 * h);
        const double py = (field.psi_layer(layer, x, y + h) - field.psi_layer(layer, x, y - h)) / (2.0 * h);
        const double vs = std::abs(cert.Lambda_star) + std::abs(u);
        EXPECT_LE(std::abs(u - py), 1e-6 * vs);
        EXPECT_LE(std::abs(-v - px), 1e-6 * vs);
    }
}

TEST_P(ReferenceField, VorticityDefectIsSecondOrderInAmplitude) {
    const BranchCertificate cert = certify_reference(GetParam());
    const FluidConfig& cfg = cert.cfg;
    double prev[2] = {0.0, 0.0};
    for (int level = 0; level < 2; ++level) {
        const double s = 4e-3 / std::pow(2.0, level) / std::max(std::abs(cert.kernel.a), std::abs(cert.kernel.b));
        const FlowField field(build_wave(cert, s));
        double err[2] = {0.0, 0.0};
        for (int i = 0; i < 16; ++i) {
            const double x = field.period() * i / 16.0;
            for (Layer layer : {Layer::Bottom, Layer::Top}) {
                const double yt = layer == Layer::Top ? -0.5 * cfg.d2() : -cfg.d2() - 0.5 * cfg.d1();
                const Jet2 j = field.jet_layer(layer, x, field.physical_y(layer, x, yt));
                const double gamma = layer == Layer::Top ? cfg.gamma2() : cfg.gamma1();
                err[layer == Layer::Top] = std::max(err[layer == Layer::Top], std::abs(j.dxx + j.dyy - gamma));
            }
        }
        if (level > 0) {
            // the profiles solve the linearised equation, so the defect is O(s²)
            for (int l = 0; l < 2; ++l) {
                if (prev[l] > 1e-9) {
                    EXPECT_NEAR(prev[l] / err[l], 4.0, 0.5);
                }
            }
        }
        prev[0] = err[0];
        prev[1] = err[1];
    }
}

TEST_P(ReferenceField, PeriodicAndEven) {
    const BranchCertificate cert = certify_reference(GetParam());
    const FlowField field(build_wave(cert, 0.01 / std::max(std::abs(cert.kernel.a), std::abs(cert.kernel.b))));
    const double L = field.period();
    for (int i = 0; i < 20; ++i) {
        const double x = 0.37 * L * i / 20.0;
        for (Layer layer : {Layer::Bottom, Layer::Top}) {
            const double yt = layer == Layer::Top ? -0.3 * field.cfg().d2() : -field.cfg().d2() - 0.6 * field.cfg().d1();
            const double y = field.physical_y(layer, x, yt);
            const double v = field.psi_layer(layer, x, y);
            EXPECT_NEAR(field.psi_layer(layer, x + L, y), v, 1e-12 * (1.0 + std::abs(v)));
            EXPECT_NEAR(field.psi_layer(layer, -x, y), v, 1e-14 * (1.0 + std::abs(v)));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(AllTheorems, ReferenceField, ::testing::ValuesIn(reference_cases()),
                         [](const auto& p) { return p.param.name; });

// ---------------------------------------------------------------------------

TEST(FlowField, LaminarValuesAtZeroAmplitude) {
    const BranchCertificate cert = certify_reference(reference_case("fig1_left"));
    const FlowField field(build_wave(cert, 0.0));
    const LaminarFlow& lam = field.wave().laminar;
    const double g2 = cert.cfg.gamma2();
    for (int i = 0; i < 10; ++i) {
        const double x = 0.1 * i * field.period();
        EXPECT_NEAR(field.psi(x, 0.0), 0.0, 1e-14);
        EXPECT_NEAR(field.psi(x, -cert.cfg.d()), lam.m, 1e-12 * std::abs(lam.m));
        for (double y : {-0.9, -0.5, -0.1, 0.0}) {
            const auto [u, v] = velocity(field, x, y * cert.cfg.d2());
            EXPECT_NEAR(u, g2 * y * cert.cfg.d2() + cert.Lambda_star, 1e-12);
            EXPECT_NEAR(v, 0.0, 1e-14);
        }
    }
}

TEST(FlowField, PointsOutsideTheFluidAreRejected) {
    const BranchCertificate cert = certify_reference(reference_case("fig2_left"));
    const FlowField field(build_wave(cert, 0.01));
    for (double y : {field.surface(0.0) + 1e-3, field.bed() - 1e-3}) {
        try {
            (void)field.psi(0.0, y);
            FAIL() << "expected PointOutsideFluid";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::PointOutsideFluid);
        }
    }
}

TEST(FlowField, InterfaceTieBreakSelectsBottomLayer) {
    const BranchCertificate cert = certify_reference(reference_case("fig2_left"));
    const FlowField field(build_wave(cert, 0.01));
    const double x = 0.2 * field.period();
    EXPECT_EQ(field.layer_of(x, field.interface(x)), Layer::Bottom);
    EXPECT_EQ(field.layer_of(x, field.interface(x) + 1e-6), Layer::Top);
}

TEST(FlowField, FlatteningMapsInvertEachOther) {
    const BranchCertificate cert = certify_reference(reference_case("fig2_right"));
    const FlowField field(build_wave(cert, 0.03));
    for (int i = 0; i < 10; ++i) {
        const double x = 0.1 * i * field.period();
        for (double yt : {-0.9, -0.4, 0.0}) {
            EXPECT_NEAR(field.flattened_y(Layer::Top, x, field.physical_y(Layer::Top, x, yt)), yt, 1e-14);
            const double yb = -1.0 - yt;
            EXPECT_NEAR(field.flattened_y(Layer::Bottom, x, field.physical_y(Layer::Bottom, x, yb)), yb, 1e-14);
        }
    }
}

}  // namespace
}  // namespace stagwave
