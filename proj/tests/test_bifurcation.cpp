// Tests for branch certification and first-order wave construction.
#include <gtest/gtest.h>

#include <cmath>

#include "stagwave/bifurcation.hpp"
#include "stagwave/oracle.hpp"
#include "stagwave/reference_cases.hpp"
#include "test_support.hpp"

using namespace stagwave;
using stagwave::testing::make_config;
using stagwave::testing::rel_err;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an exception";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(TheoremTable, SignPatternsSelectTheorems) {
    EXPECT_EQ(detail::theorem_for(make_config(2.0, 1.0), 1), Theorem::MT1);
    EXPECT_EQ(detail::theorem_for(make_config(2.0, 1.0), 2), Theorem::MT2);
    EXPECT_EQ(detail::theorem_for(make_config(-3.0, 1.0), 3), Theorem::MT3);
    EXPECT_EQ(detail::theorem_for(make_config(-3.0, 0.0), 3), Theorem::MT4);
    EXPECT_EQ(detail::theorem_for(make_config(-3.0, 0.0), 2), Theorem::MT5i);
}

TEST(TheoremTable, UnsupportedRegimes) {
    EXPECT_EQ(code_of([] { detail::theorem_for(make_config(2.0, 1.0), 3); }), ErrorCode::UnsupportedRegime);
    EXPECT_EQ(code_of([] { detail::theorem_for(make_config(-3.0, 0.0), 1); }), ErrorCode::UnsupportedRegime);
    EXPECT_EQ(code_of([] { detail::theorem_for(make_config(3.0, 0.0), 2); }), ErrorCode::UnsupportedRegime);
    EXPECT_EQ(code_of([] { detail::theorem_for(make_config(1.0, -2.0), 1); }), ErrorCode::UnsupportedRegime);
    EXPECT_EQ(code_of([] { detail::theorem_for(make_config(1.0, 2.0), 4); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { certify(make_config(2.0, 1.0), 3); }), ErrorCode::UnsupportedRegime);
}

TEST(Certify, MT1WithBottomStagnation) {
    const BranchCertificate c = certify_auto_wavelength(make_config(2.0, 1.0), 1);
    EXPECT_EQ(c.theorem, Theorem::MT1);
    EXPECT_STREQ(c.stagnation.tag(), "bottom");
    EXPECT_DOUBLE_EQ(c.L_effective, c.cfg.L());
    EXPECT_LE(c.cfg.L(), c.L0);
}

TEST(Certify, MT3NeedsNegativeWeightedVorticity) {
    const BranchCertificate c = certify_auto_wavelength(make_config(-3.0, 1.0), 3);
    EXPECT_EQ(c.theorem, Theorem::MT3);
    EXPECT_STREQ(c.stagnation.tag(), "bottom");
}

TEST(Certify, WavelengthAboveThresholdIsRejected) {
    const FluidConfig cfg = make_config(6.0, 4.0);
    const ThresholdCertificate thr = detail::default_threshold(cfg, 1);
    EXPECT_EQ(code_of([&] { certify(cfg.with_wavelength(1.5 * thr.L0), 1, kDefaultKMax, thr); }),
              ErrorCode::WavelengthAboveThreshold);
}

TEST(Certify, RejectsForeignThresholdCertificate) {
    const FluidConfig cfg = make_config(6.0, 4.0);
    const ThresholdCertificate thr = detail::default_threshold(cfg, 2);
    EXPECT_EQ(code_of([&] { certify(cfg.with_wavelength(0.5 * thr.L0), 1, kDefaultKMax, thr); }),
              ErrorCode::InvalidArgument);
}

TEST(Certify, ResonantWavelengthGivesMT5ii) {
    const BranchCertificate c = certify_reference(reference_case("fig3_right_MT5ii"));
    EXPECT_EQ(c.theorem, Theorem::MT5ii);
    EXPECT_EQ(c.resonance_k, 2);
    EXPECT_EQ(c.effective_branch, 3);
    EXPECT_NEAR(c.L_effective, c.cfg.L() / 2.0, 1e-14 * c.cfg.L());
    EXPECT_LT(c.resonance_gap, kResonanceTolerance * std::abs(c.Lambda_star));
    ASSERT_FALSE(c.notes.empty());
    // the tuned wavelength, bisected on Λ3(2t) - Λ2(t)
    EXPECT_LE(rel_err(c.cfg.L(), 5.4278940582057649), 1e-9);
}

TEST(Certify, NonResonantMT5StaysMT5i) {
    const BranchCertificate c = certify_reference(reference_case("fig3_right_MT5i"));
    EXPECT_EQ(c.theorem, Theorem::MT5i);
    EXPECT_EQ(c.resonance_k, 0);
    EXPECT_DOUBLE_EQ(c.L_effective, c.cfg.L());
}

class ReferenceCertificate : public ::testing::TestWithParam<ReferenceCase> {};

TEST_P(ReferenceCertificate, ReproducesBranchRoot) {
    const BranchCertificate c = certify_reference(GetParam());
    const RootTriple r = dispersion_roots(c.cfg, c.wavenumber());
    const double root = c.effective_branch == 1 ? r.lambda1 : c.effective_branch == 2 ? r.lambda2 : r.lambda3;
    EXPECT_LE(rel_err(c.Lambda_star, root), 1e-10);
    EXPECT_LE(c.defining_residual, 1e-8);
}

TEST_P(ReferenceCertificate, HypothesesHold) {
    const BranchCertificate c = certify_reference(GetParam());
    EXPECT_GT(c.min_simplicity_ratio, kSimplicityTolerance);
    EXPECT_EQ(c.simplicity.size(), static_cast<std::size_t>(kDefaultKMax));
    for (const ModeDeterminant& m : c.simplicity) EXPECT_NE(m.k, 1);
    EXPECT_NE(c.transversality, 0.0);
    EXPECT_NE(c.D_lambda, 0.0);
    EXPECT_GT(std::abs(c.Lambda_star), 1e-8);
    EXPECT_GT(std::abs(c.Lambda_star - c.cfg.gamma2() * c.cfg.d2()), 1e-8);
}

TEST_P(ReferenceCertificate, StagnationTagMatchesTheoremTable) {
    const BranchCertificate c = certify_reference(GetParam());
    const FluidConfig& cfg = c.cfg;
    std::string expected = "bottom";
    if (c.theorem == Theorem::MT1) expected = cfg.gamma1() > cfg.gamma2() ? "bottom" : "top";
    if (c.theorem == Theorem::MT2)
        expected = cfg.gamma1() * cfg.d1() + cfg.gamma2() * cfg.d2() <= 0.0 ? "both" : "top";
    EXPECT_EQ(c.stagnation.tag(), expected);
}

TEST_P(ReferenceCertificate, KernelRowsAgreeAndAreNormalised) {
    const BranchCertificate c = certify_reference(GetParam());
    const SymbolMatrix& m = c.symbols;
    EXPECT_LE(rel_err(-m.m22 / m.m21, -m.m12 / m.m11), 1e-8);
    EXPECT_DOUBLE_EQ(std::max(std::abs(c.kernel.a), std::abs(c.kernel.b)), 1.0);
    // orientation (a, b) ∝ +(m22, -m21)
    const double dot = c.kernel.a * m.m22 + c.kernel.b * -m.m21;
    EXPECT_GT(dot, 0.0);
    EXPECT_LE(rel_err(c.amplitude_ratio, -m.m21 / m.m22), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(AllTheorems, ReferenceCertificate, ::testing::ValuesIn(reference_cases()),
                         [](const auto& p) { return p.param.name; });

TEST(KernelDirection, InvariantUnderPositiveRescaling) {
    const BranchCertificate c = certify_reference(reference_case("fig1_left"));
    for (double k : {1e-6, 0.3, 7.0, 1e5}) {
        SymbolMatrix m = c.symbols;
        m.m11 *= k;
        m.m12 *= k;
        m.m21 *= k;
        m.m22 *= k;
        // rows of D = 0 stay proportional, so only the overall scale changes
        const double n = std::max(std::abs(m.m22), std::abs(m.m21));
        EXPECT_NEAR(m.m22 / n, c.kernel.a, 1e-12);
        EXPECT_NEAR(-m.m21 / n, c.kernel.b, 1e-12);
    }
}

TEST(KernelDirection, MT1SignsForLargerBottomVorticity) {
    // m22 < 0 and m21 > 0 on branch 1 when γ1 > γ2
    const BranchCertificate c = certify_reference(reference_case("fig1_left"));
    EXPECT_LT(c.symbols.m22, 0.0);
    EXPECT_GT(c.symbols.m21, 0.0);
    EXPECT_LT(c.kernel.a, 0.0);
    EXPECT_LT(c.kernel.b, 0.0);
}

struct RatioCase {
    double g1;
    double g2;
    int branch;
};

class AmplitudeRatio : public ::testing::TestWithParam<RatioCase> {};

TEST_P(AmplitudeRatio, DivergesAsWavelengthShrinks) {
    const RatioCase rc = GetParam();
    const FluidConfig cfg = make_config(rc.g1, rc.g2);
    const ThresholdCertificate thr = detail::default_threshold(cfg, rc.branch);
    const AmplitudeRatioTable t =
        amplitude_ratio_diagnostic(cfg, rc.branch, {thr.L0, thr.L0 / 2.0, thr.L0 / 4.0}, thr);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_TRUE(t.monotone_divergence);
    // at short wavelengths the two rows only agree in extended precision
    for (const AmplitudeRatioRow& r : t.rows) {
        const BranchCertificate c = certify(cfg.with_wavelength(r.L), rc.branch, kDefaultKMax, thr);
        const auto roots = oracle::mp::cubic_roots(oracle::mp::cubic_coefficients(c.cfg, c.wavenumber()));
        const oracle::mp::Symbols m = oracle::mp::symbol_matrix(c.cfg, roots[c.effective_branch - 1], c.wavenumber());
        const oracle::mp::real interface_row = -m.m21 / m.m22;
        const oracle::mp::real surface_row = -m.m11 / m.m12;
        EXPECT_LE(oracle::mp::to_double(abs(interface_row - surface_row) / abs(interface_row)), 1e-30);
        EXPECT_LE(rel_err(c.amplitude_ratio, oracle::mp::to_double(interface_row)), 1e-10);
    }
}

INSTANTIATE_TEST_SUITE_P(Branches, AmplitudeRatio,
                         ::testing::Values(RatioCase{6.0, 4.0, 1}, RatioCase{2.0, 4.0, 1}, RatioCase{2.0, 4.0, 2},
                                           RatioCase{-10.0, 4.0, 3}, RatioCase{-3.0, 0.0, 3}));

TEST(BuildWave, ZeroAmplitudeIsLaminar) {
    const BranchCertificate c = certify_reference(reference_case("fig2_left"));
    const WaveSolution w = build_wave(c, 0.0);
    for (double x : {0.0, 0.3, 1.1}) {
        EXPECT_EQ(w.f(x), 0.0);
        EXPECT_EQ(w.h(x), 0.0);
    }
    EXPECT_DOUBLE_EQ(w.laminar.Lambda, c.Lambda_star);
}

TEST(BuildWave, ProfilesFollowTheKernel) {
    const BranchCertificate c = certify_reference(reference_case("fig1_left"));
    const WaveSolution w = build_wave(c, 0.01);
    EXPECT_DOUBLE_EQ(w.f_amp, 0.01 * c.kernel.a);
    EXPECT_DOUBLE_EQ(w.h_amp, 0.01 * c.kernel.b);
    EXPECT_NEAR(w.f(w.L_effective()), w.f(0.0), 1e-15);
    EXPECT_NEAR(w.h(-0.3), w.h(0.3), 1e-15);
    EXPECT_TRUE(w.admissible());
}

TEST(BuildWave, RejectsNegativeAndInadmissibleAmplitudes) {
    const BranchCertificate c = certify_reference(reference_case("fig1_left"));
    EXPECT_EQ(code_of([&] { build_wave(c, -0.1); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { build_wave(c, std::nan("")); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { build_wave(c, 5.0); }), ErrorCode::AmplitudeSelectionFailed);
}
