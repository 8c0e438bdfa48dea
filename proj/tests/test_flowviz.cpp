// Tests for critical layers, stagnation points, predicates, contours and plots.
#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <memory>

#include "stagwave/flowviz.hpp"
#include "stagwave/reference_cases.hpp"
#include "test_support.hpp"

using namespace stagwave;

namespace {

struct Analysed {
    BranchCertificate cert;
    AmplitudeSearch search;
    std::unique_ptr<FlowField> field;
    FlowTopology topo;
};

/// AUTO wave and full topology per reference case, computed once.
const Analysed& analysed(const std::string& name) {
    static std::map<std::string, std::unique_ptr<Analysed>> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return *it->second;
    auto a = std::unique_ptr<Analysed>(new Analysed{certify_reference(reference_case(name)), {}, nullptr, {}});
    a->field = std::make_unique<FlowField>(build_wave_auto(a->cert, &a->search));
    a->topo = analyze_flow(*a->field);
    return *cache.emplace(name, std::move(a)).first->second;
}

/// Where the Hessian puts the centre, per critical layer: 0 or L/2.
struct CenterCase {
    std::string name;
    Layer layer;
    double center_fraction;
};

}  // namespace

TEST(CriticalLayer, LaminarLineIsFlat) {
    const BranchCertificate c = certify_reference(reference_case("fig1_left"));
    const FlowField field(build_wave(c, 0.0));
    const CriticalLayer cl = critical_layer(field, Layer::Bottom, 33);
    const LaminarFlow& lam = field.wave().laminar;
    // ψ⁰' = 0 where γ1 (y + d2) = -(Λ - γ2 d2)
    const double expected = -c.cfg.d2() - (c.Lambda_star - c.cfg.gamma2() * c.cfg.d2()) / c.cfg.gamma1();
    for (double xi : cl.xi) EXPECT_NEAR(xi, expected, 1e-12);
    EXPECT_EQ(cl.xi_direction, 0);
    EXPECT_NEAR(lam.psi_bottom.derivative(expected), 0.0, 1e-12);
    try {
        stagnation_points(field);
        FAIL() << "expected DegenerateLaminarLine";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateLaminarLine);
    }
}

TEST(CriticalLayer, MissingLayerFailsToBracket) {
    const BranchCertificate c = certify_reference(reference_case("fig1_left"));
    const FlowField field(build_wave(c, 0.01));
    try {
        critical_layer(field, Layer::Top);
        FAIL() << "expected BracketingFailed";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BracketingFailed);
    }
}

TEST(CriticalLayer, BottomSlopeSignFollowsFirstOrderFormula) {
    // ξ' has the sign of -a (Λ - γ2 d2) γ1 for a critical layer in the bottom layer
    for (const char* name : {"fig1_left", "fig3_left", "fig3_right_MT4", "fig3_right_MT5i", "fig3_right_MT5ii"}) {
        const Analysed& a = analysed(name);
        const FluidConfig& cfg = a.cert.cfg;
        const int expected =
            -detail::sign_of(a.cert.kernel.a * (a.cert.Lambda_star - cfg.gamma2() * cfg.d2()) * cfg.gamma1());
        const CriticalLayer cl = critical_layer(*a.field, Layer::Bottom);
        EXPECT_EQ(cl.xi_direction, expected) << name;
    }
}

class ReferenceTopology : public ::testing::TestWithParam<ReferenceCase> {};

TEST_P(ReferenceTopology, AutoAmplitudeSatisfiesAmendedPredicates) {
    const Analysed& a = analysed(GetParam().name);
    EXPECT_GT(a.field->wave().s, 0.0);
    EXPECT_LE(a.field->wave().s, a.search.s0);
    EXPECT_TRUE(a.topo.amended_report.all_pass) << a.topo.amended_report.failing_predicate();
    EXPECT_TRUE(a.field->wave().admissible());
}

TEST_P(ReferenceTopology, ThreeStagnationPointsPerCriticalLayer) {
    const Analysed& a = analysed(GetParam().name);
    ASSERT_FALSE(a.topo.stagnation_count.empty());
    EXPECT_EQ(a.topo.critical_layers.size(), critical_layer_tags(a.cert).size());
    for (int n : a.topo.stagnation_count) EXPECT_EQ(n, 3);
    for (const StagnationPoint& p : a.topo.stagnation_points) {
        EXPECT_LE(p.grad_norm, 1e-10);
        EXPECT_NE(p.hessian_det, 0.0);
        EXPECT_EQ(p.kind == StagnationKind::Center, p.hessian_det > 0.0);
    }
}

TEST_P(ReferenceTopology, SeparatricesCloseAndConserveStreamValue) {
    const Analysed& a = analysed(GetParam().name);
    ASSERT_FALSE(a.topo.separatrices.empty());
    for (const Separatrix& s : a.topo.separatrices) {
        EXPECT_TRUE(s.closed);
        EXPECT_LE(s.psi_drift, 1e-8);
    }
    ASSERT_FALSE(a.topo.closed_orbits.empty());
    for (const ClosedOrbitRegion& r : a.topo.closed_orbits) EXPECT_TRUE(r.bounded);
}

TEST_P(ReferenceTopology, ContoursLieOnTheirLevels) {
    const Analysed& a = analysed(GetParam().name);
    const ContourSet& cs = a.topo.contour_set;
    const double range = cs.psi_max - cs.psi_min;
    ASSERT_FALSE(cs.lines.empty());
    for (const Polyline& line : cs.lines) {
        for (std::size_t i = 0; i < line.points.size(); i += 7) {
            const Point& p = line.points[i];
            EXPECT_LE(std::abs(a.field->psi_layer(line.layer, p[0], p[1]) - line.level), 1e-4 * range);
        }
    }
}

TEST_P(ReferenceTopology, SvgIsDeterministic) {
    const Analysed& a = analysed(GetParam().name);
    const std::string s1 = render_svg(*a.field, a.topo);
    const std::string s2 = render_svg(*a.field, analyze_flow(*a.field));
    EXPECT_EQ(s1, s2);
    for (const char* cls : {"class=\"boundary\"", "class=\"separatrix\"", "class=\"critical\"", "class=\"saddle\"",
                            "class=\"center\""})
        EXPECT_NE(s1.find(cls), std::string::npos) << cls;
    EXPECT_EQ(s1.rfind("<svg", 0), 0u);
}

INSTANTIATE_TEST_SUITE_P(AllTheorems, ReferenceTopology, ::testing::ValuesIn(reference_cases()),
                         [](const auto& p) { return p.param.name; });

class CenterLocation : public ::testing::TestWithParam<CenterCase> {};

TEST_P(CenterLocation, HessianPlacesTheCenter) {
    const CenterCase cc = GetParam();
    const Analysed& a = analysed(cc.name);
    const double L = a.field->period();
    int centers = 0;
    for (const StagnationPoint& p : a.topo.stagnation_points) {
        if (p.layer != cc.layer) continue;
        const double frac = std::fmod(p.x / L, 1.0);
        const bool at_center = std::abs(frac - cc.center_fraction) < 1e-6 ||
                               (cc.center_fraction == 0.0 && std::abs(frac - 1.0) < 1e-6);
        EXPECT_EQ(p.kind == StagnationKind::Center, at_center) << "x = " << p.x;
        centers += p.kind == StagnationKind::Center;
    }
    EXPECT_GE(centers, 1);
}

INSTANTIATE_TEST_SUITE_P(
    Cases, CenterLocation,
    ::testing::Values(CenterCase{"fig1_left", Layer::Bottom, 0.5}, CenterCase{"fig1_right", Layer::Top, 0.0},
                      CenterCase{"fig2_left", Layer::Top, 0.0}, CenterCase{"fig2_right", Layer::Bottom, 0.5},
                      CenterCase{"fig2_right", Layer::Top, 0.0}, CenterCase{"fig3_left", Layer::Bottom, 0.0},
                      CenterCase{"fig3_right_MT4", Layer::Bottom, 0.0}),
    [](const auto& p) { return p.param.name + "_" + to_string(p.param.layer); });

TEST(LemmaPredicates, StatedReadingFailsOnlyOnDirectionItems) {
    // the level direction and all sign items hold; only ξ's direction (and MT5i's item (i)) disagree
    for (const char* name : {"fig1_left", "fig1_right", "fig3_left", "fig3_right_MT4", "fig3_right_MT5ii"}) {
        const Analysed& a = analysed(name);
        const PredicateReport& rep = a.topo.predicate_report;
        EXPECT_FALSE(rep.all_pass) << name;
        for (const PredicateItem& it : rep.items)
            for (const SignCheck& c : it.checks)
                if (!c.passed) {
                    EXPECT_EQ(c.name.rfind("xi strictly", 0), 0u) << name << ": " << c.name;
                }
    }
    for (const char* name : {"fig2_left", "fig2_right"}) EXPECT_TRUE(analysed(name).topo.predicate_report.all_pass);
}

TEST(LemmaPredicates, MT5iSurfaceSlopeHasTheOppositeSign) {
    const Analysed& a = analysed("fig3_right_MT5i");
    const PredicateReport& rep = a.topo.predicate_report;
    ASSERT_FALSE(rep.items.empty());
    EXPECT_EQ(rep.items.front().id, "i");
    EXPECT_FALSE(rep.items.front().passed);
    EXPECT_LT(a.cert.kernel.b * a.cert.kernel.a, 0.0);
}

TEST(LemmaPredicates, AmendedReadingOnlyRelaxesDirection) {
    const LemmaSpec stated = lemma_spec("fig1_left");
    const LemmaSpec amended = lemma_spec(analysed("fig1_left").cert, LemmaReading::Amended);
    EXPECT_EQ(stated.signs.size(), amended.signs.size());
    ASSERT_EQ(stated.critical.size(), amended.critical.size());
    EXPECT_EQ(amended.critical[0].xi_direction, 0);
    EXPECT_EQ(amended.critical[0].level_direction, stated.critical[0].level_direction);
    EXPECT_EQ(amended.critical[0].below_sign, stated.critical[0].below_sign);
}

TEST(AutoAmplitude, StatedReadingNamesTheFailingPredicate) {
    const BranchCertificate c = certify_reference(reference_case("fig1_left"));
    AmplitudeSearch log;
    try {
        build_wave_auto(c, &log, LemmaReading::Stated, {32, 16, 33});
        FAIL() << "expected AmplitudeSelectionFailed";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AmplitudeSelectionFailed);
        EXPECT_NE(std::string(e.what()).find("xi strictly decreasing"), std::string::npos) << e.what();
    }
    EXPECT_EQ(log.trials.size(), static_cast<std::size_t>(kMaxAmplitudeHalvings + 1));
}

TEST(AutoAmplitude, StartsFromTheNormalisedAmplitude) {
    const Analysed& a = analysed("fig2_left");
    const double expected = 0.05 * std::min(a.cert.cfg.d1(), a.cert.cfg.d2()) /
                            std::max(std::abs(a.cert.kernel.a), std::abs(a.cert.kernel.b));
    EXPECT_DOUBLE_EQ(a.search.s0, expected);
    ASSERT_FALSE(a.search.trials.empty());
    EXPECT_TRUE(a.search.trials.back().predicates);
}

TEST(Streamlines, LaminarFlowHasContoursOnly) {
    const BranchCertificate c = certify_reference(reference_case("fig2_left"));
    const FlowField field(build_wave(c, 0.0));
    const StreamlinePlot sp = streamlines(field, {.count = 8, .levels = {}, .extra = {}, .nx = 64, .ny = 33});
    EXPECT_TRUE(sp.separatrices.empty());
    EXPECT_FALSE(sp.contours.lines.empty());
    for (const Polyline& line : sp.contours.lines) {
        const double y0 = line.points.front()[1];
        for (const Point& p : line.points) EXPECT_NEAR(p[1], y0, 1e-12);
    }
}

TEST(Streamlines, ContourGridValidation) {
    const BranchCertificate c = certify_reference(reference_case("fig2_left"));
    const FlowField field(build_wave(c, 0.01));
    EXPECT_THROW(contour_set(field, {.count = 0, .levels = {}, .extra = {}, .nx = 64, .ny = 33}), Error);
    EXPECT_THROW(contour_set(field, {.count = 4, .levels = {}, .extra = {}, .nx = 1, .ny = 33}), Error);
}
