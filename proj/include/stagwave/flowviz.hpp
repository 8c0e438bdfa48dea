/**
 * @file flowviz.hpp
 * @brief Streamline topology of a first-order wave and its plot data.
 *
 * Streamlines in the moving frame are level curves of ψ and trajectories of
 * x' = ψ_y, y' = -ψ_x. This header locates the critical layers (zeros of
 * ψ_y across a layer), the stagnation points on them, the separatrices
 * through the saddles and the closed-orbit regions around the centers. It
 * also checks the sign predicates of the streamline lemmas on sample grids,
 * selects the AUTO amplitude, extracts contours by marching squares and
 * renders SVG.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stagwave/bifurcation.hpp"
#include "stagwave/error.hpp"
#include "stagwave/fields.hpp"
#include "stagwave/format.hpp"
#include "stagwave/jet.hpp"

namespace stagwave {

using Point = std::array<double, 2>;

// ---------------------------------------------------------------------------
// Lemma table

/// Sign pattern asserted by one streamline lemma.
struct LemmaSpec {
    struct Sign {
        std::string item;
        Layer layer;
        char partial;  ///< 'x': ∂xψ on 0 < x < L/2; 'y': ∂yψ on the whole layer
        int sign;
    };
    struct Critical {
        std::string item;
        Layer layer;
        int below_sign;  ///< sign of ∂yψ between the lower layer boundary and ξ
        int xi_direction;  ///< 0: strictly monotone in either direction
        int level_direction;  ///< direction of x ↦ ψ(x, ξ(x))
    };

    std::string name;
    bool amended = false;
    int f_sign = 0;  ///< sign of f' on (0, L/2)
    int h_sign = 0;
    std::vector<Sign> signs;
    std::vector<Critical> critical;
};

inline LemmaSpec lemma_spec(const std::string& name) {
    using L = Layer;
    if (name == "fig1_left")
        return {name, false, +1, +1,
                {{"ii", L::Top, 'x', -1}, {"ii", L::Top, 'y', +1}, {"iii", L::Bottom, 'x', -1}},
                {{"iv", L::Bottom, -1, -1, -1}}};
    if (name == "fig1_right" || name == "fig2_left")
        return {name, false, +1, -1,
                {{"ii", L::Bottom, 'x', +1}, {"ii", L::Bottom, 'y', -1}, {"iii", L::Top, 'x', +1}},
                {{"iv", L::Top, -1, -1, +1}}};
    if (name == "fig2_right")
        return {name, false, +1, -1,
                {{"ii", L::Bottom, 'x', +1}, {"iii", L::Top, 'x', +1}},
                {{"iv", L::Bottom, +1, +1, +1}, {"v", L::Top, -1, -1, +1}}};
    if (name == "fig3_left" || name == "fig3_right")
        return {name, false, -1, -1,
                {{"ii", L::Top, 'x', -1}, {"ii", L::Top, 'y', -1}, {"iii", L::Bottom, 'x', -1}},
                {{"iv", L::Bottom, +1, +1, -1}}};
    throw Error(ErrorCode::InvalidArgument, "unknown lemma '" + name + "'");
}

/// Name of the lemma covering a certificate.
inline std::string lemma_name(const BranchCertificate& cert) {
    const FluidConfig& c = cert.cfg;
    switch (cert.theorem) {
    case Theorem::MT1: return c.gamma1() > c.gamma2() ? "fig1_left" : "fig1_right";
    case Theorem::MT2: return c.gamma1() * c.d1() + c.gamma2() * c.d2() > 0.0 ? "fig2_left" : "fig2_right";
    case Theorem::MT3: return "fig3_left";
    case Theorem::MT4:
    case Theorem::MT5i:
    case Theorem::MT5ii: return "fig3_right";
    }
    return "fig1_left";
}

/// Stated: the lemma as printed. Amended: the sign pattern the first-order field actually has.
enum class LemmaReading { Stated, Amended };

inline const char* to_string(LemmaReading r) { return r == LemmaReading::Stated ? "stated" : "amended"; }

/**
 * The amended reading differs in two places.
 * - ξ is only required to be strictly monotone. Its direction follows the
 *   sign of a·(Λ - γ₂d₂)·γ₁ in the bottom layer, not a·Λ·γ₁.
 * - On the branch-2 wave for γ₂ = 0 the kernel has m21 > 0, so h' > 0 and
 *   ∂xψ changes sign inside the top layer.
 */
inline LemmaSpec lemma_spec(const BranchCertificate& cert, LemmaReading reading = LemmaReading::Stated) {
    LemmaSpec spec = lemma_spec(lemma_name(cert));
    if (reading == LemmaReading::Stated) return spec;
    spec.amended = true;
    for (LemmaSpec::Critical& c : spec.critical) c.xi_direction = 0;
    if (cert.theorem == Theorem::MT5i) {
        spec.h_sign = +1;
        std::erase_if(spec.signs, [](const LemmaSpec::Sign& s) { return s.layer == Layer::Top && s.partial == 'x'; });
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Scales and layer geometry

/// Largest laminar |u - c| on the surface, interface and bed.
inline double velocity_scale(const FlowField& field) {
    const FluidConfig& c = field.cfg();
    const double L = field.wave().certificate.Lambda_star;
    const double g2d2 = c.gamma2() * c.d2();
    return std::max({std::abs(L), std::abs(L - g2d2), std::abs(L - g2d2 - c.gamma1() * c.d1()), 1e-300});
}

/// Lower and upper physical boundary of a layer at x.
inline std::pair<double, double> layer_bounds(const FlowField& field, Layer layer, double x) {
    if (layer == Layer::Top) return {field.interface(x), field.surface(x)};
    return {field.bed(), field.interface(x)};
}

/// Flattened ỹ range of a layer.
inline std::pair<double, double> flattened_bounds(const FluidConfig& cfg, Layer layer) {
    if (layer == Layer::Top) return {-cfg.d2(), 0.0};
    return {-cfg.d(), -cfg.d2()};
}

inline std::vector<Layer> critical_layer_tags(const BranchCertificate& cert) {
    std::vector<Layer> out;
    if (cert.stagnation.bottom) out.push_back(Layer::Bottom);
    if (cert.stagnation.top) out.push_back(Layer::Top);
    return out;
}

// ---------------------------------------------------------------------------
// Critical layers

/// Sampled curve ξ(x) on [0, L/2] where ∂yψ vanishes inside one layer.
struct CriticalLayer {
    Layer layer = Layer::Bottom;
    std::vector<double> x;
    std::vector<double> xi;
    std::vector<double> dxi;     ///< -ψ_xy/ψ_yy on the curve
    std::vector<double> level;   ///< ψ(x, ξ(x))
    std::vector<double> dlevel;  ///< ψ_x(x, ξ(x))
    int below_sign = 0;       ///< sign of ∂yψ on the lower boundary
    int xi_direction = 0;     ///< +1 increasing, -1 decreasing, 0 neither
    int level_direction = 0;
    double min_gap = 0.0;     ///< smallest distance from ξ to the layer boundaries
    int level_sign_changes = 0;  ///< interior sign changes of ψ_x along ξ
};

namespace detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// +1 if all values are positive, -1 if all negative, else 0.
inline int direction_of(const std::vector<double>& v, std::size_t first, std::size_t last) {
    bool pos = true, neg = true;
    for (std::size_t i = first; i < last; ++i) {
        pos = pos && v[i] > 0.0;
        neg = neg && v[i] < 0.0;
    }
    if (first >= last) return 0;
    return pos ? 1 : (neg ? -1 : 0);
}

inline double zero_of_psi_y(const FlowField& field, Layer layer, double x, double lo, double hi, double flo) {
    const double tol = 1e-15 * field.cfg().d();
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = field.jet_layer(layer, x, mid).dy;
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) a = mid;
        else b = mid;
    }
    double y = 0.5 * (a + b);
    for (int it = 0; it < 3; ++it) {
        const Jet2 j = field.jet_layer(layer, x, y);
        if (j.dyy == 0.0) break;
        const double yn = y - j.dy / j.dyy;
        if (!(yn > lo && yn < hi)) break;
        y = yn;
    }
    return y;
}

}  // namespace detail

inline CriticalLayer critical_layer(const FlowField& field, Layer layer, int n = 257) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "critical layer needs at least 3 samples");
    const double half = 0.5 * field.period();
    CriticalLayer out;
    out.layer = layer;
    out.min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = half * i / (n - 1);
        const auto [lo, hi] = layer_bounds(field, layer, x);
        const double flo = field.jet_layer(layer, x, lo).dy;
        const double fhi = field.jet_layer(layer, x, hi).dy;
        if (!(flo * fhi < 0.0))
            throw Error(ErrorCode::BracketingFailed, std::string("d/dy psi keeps its sign across the ") +
                                                         to_string(layer) + " layer at x = " + fmt::sig17(x));
        const int bs = detail::sign_of(flo);
        if (i == 0) out.below_sign = bs;
        else if (bs != out.below_sign)
            throw Error(ErrorCode::BracketingFailed, "boundary signs of d/dy psi change along the layer");
        const double y = detail::zero_of_psi_y(field, layer, x, lo, hi, flo);
        const Jet2 j = field.jet_layer(layer, x, y);
        out.x.push_back(x);
        out.xi.push_back(y);
        out.dxi.push_back(j.dyy != 0.0 ? -j.dxy / j.dyy : 0.0);
        out.level.push_back(j.v);
        out.dlevel.push_back(j.dx);
        out.min_gap = std::min({out.min_gap, y - lo, hi - y});
    }
    out.xi_direction = detail::direction_of(out.dxi, 1, out.dxi.size() - 1);
    out.level_direction = detail::direction_of(out.dlevel, 1, out.dlevel.size() - 1);
    for (std::size_t i = 2; i + 1 < out.dlevel.size(); ++i)
        if (detail::sign_of(out.dlevel[i]) != detail::sign_of(out.dlevel[i - 1])) ++out.level_sign_changes;
    return out;
}

/// Critical layers in the layers tagged by the certificate.
inline std::vector<CriticalLayer> critical_layers(const FlowField& field, int n = 257) {
    std::vector<CriticalLayer> out;
    for (Layer l : critical_layer_tags(field.wave().certificate)) out.push_back(critical_layer(field, l, n));
    return out;
}

// ---------------------------------------------------------------------------
// Stagnation points

enum class StagnationKind { Saddle, Center };

inline const char* to_string(StagnationKind k) { return k == StagnationKind::Saddle ? "saddle" : "center"; }

struct StagnationPoint {
    double x = 0.0;
    double y = 0.0;
    StagnationKind kind = StagnationKind::Saddle;
    Layer layer = Layer::Bottom;
    double hessian_det = 0.0;
    double grad_norm = 0.0;  ///< |∇ψ| / velocity scale at the refined point
};

inline StagnationPoint refine_stagnation_point(const FlowField& field, Layer layer, double x, double y) {
    const double vs = velocity_scale(field);
    Jet2 j = field.jet_layer(layer, x, y);
    for (int it = 0; it < 50; ++it) {
        const double det = j.dxx * j.dyy - j.dxy * j.dxy;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dx = -(j.dyy * j.dx - j.dxy * j.dy) / det;
        const double dy = -(-j.dxy * j.dx + j.dxx * j.dy) / det;
        x += dx;
        y += dy;
        j = field.jet_layer(layer, x, y);
        if (std::hypot(j.dx, j.dy) <= 1e-13 * vs || std::hypot(dx, dy) <= 1e-15 * field.cfg().d()) break;
    }
    const double g = std::hypot(j.dx, j.dy) / vs;
    if (!(g <= 1e-8))
        throw Error(ErrorCode::NewtonDivergence,
                    "stagnation seed near x = " + fmt::sig17(x) + " did not converge (|grad psi| = " + fmt::sci(g) + ")");
    StagnationPoint p;
    p.x = x;
    p.y = y;
    p.layer = layer;
    p.hessian_det = j.dxx * j.dyy - j.dxy * j.dxy;
    p.kind = p.hessian_det < 0.0 ? StagnationKind::Saddle : StagnationKind::Center;
    p.grad_norm = g;
    return p;
}

/// Points seeded at x = 0, L/2 and L on each critical layer, refined and deduplicated.
inline std::vector<StagnationPoint> stagnation_points(const FlowField& field, const std::vector<CriticalLayer>& layers) {
    if (field.wave().s == 0.0)
        throw Error(ErrorCode::DegenerateLaminarLine, "at s = 0 every point of the line y = y0 is a stagnation point");
    const double L = field.period();
    std::vector<StagnationPoint> out;
    for (const CriticalLayer& cl : layers) {
        const std::array<Point, 3> seeds{{{0.0, cl.xi.front()}, {0.5 * L, cl.xi.back()}, {L, cl.xi.front()}}};
        for (const Point& s : seeds) {
            const StagnationPoint p = refine_stagnation_point(field, cl.layer, s[0], s[1]);
            const bool dup = std::any_of(out.begin(), out.end(), [&](const StagnationPoint& q) {
                return std::hypot(q.x - p.x, q.y - p.y) <= 1e-9 * field.cfg().d();
            });
            if (!dup) out.push_back(p);
        }
    }
    return out;
}

inline std::vector<StagnationPoint> stagnation_points(const FlowField& field) {
    return stagnation_points(field, critical_layers(field));
}

// ---------------------------------------------------------------------------
// Lemma predicates

struct SignCheck {
    std::string name;
    bool passed = false;
    double margin = 0.0;  ///< smallest sign·value over the samples, scaled
    int samples = 0;
};

struct PredicateItem {
    std::string id;  ///< "i" … "v"
    bool passed = true;
    std::vector<SignCheck> checks;
};

struct PredicateReport {
    std::string lemma;
    LemmaReading reading = LemmaReading::Stated;
    std::vector<PredicateItem> items;
    bool all_pass = false;

    /// "(ii) d/dx psi < 0 in top layer" style description of the first failing check, empty if none.
    std::string failing_predicate() const {
        for (const PredicateItem& it : items)
            for (const SignCheck& c : it.checks)
                if (!c.passed) return "(" + it.id + ") " + c.name;
        return {};
    }
};

struct PredicateOptions {
    int nx = 96;  ///< samples across [0, L/2]
    int ny = 48;  ///< samples across each layer
    int n_critical = 129;
};

namespace detail {

class SignAccumulator {
public:
    SignAccumulator(std::string name, int sign, double scale) : name_(std::move(name)), sign_(sign), scale_(scale) {}
    void add(double v) {
        const double m = sign_ * v / scale_;
        margin_ = std::min(margin_, std::isnan(m) ? -std::numeric_limits<double>::infinity() : m);
        ++n_;
    }
    SignCheck result() const { return {name_, n_ > 0 && margin_ > 0.0, margin_, n_}; }

private:
    std::string name_;
    int sign_;
    double scale_;
    double margin_ = std::numeric_limits<double>::infinity();
    int n_ = 0;
};

inline std::string rel(int sign) { return sign > 0 ? " > 0" : " < 0"; }

inline PredicateItem& item(PredicateReport& r, const std::string& id) {
    for (PredicateItem& it : r.items)
        if (it.id == id) return it;
    r.items.push_back({id, true, {}});
    return r.items.back();
}

}  // namespace detail

inline PredicateReport verify_lemma_predicates(const FlowField& field, const LemmaSpec& spec,
                                               const PredicateOptions& opt = {}) {
    PredicateReport rep;
    rep.lemma = spec.name;
    rep.reading = spec.amended ? LemmaReading::Amended : LemmaReading::Stated;
    const WaveSolution& w = field.wave();
    const double half = 0.5 * field.period();
    const double vs = velocity_scale(field);
    const double ps = std::max(w.s * w.wavenumber(), 1e-300);

    {
        detail::SignAccumulator f("f'" + detail::rel(spec.f_sign) + " on (0, L/2)", spec.f_sign, ps);
        detail::SignAccumulator h("h'" + detail::rel(spec.h_sign) + " on (0, L/2)", spec.h_sign, ps);
        for (int i = 1; i < opt.nx; ++i) {
            const double x = half * i / opt.nx;
            f.add(w.df(x));
            h.add(w.dh(x));
        }
        PredicateItem& it = detail::item(rep, "i");
        it.checks.push_back(f.result());
        it.checks.push_back(h.result());
    }

    for (const LemmaSpec::Sign& s : spec.signs) {
        const bool wrt_x = s.partial == 'x';
        std::string name = std::string("d/d") + s.partial + " psi" + detail::rel(s.sign) + " in " + to_string(s.layer) +
                           " layer";
        if (wrt_x) name += " for 0 < x < L/2";
        detail::SignAccumulator acc(name, s.sign, vs);
        const auto [ylo, yhi] = flattened_bounds(field.cfg(), s.layer);
        const int i0 = wrt_x ? 1 : 0;
        const int i1 = wrt_x ? opt.nx - 1 : opt.nx;
        for (int i = i0; i <= i1; ++i) {
            const double x = half * i / opt.nx;
            for (int jy = 1; jy < opt.ny; ++jy) {
                const double y = field.physical_y(s.layer, x, ylo + (yhi - ylo) * jy / opt.ny);
                const Jet2 j = field.jet_layer(s.layer, x, y);
                acc.add(wrt_x ? j.dx : j.dy);
            }
        }
        detail::item(rep, s.item).checks.push_back(acc.result());
    }

    for (const LemmaSpec::Critical& c : spec.critical) {
        PredicateItem& it = detail::item(rep, c.item);
        const std::string where = std::string(" in ") + to_string(c.layer) + " layer";
        try {
            const CriticalLayer cl = critical_layer(field, c.layer, opt.n_critical);
            detail::SignAccumulator below("d/dy psi" + detail::rel(c.below_sign) + " below xi" + where, c.below_sign, vs);
            detail::SignAccumulator above("d/dy psi" + detail::rel(-c.below_sign) + " above xi" + where, -c.below_sign, vs);
            detail::SignAccumulator inside("xi strictly inside the" + where.substr(3), 1, field.cfg().d());
            const int m = std::max(4, opt.ny / 2);
            for (std::size_t i = 0; i < cl.x.size(); ++i) {
                const double x = cl.x[i];
                const auto [lo, hi] = layer_bounds(field, c.layer, x);
                const double xi = cl.xi[i];
                inside.add(std::min(xi - lo, hi - xi));
                for (int k = 0; k < m; ++k) below.add(field.jet_layer(c.layer, x, lo + (xi - lo) * k / m).dy);
                for (int k = 1; k <= m; ++k) above.add(field.jet_layer(c.layer, x, xi + (hi - xi) * k / m).dy);
            }
            const int xi_dir = c.xi_direction != 0 ? c.xi_direction : (cl.xi_direction != 0 ? cl.xi_direction : 1);
            const char* xi_word = c.xi_direction > 0 ? "increasing" : (c.xi_direction < 0 ? "decreasing" : "monotone");
            detail::SignAccumulator dxi(std::string("xi strictly ") + xi_word, xi_dir, 1.0);
            detail::SignAccumulator dlev(std::string("psi(x, xi(x)) strictly ") +
                                             (c.level_direction > 0 ? "increasing" : "decreasing"),
                                         c.level_direction, vs);
            for (std::size_t i = 1; i + 1 < cl.x.size(); ++i) {
                dxi.add(cl.dxi[i]);
                dlev.add(cl.dlevel[i]);
            }
            it.checks.push_back(inside.result());
            it.checks.push_back(below.result());
            it.checks.push_back(above.result());
            it.checks.push_back(dxi.result());
            it.checks.push_back(dlev.result());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BracketingFailed) throw;
            it.checks.push_back({"critical curve exists" + where + " (" + e.what() + ")", false,
                                 -std::numeric_limits<double>::infinity(), 0});
        }
    }

    rep.all_pass = true;
    for (PredicateItem& it : rep.items) {
        it.passed = std::all_of(it.checks.begin(), it.checks.end(), [](const SignCheck& c) { return c.passed; });
        rep.all_pass = rep.all_pass && it.passed;
    }
    return rep;
}

inline PredicateReport verify_lemma_predicates(const FlowField& field, LemmaReading reading = LemmaReading::Stated,
                                               const PredicateOptions& opt = {}) {
    return verify_lemma_predicates(field, lemma_spec(field.wave().certificate, reading), opt);
}

// ---------------------------------------------------------------------------
// AUTO amplitude

struct AmplitudeTrial {
    double s = 0.0;
    bool admissible = false;
    bool predicates = false;
    std::string failure;
};

struct AmplitudeSearch {
    double s0 = 0.0;
    std::vector<AmplitudeTrial> trials;
};

inline constexpr int kMaxAmplitudeHalvings = 20;

/// Largest s = s₀/2ⁿ, n ≤ 20, with an admissible wave on which every predicate of the chosen reading holds.
inline WaveSolution build_wave_auto(const BranchCertificate& cert, AmplitudeSearch* log = nullptr,
                                    LemmaReading reading = LemmaReading::Amended, const PredicateOptions& opt = {}) {
    const FluidConfig& c = cert.cfg;
    const double s0 = 0.05 * std::min(c.d1(), c.d2()) / std::max(std::abs(cert.kernel.a), std::abs(cert.kernel.b));
    AmplitudeSearch local;
    AmplitudeSearch& lg = log ? *log : local;
    lg.s0 = s0;
    lg.trials.clear();
    const LemmaSpec spec = lemma_spec(cert, reading);
    double s = s0;
    for (int n = 0; n <= kMaxAmplitudeHalvings; ++n, s *= 0.5) {
        AmplitudeTrial trial{s, false, false, {}};
        WaveSolution w{.certificate = cert};
        w.s = s;
        w.laminar = laminar_flow(c, cert.Lambda_star);
        w.f_amp = s * cert.kernel.a;
        w.h_amp = s * cert.kernel.b;
        trial.admissible = w.admissible();
        if (!trial.admissible) {
            trial.failure = "profiles leave the admissible set";
            lg.trials.push_back(trial);
            continue;
        }
        const PredicateReport rep = verify_lemma_predicates(FlowField(w), spec, opt);
        trial.predicates = rep.all_pass;
        trial.failure = rep.failing_predicate();
        lg.trials.push_back(trial);
        if (rep.all_pass) return w;
    }
    const std::string last = lg.trials.empty() ? std::string("none") : lg.trials.back().failure;
    throw Error(ErrorCode::AmplitudeSelectionFailed,
                spec.name + " (" + to_string(reading) + ") predicates fail for every s down to " + fmt::sci(s * 2.0) + "; failing predicate: " + last);
}

// ---------------------------------------------------------------------------
// Contours

struct Polyline {
    std::vector<Point> points;
    double level = 0.0;
    Layer layer = Layer::Bottom;
    bool closed = false;
};

struct LevelSpec {
    int count = 24;              ///< evenly spaced levels when `levels` is empty
    std::vector<double> levels;  ///< explicit levels
    std::vector<double> extra;   ///< appended to either of the above
    int nx = 512;
    int ny = 257;
};

struct ContourSet {
    std::vector<double> levels;
    std::vector<Polyline> lines;
    double psi_min = 0.0;
    double psi_max = 0.0;
};

namespace detail {

struct LayerGrid {
    Layer layer;
    int nx = 0, ny = 0;
    std::vector<Point> p;  ///< physical node positions, index j*nx + i
    std::vector<double> v;
};

inline LayerGrid layer_grid(const FlowField& field, Layer layer, int nx, int ny) {
    LayerGrid g{layer, nx, ny, {}, {}};
    g.p.resize(static_cast<std::size_t>(nx) * ny);
    g.v.resize(g.p.size());
    const auto [ylo, yhi] = flattened_bounds(field.cfg(), layer);
    const double L = field.period();
    for (int j = 0; j < ny; ++j) {
        const double yt = ylo + (yhi - ylo) * j / (ny - 1);
        for (int i = 0; i < nx; ++i) {
            const double x = L * i / (nx - 1);
            const double y = field.physical_y(layer, x, yt);
            const std::size_t k = static_cast<std::size_t>(j) * nx + i;
            g.p[k] = {x, y};
            g.v[k] = field.psi_layer(layer, x, y);
        }
    }
    return g;
}

struct Segment {
    std::int64_t e0, e1;
    Point p0, p1;
};

inline void march_level(const LayerGrid& g, double level, std::vector<Polyline>& out) {
    const int nx = g.nx, ny = g.ny;
    auto hid = [nx](int i, int j) { return (static_cast<std::int64_t>(j) * nx + i) * 2; };
    auto vid = [nx](int i, int j) { return (static_cast<std::int64_t>(j) * nx + i) * 2 + 1; };
    auto node = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
    auto cut = [&](std::size_t a, std::size_t b) {
        const double va = g.v[a], vb = g.v[b];
        const double t = (vb == va) ? 0.5 : std::clamp((level - va) / (vb - va), 0.0, 1.0);
        return Point{g.p[a][0] + t * (g.p[b][0] - g.p[a][0]), g.p[a][1] + t * (g.p[b][1] - g.p[a][1])};
    };

    std::vector<Segment> segs;
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const std::size_t c0 = node(i, j), c1 = node(i + 1, j), c2 = node(i + 1, j + 1), c3 = node(i, j + 1);
            const int idx = (g.v[c0] >= level) | (g.v[c1] >= level) << 1 | (g.v[c2] >= level) << 2 |
                            (g.v[c3] >= level) << 3;
            if (idx == 0 || idx == 15) continue;
            // edges: 0 bottom c0-c1, 1 right c1-c2, 2 top c3-c2, 3 left c0-c3
            const std::array<std::int64_t, 4> eid{hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)};
            const std::array<std::pair<std::size_t, std::size_t>, 4> ends{{{c0, c1}, {c1, c2}, {c3, c2}, {c0, c3}}};
            auto add = [&](int a, int b) {
                segs.push_back({eid[a], eid[b], cut(ends[a].first, ends[a].second), cut(ends[b].first, ends[b].second)});
            };
            const bool centre_above = 0.25 * (g.v[c0] + g.v[c1] + g.v[c2] + g.v[c3]) >= level;
            switch (idx) {
            case 1: case 14: add(3, 0); break;
            case 2: case 13: add(0, 1); break;
            case 3: case 12: add(3, 1); break;
            case 4: case 11: add(1, 2); break;
            case 6: case 9: add(0, 2); break;
            case 7: case 8: add(2, 3); break;
            case 5:
                if (centre_above) { add(0, 1); add(2, 3); }
                else { add(3, 0); add(1, 2); }
                break;
            case 10:
                if (centre_above) { add(3, 0); add(1, 2); }
                else { add(0, 1); add(2, 3); }
                break;
            default: break;
            }
        }
    }

    std::unordered_map<std::int64_t, std::array<int, 2>> at_edge;
    at_edge.reserve(segs.size() * 2);
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
        for (std::int64_t e : {segs[s].e0, segs[s].e1}) {
            auto [it, fresh] = at_edge.try_emplace(e, std::array<int, 2>{-1, -1});
            (it->second[0] < 0 ? it->second[0] : it->second[1]) = s;
        }
    }
    std::vector<char> used(segs.size(), 0);
    auto other = [&](std::int64_t e, int s) {
        const auto& a = at_edge.at(e);
        return a[0] == s ? a[1] : a[0];
    };
    for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
        if (used[s0]) continue;
        used[s0] = 1;
        std::vector<Point> fwd{segs[s0].p0, segs[s0].p1};
        std::vector<Point> back;
        bool closed = false;
        // extend forward from e1, then backward from e0
        for (int dir = 0; dir < 2 && !closed; ++dir) {
            std::int64_t e = dir == 0 ? segs[s0].e1 : segs[s0].e0;
            int cur = s0;
            while (true) {
                const int nxt = other(e, cur);
                if (nxt < 0) break;
                if (nxt == s0) {
                    closed = true;
                    break;
                }
                if (used[nxt]) break;
                used[nxt] = 1;
                const Segment& sg = segs[nxt];
                const bool forward = sg.e0 == e;
                const Point p = forward ? sg.p1 : sg.p0;
                e = forward ? sg.e1 : sg.e0;
                (dir == 0 ? fwd : back).push_back(p);
                cur = nxt;
            }
        }
        Polyline pl;
        pl.level = level;
        pl.layer = g.layer;
        pl.closed = closed;
        pl.points.assign(back.rbegin(), back.rend());
        pl.points.insert(pl.points.end(), fwd.begin(), fwd.end());
        out.push_back(std::move(pl));
    }
}

}  // namespace detail

/// Marching squares on an interface-fitted grid per layer.
inline ContourSet contour_set(const FlowField& field, const LevelSpec& spec = {}) {
    if (spec.nx < 2 || spec.ny < 2) throw Error(ErrorCode::InvalidArgument, "contour grid needs at least 2x2 nodes");
    if (spec.levels.empty() && spec.count < 1) throw Error(ErrorCode::InvalidArgument, "need at least one level");
    const std::array<detail::LayerGrid, 2> grids{detail::layer_grid(field, Layer::Bottom, spec.nx, spec.ny),
                                                 detail::layer_grid(field, Layer::Top, spec.nx, spec.ny)};
    ContourSet cs;
    cs.psi_min = std::numeric_limits<double>::infinity();
    cs.psi_max = -cs.psi_min;
    for (const auto& g : grids)
        for (double v : g.v) {
            cs.psi_min = std::min(cs.psi_min, v);
            cs.psi_max = std::max(cs.psi_max, v);
        }
    cs.levels = spec.levels;
    if (cs.levels.empty())
        for (int k = 0; k < spec.count; ++k)
            cs.levels.push_back(cs.psi_min + (cs.psi_max - cs.psi_min) * (k + 0.5) / spec.count);
    cs.levels.insert(cs.levels.end(), spec.extra.begin(), spec.extra.end());
    const LaminarFlow& lam = field.wave().laminar;
    const double tol = 1e-12 * std::max(cs.psi_max - cs.psi_min, 1e-300);
    for (double level : cs.levels) {
        // the surface, interface and bed are drawn separately
        if (std::abs(level) <= tol || std::abs(level - lam.lambda) <= tol || std::abs(level - lam.m) <= tol) continue;
        for (const auto& g : grids) detail::march_level(g, level, cs.lines);
    }
    return cs;
}

// ---------------------------------------------------------------------------
// Separatrices and closed orbits

struct StreamlineOptions {
    double launch_offset = 1e-6;      ///< times d
    double closure_tolerance = 1e-4;  ///< times d
    int steps_per_length = 2000;      ///< initial step is min(L, d) / steps_per_length
    int refinements = 3;
};

struct Separatrix {
    Polyline path;
    std::size_t saddle = 0;       ///< index into the stagnation list
    int branch = 0;               ///< 0..3: ± unstable, ± stable direction
    bool closed = false;          ///< reached another saddle within tolerance
    double closure_distance = 0.0;
    double psi_drift = 0.0;       ///< max |ψ - ψ(saddle)| along the path / ψ range
};

struct ClosedOrbitRegion {
    std::size_t center = 0;
    Layer layer = Layer::Bottom;
    double center_level = 0.0;
    double separatrix_level = 0.0;
    bool bounded = false;  ///< every separatrix in the layer closes
};

/// ψ range over the fluid, from a coarse interface-fitted grid.
inline double psi_range(const FlowField& field) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Layer l : {Layer::Bottom, Layer::Top}) {
        const auto g = detail::layer_grid(field, l, 65, 33);
        for (double v : g.v) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return std::max(hi - lo, 1e-300);
}

namespace detail {

inline Point unit_velocity(const FlowField& field, Layer layer, const Point& p, double time_sign) {
    const Jet2 j = field.jet_layer(layer, p[0], p[1]);
    const double n = std::hypot(j.dx, j.dy);
    if (n == 0.0) return {0.0, 0.0};
    return {time_sign * j.dy / n, -time_sign * j.dx / n};
}

inline Point rk4_step(const FlowField& field, Layer layer, const Point& p, double ds, double sgn) {
    auto add = [](const Point& a, const Point& b, double h) { return Point{a[0] + h * b[0], a[1] + h * b[1]}; };
    const Point k1 = unit_velocity(field, layer, p, sgn);
    const Point k2 = unit_velocity(field, layer, add(p, k1, 0.5 * ds), sgn);
    const Point k3 = unit_velocity(field, layer, add(p, k2, 0.5 * ds), sgn);
    const Point k4 = unit_velocity(field, layer, add(p, k3, ds), sgn);
    return {p[0] + ds / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + ds / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

inline double segment_distance(const Point& a, const Point& b, const Point& q) {
    const double vx = b[0] - a[0], vy = b[1] - a[1];
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((q[0] - a[0]) * vx + (q[1] - a[1]) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(a[0] + t * vx - q[0], a[1] + t * vy - q[1]);
}

}  // namespace detail

/// Fourth-order integration of x' = ψ_y, y' = -ψ_x in arc length.
inline Polyline integrate_streamline(const FlowField& field, Layer layer, Point start, double length, double ds,
                                     double time_sign = 1.0) {
    if (!(ds > 0.0) || !(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "need positive step and length");
    Polyline pl;
    pl.layer = layer;
    pl.level = field.psi_layer(layer, start[0], start[1]);
    pl.points.push_back(start);
    const int n = static_cast<int>(std::ceil(length / ds));
    Point p = start;
    for (int k = 0; k < n; ++k) {
        p = detail::rk4_step(field, layer, p, ds, time_sign);
        pl.points.push_back(p);
    }
    return pl;
}

namespace detail {

inline Separatrix trace_separatrix(const FlowField& field, const std::vector<StagnationPoint>& pts, std::size_t si,
                                   int branch, const StreamlineOptions& opt, double ds, double range) {
    const StagnationPoint& sp = pts[si];
    const double d = field.cfg().d();
    const double L = field.period();
    const Jet2 j = field.jet_layer(sp.layer, sp.x, sp.y);
    const double mu = std::sqrt(std::max(j.dxy * j.dxy - j.dxx * j.dyy, 0.0));
    const double lam = branch < 2 ? mu : -mu;
    Point v{j.dyy, lam - j.dxy};
    if (std::hypot(v[0], v[1]) <= 1e-14 * (std::abs(j.dyy) + mu + std::abs(j.dxy))) v = {lam + j.dxy, -j.dxx};
    const double vn = std::hypot(v[0], v[1]);
    const double side = (branch % 2 == 0) ? 1.0 : -1.0;
    const double time_sign = branch < 2 ? 1.0 : -1.0;
    const double off = opt.launch_offset * d;
    const double tol = opt.closure_tolerance * d;

    Separatrix sep;
    sep.saddle = si;
    sep.branch = branch;
    sep.path.layer = sp.layer;
    sep.path.level = j.v;
    Point p{sp.x + side * off * v[0] / vn, sp.y + side * off * v[1] / vn};
    sep.path.points = {{sp.x, sp.y}, p};
    const double max_len = 4.0 * (L + d);
    double travelled = off;
    double drift = 0.0;
    double best = std::numeric_limits<double>::infinity();
    // the direction field turns on the scale of the distance to a saddle, so steps shrink there
    auto saddle_distance = [&](const Point& a) {
        double r = std::numeric_limits<double>::infinity();
        for (const StagnationPoint& t : pts) {
            if (t.kind != StagnationKind::Saddle || t.layer != sp.layer) continue;
            for (int shift = -2; shift <= 2; ++shift) r = std::min(r, std::hypot(a[0] - t.x - shift * L, a[1] - t.y));
        }
        return r;
    };
    while (travelled < max_len) {
        const double h = std::clamp(0.25 * saddle_distance(p), ds / 256.0, ds);
        const Point q = rk4_step(field, sp.layer, p, h, time_sign);
        travelled += h;
        const auto [lo, hi] = layer_bounds(field, sp.layer, q[0]);
        if (!(q[1] > lo - tol && q[1] < hi + tol)) break;
        drift = std::max(drift, std::abs(field.psi_layer(sp.layer, q[0], q[1]) - j.v));
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (pts[k].kind != StagnationKind::Saddle || pts[k].layer != sp.layer) continue;
            for (int shift = -2; shift <= 2; ++shift) {
                const Point target{pts[k].x + shift * L, pts[k].y};
                if (std::hypot(target[0] - sp.x, target[1] - sp.y) <= tol && travelled < 100.0 * tol) continue;
                const double dist = segment_distance(p, q, target);
                best = std::min(best, dist);
                if (dist <= tol) {
                    sep.path.points.push_back(q);
                    sep.path.points.push_back(target);
                    sep.closed = true;
                    sep.closure_distance = dist;
                    sep.psi_drift = drift / range;
                    return sep;
                }
            }
        }
        sep.path.points.push_back(q);
        p = q;
    }
    sep.closure_distance = best;
    sep.psi_drift = drift / range;
    return sep;
}

}  // namespace detail

/// Four separatrix branches per saddle, each refined until it reaches another saddle.
inline std::vector<Separatrix> separatrices(const FlowField& field, const std::vector<StagnationPoint>& pts,
                                            const StreamlineOptions& opt = {}) {
    const double range = psi_range(field);
    const double ds0 = std::min(field.period(), field.cfg().d()) / opt.steps_per_length;
    std::vector<Separatrix> out;
    for (std::size_t si = 0; si < pts.size(); ++si) {
        if (pts[si].kind != StagnationKind::Saddle) continue;
        for (int b = 0; b < 4; ++b) {
            double ds = ds0;
            Separatrix sep = detail::trace_separatrix(field, pts, si, b, opt, ds, range);
            for (int r = 0; r < opt.refinements && !sep.closed; ++r) {
                ds *= 0.5;
                sep = detail::trace_separatrix(field, pts, si, b, opt, ds, range);
            }
            out.push_back(std::move(sep));
        }
    }
    return out;
}

inline std::vector<ClosedOrbitRegion> closed_orbits(const FlowField& field, const std::vector<StagnationPoint>& pts,
                                                    const std::vector<Separatrix>& seps) {
    std::vector<ClosedOrbitRegion> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].kind != StagnationKind::Center) continue;
        ClosedOrbitRegion r;
        r.center = i;
        r.layer = pts[i].layer;
        r.center_level = field.psi_layer(r.layer, pts[i].x, pts[i].y);
        bool any = false;
        r.bounded = true;
        for (const Separatrix& s : seps) {
            if (s.path.layer != r.layer) continue;
            any = true;
            r.separatrix_level = s.path.level;
            r.bounded = r.bounded && s.closed;
        }
        r.bounded = r.bounded && any;
        out.push_back(r);
    }
    return out;
}

struct StreamlinePlot {
    ContourSet contours;
    std::vector<Separatrix> separatrices;
    std::vector<ClosedOrbitRegion> closed_orbits;
};

/// Contours plus separatrices at the saddle levels; laminar flows get contours only.
inline StreamlinePlot streamlines(const FlowField& field, const LevelSpec& levels = {},
                                  const StreamlineOptions& opt = {}) {
    StreamlinePlot out;
    if (field.wave().s == 0.0) {
        out.contours = contour_set(field, levels);
        return out;
    }
    const std::vector<StagnationPoint> pts = stagnation_points(field);
    LevelSpec spec = levels;
    for (const StagnationPoint& p : pts)
        if (p.kind == StagnationKind::Saddle) spec.extra.push_back(field.psi_layer(p.layer, p.x, p.y));
    out.contours = contour_set(field, spec);
    out.separatrices = separatrices(field, pts, opt);
    for (const Separatrix& s : out.separatrices)
        if (!s.closed)
            throw Error(ErrorCode::GridTooCoarse, "separatrix from the saddle at x = " + fmt::sig17(pts[s.saddle].x) +
                                                      " misses every saddle by " + fmt::sci(s.closure_distance));
    out.closed_orbits = closed_orbits(field, pts, out.separatrices);
    return out;
}

// ---------------------------------------------------------------------------
// Topology

struct FlowTopology {
    std::string lemma;
    std::vector<StagnationPoint> stagnation_points;
    std::vector<CriticalLayer> critical_layers;
    std::vector<Separatrix> separatrices;
    std::vector<ClosedOrbitRegion> closed_orbits;
    PredicateReport predicate_report;  ///< the lemma as stated
    PredicateReport amended_report;
    ContourSet contour_set;
    /// Stagnation points on [0, L] per critical layer, including extra zeros of ψ_x along ξ.
    std::vector<int> stagnation_count;
};

inline FlowTopology analyze_flow(const FlowField& field, const LevelSpec& levels = {},
                                 const StreamlineOptions& opt = {}, const PredicateOptions& popt = {}) {
    FlowTopology t;
    t.lemma = lemma_name(field.wave().certificate);
    t.predicate_report = verify_lemma_predicates(field, LemmaReading::Stated, popt);
    t.amended_report = verify_lemma_predicates(field, LemmaReading::Amended, popt);
    t.critical_layers = critical_layers(field);
    t.stagnation_points = stagnation_points(field, t.critical_layers);
    for (const CriticalLayer& cl : t.critical_layers) {
        const auto n = std::count_if(t.stagnation_points.begin(), t.stagnation_points.end(),
                                     [&](const StagnationPoint& p) { return p.layer == cl.layer; });
        // an interior sign change on (0, L/2) is mirrored on (L/2, L)
        t.stagnation_count.push_back(static_cast<int>(n) + 2 * cl.level_sign_changes);
    }
    StreamlinePlot sp = streamlines(field, levels, opt);
    t.contour_set = std::move(sp.contours);
    t.separatrices = std::move(sp.separatrices);
    t.closed_orbits = std::move(sp.closed_orbits);
    return t;
}

// ---------------------------------------------------------------------------
// SVG

struct SvgOptions {
    int width = 1000;
    int height = 600;
    int margin = 40;
    int boundary_samples = 257;
};

inline std::string render_svg(const FlowField& field, const FlowTopology& topo, const SvgOptions& o = {}) {
    const double L = field.period();
    const double d = field.cfg().d();
    const WaveSolution& w = field.wave();
    const double ytop = std::abs(w.h_amp) + 0.05 * d;
    const double ybot = -d;
    const double pw = o.width - 2.0 * o.margin;
    const double ph = o.height - 2.0 * o.margin;
    auto X = [&](double x) { return fmt::fixed(o.margin + x / L * pw, 2); };
    auto Y = [&](double y) { return fmt::fixed(o.margin + (ytop - y) / (ytop - ybot) * ph, 2); };
    auto points_attr = [&](const std::vector<Point>& pts, double shift) {
        std::string s;
        for (const Point& p : pts) {
            if (!s.empty()) s += ' ';
            s += X(p[0] + shift) + "," + Y(p[1]);
        }
        return s;
    };
    auto curve = [&](auto&& fy) {
        std::vector<Point> pts;
        for (int i = 0; i < o.boundary_samples; ++i) {
            const double x = L * i / (o.boundary_samples - 1);
            pts.push_back({x, fy(x)});
        }
        return pts;
    };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
      << "\" viewBox=\"0 0 " << o.width << ' ' << o.height << "\">\n";
    s << "<style>\n"
         ".boundary{fill:none;stroke:#000;stroke-width:3}\n"
         ".streamline{fill:none;stroke:#777;stroke-width:0.8}\n"
         ".separatrix{fill:none;stroke:#1f4fd1;stroke-width:1.6}\n"
         ".critical{fill:none;stroke:#c03;stroke-width:1.2;stroke-dasharray:6 4}\n"
         ".saddle{fill:#c03}\n"
         ".center{fill:#093}\n"
         "</style>\n";
    s << "<defs><clipPath id=\"period\"><rect x=\"" << X(0.0) << "\" y=\"" << o.margin << "\" width=\""
      << fmt::fixed(pw, 2) << "\" height=\"" << fmt::fixed(ph, 2) << "\"/></clipPath></defs>\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    s << "<g clip-path=\"url(#period)\">\n";
    for (const Polyline& pl : topo.contour_set.lines)
        s << "<polyline class=\"streamline\" points=\"" << points_attr(pl.points, 0.0) << "\"/>\n";
    for (const Separatrix& sep : topo.separatrices)
        for (int k = -1; k <= 1; ++k)
            s << "<polyline class=\"separatrix\" points=\"" << points_attr(sep.path.points, k * L) << "\"/>\n";
    for (const CriticalLayer& cl : topo.critical_layers) {
        std::vector<Point> pts;
        for (std::size_t i = 0; i < cl.x.size(); ++i) pts.push_back({cl.x[i], cl.xi[i]});
        for (std::size_t i = cl.x.size() - 1; i-- > 0;) pts.push_back({L - cl.x[i], cl.xi[i]});
        s << "<polyline class=\"critical\" points=\"" << points_attr(pts, 0.0) << "\"/>\n";
    }
    s << "</g>\n";
    s << "<polyline class=\"boundary\" points=\"" << points_attr(curve([&](double x) { return field.surface(x); }), 0.0)
      << "\"/>\n";
    s << "<polyline class=\"boundary\" points=\""
      << points_attr(curve([&](double x) { return field.interface(x); }), 0.0) << "\"/>\n";
    s << "<polyline class=\"boundary\" points=\"" << points_attr(curve([&](double) { return ybot; }), 0.0) << "\"/>\n";
    for (const StagnationPoint& p : topo.stagnation_points)
        s << "<circle class=\"" << to_string(p.kind) << "\" cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"4\"/>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace stagwave
