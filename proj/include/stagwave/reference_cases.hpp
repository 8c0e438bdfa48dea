/**
 * @file reference_cases.hpp
 * @brief One certified configuration per theorem and streamline lemma.
 *
 * Shared by the verification suite, the samples and the tests. Every case
 * uses d1 = d2 = 1 and L = 0.9·L0 except the resonant case, whose
 * wavelength is tuned so that Λ2(t) = Λ3(2t).
 */
#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "stagwave/bifurcation.hpp"
#include "stagwave/dispersion.hpp"
#include "stagwave/error.hpp"
#include "stagwave/model.hpp"
#include "stagwave/oracle.hpp"

namespace stagwave {

struct ReferenceCase {
    std::string name;   ///< streamline lemma, or the theorem when no lemma applies
    Theorem theorem = Theorem::MT1;
    FluidParams params;
    int branch_id = 1;
    bool resonant = false;
};

inline std::ostream& operator<<(std::ostream& os, const ReferenceCase& rc) { return os << rc.name; }

inline std::vector<ReferenceCase> reference_cases() {
    return {
        {"fig1_left", Theorem::MT1, {6.0, 4.0, 1.0, 1.0, 9.81, 1.0}, 1, false},
        {"fig1_right", Theorem::MT1, {2.0, 4.0, 1.0, 1.0, 9.81, 1.0}, 1, false},
        {"fig2_left", Theorem::MT2, {2.0, 4.0, 1.0, 1.0, 9.81, 1.0}, 2, false},
        {"fig2_right", Theorem::MT2, {-10.0, 4.0, 1.0, 1.0, 9.81, 1.0}, 2, false},
        {"fig3_left", Theorem::MT3, {-10.0, 4.0, 1.0, 1.0, 9.81, 1.0}, 3, false},
        {"fig3_right_MT4", Theorem::MT4, {-3.0, 0.0, 1.0, 1.0, 9.81, 1.0}, 3, false},
        {"fig3_right_MT5i", Theorem::MT5i, {-3.0, 0.0, 1.0, 1.0, 9.81, 1.0}, 2, false},
        {"fig3_right_MT5ii", Theorem::MT5ii, {-1.0, 0.0, 1.0, 1.0, 0.1, 1.0}, 2, true},
    };
}

/// Fundamental wavenumber t with Λ2(t) = Λ3(k·t), bracketed in [t_lo, t_hi].
inline double resonant_wavenumber(const FluidConfig& cfg, int k, double t_lo, double t_hi) {
    if (!(cfg.gamma2() == 0.0 && cfg.gamma1() < 0.0))
        throw Error(ErrorCode::UnsupportedRegime, "resonance tuning needs gamma2 = 0 and gamma1 < 0");
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "resonant mode must be at least 2");
    const auto gap = [&](double t) { return branch(cfg, 3, k * t).Lambda - branch(cfg, 2, t).Lambda; };
    return oracle::bisect_root(gap, {t_lo, t_hi});
}

inline FluidConfig reference_config(const ReferenceCase& rc) {
    const FluidConfig cfg = validate_config(rc.params);
    if (!rc.resonant) return cfg;
    return cfg.with_wavelength(2.0 * M_PI / resonant_wavenumber(cfg, 2, 0.9, 1.5));
}

inline BranchCertificate certify_reference(const ReferenceCase& rc) {
    const FluidConfig cfg = reference_config(rc);
    BranchCertificate cert = rc.resonant ? certify(cfg, rc.branch_id) : certify_auto_wavelength(cfg, rc.branch_id);
    if (cert.theorem != rc.theorem)
        throw Error(ErrorCode::UnsupportedCase, "reference case " + rc.name + " certified as " +
                                                    to_string(cert.theorem) + " instead of " + to_string(rc.theorem));
    return cert;
}

inline ReferenceCase reference_case(const std::string& name) {
    for (const ReferenceCase& rc : reference_cases())
        if (rc.name == name) return rc;
    throw Error(ErrorCode::InvalidArgument, "unknown reference case '" + name + "'");
}

}  // namespace stagwave
