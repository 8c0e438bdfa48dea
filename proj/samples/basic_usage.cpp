// Certify a bifurcation point, build the first-order wave and draw its streamlines.
#include <fstream>
#include <iostream>

#include "stagwave/bifurcation.hpp"
#include "stagwave/fields.hpp"
#include "stagwave/flowviz.hpp"

int main() {
    using namespace stagwave;
    try {
        // gamma1 > gamma2 > 0: the critical layer sits in the bottom layer
        const FluidConfig cfg = validate_config({6.0, 4.0, 1.0, 1.0, 9.81, 1.0});

        const BranchCertificate cert = certify_auto_wavelength(cfg, 1);
        std::cout << to_string(cert.theorem) << ": Lambda* = " << cert.Lambda_star << ", L = " << cert.cfg.L()
                  << " (L0 = " << cert.L0 << "), kernel (" << cert.kernel.a << ", " << cert.kernel.b << ")\n";

        const FlowField field(build_wave_auto(cert));
        const FlowTopology topo = analyze_flow(field);
        std::cout << "s = " << field.wave().s << ", " << topo.stagnation_points.size() << " stagnation points\n";
        for (const StagnationPoint& p : topo.stagnation_points)
            std::cout << "  " << to_string(p.kind) << " at (" << p.x << ", " << p.y << ") in the "
                      << to_string(p.layer) << " layer\n";

        std::ofstream("basic_usage.svg") << render_svg(field, topo);
        std::cout << "wrote basic_usage.svg\n";
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
