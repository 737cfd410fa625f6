#include "cavmeas/cqed/system_params.hpp"

#include <cmath>
#include <numbers>

#include "cavmeas/cqed/units.hpp"
#include "cavmeas/errors.hpp"

namespace cavmeas::cqed {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(name, "must be strictly positive and finite");
    }
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ConfigError(name, "must be finite");
}

}  // namespace

double SystemParams::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

void SystemParams::validate() const {
    // g0 may be zero (uncoupled atom); negative is meaningless.
    if (!(g0 >= 0.0) || !std::isfinite(g0)) throw ConfigError("g0", "must be non-negative");
    require_positive(kappa, "kappa");
    require_positive(gamma, "gamma");
    require_positive(wavelength, "lambda");
    require_positive(w0_cavity, "w0_cavity");
    require_positive(w_probe, "w_probe");
    require_positive(axial_sigma, "axial_sigma");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta", "must lie in [0, 1]");
    if (!(internal_factor > 0.0 && internal_factor <= 1.0)) {
        throw ConfigError("internal_factor", "must lie in (0, 1]");
    }
    require_finite(delta_ca, "delta_ca");
    require_finite(delta_pc, "delta_pc");
}

SystemParams SystemParams::defaults() {
    using namespace units;
    SystemParams p;
    p.g0 = mhz(2.7);
    p.kappa = mhz(0.53);
    p.gamma = mhz(3.0);
    p.eta = 0.25;
    p.wavelength = nm(780.0);
    p.w0_cavity = um(20.0);
    p.w_probe = um(10.0);
    p.delta_ca = mhz(-10.0);
    p.delta_pc = -0.5 * p.kappa;
    p.axial_sigma = nm(200.0);
    p.internal_factor = 0.28;
    return p;
}

}  // namespace cavmeas::cqed
