#include "cavmeas/sim/rate_model.hpp"

#include <algorithm>
#include <cmath>

#include "cavmeas/errors.hpp"

namespace cavmeas::sim {

namespace {

void require_rate(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(name, "must be a finite rate >= 0");
}

void require_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(name, "must be a probability in [0, 1]");
}

// State-preparation errors are shared by both methods.
constexpr double kEpsPrepF1 = 1.5e-3;
constexpr double kEpsPrepF2 = 2.7e-3;
constexpr double kEpsPrepEmpty = 3.5e-4;
constexpr double kRepump = 0.999;

}  // namespace

double RateModel::loss_probability(long prior_attributable) const {
    return std::min(1.0, p_loss_per_detected_photon + loss_heating * static_cast<double>(prior_attributable));
}

void RateModel::validate(Method m) const {
    require_rate(r_bright, "r_bright");
    require_rate(r_dark, "r_dark");
    require_rate(gamma_depump, "gamma_depump");
    require_probability(p_repump, "p_repump");
    require_probability(p_loss_per_detected_photon, "p_loss_per_detected_photon");
    require_rate(loss_heating, "loss_heating");
    require_probability(eps_prep_f1, "eps_prep_f1");
    require_probability(eps_prep_f2, "eps_prep_f2");
    require_probability(eps_prep_empty, "eps_prep_empty");
    if (!(rate_jitter >= 0.0 && rate_jitter < 1.0)) throw ConfigError("rate_jitter", "must lie in [0, 1)");
    // The F2 condition has to be distinguishable from the others; the
    // orientation itself comes from the method, not from the magnitudes.
    if (f2_rate(m) == other_rate(m)) {
        throw ConfigError("r_dark", "F2 and non-F2 photon rates must differ");
    }
}

RateModel RateModel::fluorescence_defaults() {
    RateModel m;
    m.r_bright = 0.76e6;
    m.r_dark = 67.0;
    m.gamma_depump = 1.0e3;
    m.p_repump = kRepump;
    m.p_loss_per_detected_photon = 0.0;
    m.loss_heating = 2.0e-5;
    m.eps_prep_f1 = kEpsPrepF1;
    m.eps_prep_f2 = kEpsPrepF2;
    m.eps_prep_empty = kEpsPrepEmpty;
    m.rate_jitter = 0.0;
    return m;
}

RateModel RateModel::transmission_defaults() {
    RateModel m;
    m.r_bright = 2.2e6;
    m.r_dark = 0.4 * 2.2e6;
    m.gamma_depump = 1.2e2;
    m.p_repump = kRepump;
    m.p_loss_per_detected_photon = 1.6e-4;
    m.loss_heating = 0.0;
    m.eps_prep_f1 = kEpsPrepF1;
    m.eps_prep_f2 = kEpsPrepF2;
    m.eps_prep_empty = kEpsPrepEmpty;
    m.rate_jitter = 0.045;
    return m;
}

RateModel RateModel::defaults(Method m) {
    return m == Method::Fluorescence ? fluorescence_defaults() : transmission_defaults();
}

void MethodConfig::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau", "must be positive");
    if (!(tau_rp >= 0.0) || !std::isfinite(tau_rp)) throw ConfigError("tau_rp", "must be non-negative");
    if (threshold < 0) throw ConfigError("threshold", "must be non-negative");
}

MethodConfig MethodConfig::defaults(Method m) {
    MethodConfig c;
    c.method = m;
    c.tau_rp = 5e-6;
    if (m == Method::Fluorescence) {
        c.tau = 25e-6;
        c.threshold = 1;
    } else {
        c.tau = 50e-6;
        c.threshold = 77;
    }
    return c;
}

}  // namespace cavmeas::sim
