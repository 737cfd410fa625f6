#pragma once

#include "cavmeas/sim/tweezer_state.hpp"

namespace cavmeas::sim {

// Stochastic parameters of one readout method. Rates are in 1/s.
//
// r_bright / r_dark are the high and low detected-photon rates. Which
// tweezer state produces which is fixed by the method: under fluorescence
// an F2 atom is bright and everything else dark; under transmission an F2
// atom suppresses the cavity transmission to r_dark while an empty
// tweezer or an F1 atom transmits r_bright.
struct RateModel {
    double r_bright = 0.0;
    double r_dark = 0.0;
    double gamma_depump = 0.0;  // F2 -> F1 hazard while probed
    double p_repump = 1.0;      // F1 -> F2 per repump pulse

    // Loss probability of the k-th photon detected while the atom is in
    // F2 (k = 0, 1, ... counted over the whole attempt) is
    // min(1, p_loss_per_detected_photon + loss_heating * k).
    double p_loss_per_detected_photon = 0.0;
    double loss_heating = 0.0;

    double eps_prep_f1 = 0.0;     // intended F1 ends up F2
    double eps_prep_f2 = 0.0;     // intended F2 ends up F1
    double eps_prep_empty = 0.0;  // tweezer labelled empty holds an F2 atom

    // Relative rms of a per-attempt Gamma-distributed factor multiplying
    // all photon rates (probe power fluctuation). Zero disables it.
    double rate_jitter = 0.0;

    double f2_rate(Method m) const { return m == Method::Fluorescence ? r_bright : r_dark; }
    double other_rate(Method m) const { return m == Method::Fluorescence ? r_dark : r_bright; }
    double photon_rate(Method m, TweezerState s) const {
        return s == TweezerState::F2 ? f2_rate(m) : other_rate(m);
    }
    double loss_probability(long prior_attributable) const;

    // Throws ConfigError naming the first offending field.
    void validate(Method m) const;

    static RateModel fluorescence_defaults();
    static RateModel transmission_defaults();
    static RateModel defaults(Method m);
};

struct MethodConfig {
    Method method = Method::Fluorescence;
    double tau = 25e-6;    // each probe interval (s)
    double tau_rp = 5e-6;  // repump pulse (s)
    int threshold = 1;     // counts > threshold is High

    // Fluorescence counts the repump inside interval 2; transmission adds
    // a separate, uncounted pulse.
    double total_time() const { return method == Method::Fluorescence ? 2.0 * tau : 2.0 * tau + tau_rp; }

    void validate() const;

    static MethodConfig defaults(Method m);
};

}  // namespace cavmeas::sim
