#pragma once

#include <complex>

namespace cavmeas::ramsey {

// Bloch-vector state of the clock qubit. w = P(F2) - P(F1), so the F2
// pole is w = +1; the Bloch vector is (2 Re c, 2 Im c, w).
struct QubitState {
    double w = 1.0;
    std::complex<double> coherence{0.0, 0.0};

    double p_f1() const { return 0.5 * (1.0 - w); }
    double p_f2() const { return 0.5 * (1.0 + w); }

    // w^2 + |2c|^2 <= 1 + tol
    bool physical(double tol = 1e-12) const;

    static QubitState f2_pole() { return {1.0, {0.0, 0.0}}; }
    static QubitState f1_pole() { return {-1.0, {0.0, 0.0}}; }
};

// Rotation by `angle` about the equatorial axis at azimuth `axis_phase`.
QubitState rotate(const QubitState& s, double axis_phase, double angle);

// Multiplies the coherence by a real factor in [0, 1] and a phase.
QubitState dephase(const QubitState& s, double factor, double phase = 0.0);

// exp(-n0 exp(-2 d^2 / waist^2)).
double backaction_factor(double n0, double distance, double waist);

}  // namespace cavmeas::ramsey
