#pragma once

namespace cavmeas::cqed {

// Low-drive transmission of a resonant cavity containing an atom with
// cooperativity C, relative to the empty cavity: (1 + 2C)^-2.
double transmission_ratio_fixed(double cooperativity);

// (1 + 2C cos^2 kz)^-2 averaged over a uniform axial position.
// Closed form (2 + a) / (2 (1 + a)^1.5), a = 2C.
double transmission_ratio_axial_avg(double cooperativity);

// Same average evaluated by periodic trapezoidal quadrature over one
// standing-wave period; independent of the closed form.
double transmission_ratio_axial_avg_quadrature(double cooperativity);

enum class SpreadShape { Gaussian, Uniform };

// Ratio averaged over uniform axial position and over a distribution of
// atomic detuning with the given rms width (rad/s). `gamma` is the
// atomic half-linewidth the detuning is compared against.
double transmission_ratio_broadened(double cooperativity, double detuning_spread,
                                    SpreadShape shape, double gamma);

// Resonant absorptive bistability state equation Y = X (1 + 2C/(1+X))^2
// relating normalised input intensity Y to intracavity intensity X.
struct BistabilityPoint {
    double intracavity = 0.0;   // X
    double transmission = 1.0;  // X / Y, empty cavity = 1
};

// Root of the state equation; for C > 4 inside the bistable window the
// lower (increasing-drive) branch is returned. Throws ConvergenceError if
// the root is not located to 1e-10 relative.
BistabilityPoint bistability_transmission(double drive, double cooperativity);

}  // namespace cavmeas::cqed
