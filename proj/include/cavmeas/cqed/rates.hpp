#pragma once

#include <variant>

#include "cavmeas/cqed/system_params.hpp"

namespace cavmeas::cqed {

// Atom position spread along the cavity axis.
struct UniformAxial {};           // uniform over a standing-wave period
struct GaussianAxial {
    double sigma = 0.0;           // rms spread (m), centred on an antinode
};
using AxialDistribution = std::variant<UniformAxial, GaussianAxial>;

// C = g0^2 / (2 kappa gamma)
double cooperativity(const SystemParams& p);

// g(z, r) = g0 cos(k z) exp(-r^2 / w0^2)
double coupling_at(double z, double r, const SystemParams& p);

// <g(z)^2> at the mode centre over an axial distribution.
// Throws std::invalid_argument for a negative Gaussian sigma.
double axial_avg_coupling_sq(const SystemParams& p, const AxialDistribution& dist);

// Ratio <g^2> / g0^2.
double axial_factor(const SystemParams& p, const AxialDistribution& dist);

// R0 = eta g0^2 / (4 kappa), photons/s: ideal cavity emission of a
// saturated two-level atom at an antinode.
double max_detection_rate(const SystemParams& p);

// R0 reduced by motional averaging and by the internal-state factor.
double expected_max_rate(const SystemParams& p, const AxialDistribution& dist = UniformAxial{});

}  // namespace cavmeas::cqed
