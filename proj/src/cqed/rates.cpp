#include "cavmeas/cqed/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace cavmeas::cqed {

double cooperativity(const SystemParams& p) {
    return p.g0 * p.g0 / (2.0 * p.kappa * p.gamma);
}

double coupling_at(double z, double r, const SystemParams& p) {
    return p.g0 * std::cos(p.wavenumber() * z) * std::exp(-r * r / (p.w0_cavity * p.w0_cavity));
}

double axial_factor(const SystemParams& p, const AxialDistribution& dist) {
    struct Visitor {
        const SystemParams& p;
        double operator()(UniformAxial) const { return 0.5; }
        double operator()(const GaussianAxial& g) const {
            if (g.sigma < 0.0) throw std::invalid_argument("axial sigma must be non-negative");
            const double k = p.wavenumber();
            // <cos^2(k z)> for z ~ N(0, sigma^2); antinode at z = 0.
            return 0.5 * (1.0 + std::exp(-2.0 * k * k * g.sigma * g.sigma));
        }
    };
    return std::visit(Visitor{p}, dist);
}

double axial_avg_coupling_sq(const SystemParams& p, const AxialDistribution& dist) {
    return p.g0 * p.g0 * axial_factor(p, dist);
}

double max_detection_rate(const SystemParams& p) {
    return p.eta * p.g0 * p.g0 / (4.0 * p.kappa);
}

double expected_max_rate(const SystemParams& p, const AxialDistribution& dist) {
    return max_detection_rate(p) * axial_factor(p, dist) * p.internal_factor;
}

}  // namespace cavmeas::cqed
