#include "cavmeas/ramsey/qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace cavmeas::ramsey {

bool QubitState::physical(double tol) const {
    return w * w + 4.0 * std::norm(coherence) <= 1.0 + tol;
}

QubitState rotate(const QubitState& s, double axis_phase, double angle) {
    const double x = 2.0 * s.coherence.real();
    const double y = 2.0 * s.coherence.imag();
    const double z = s.w;
    const double nx = std::cos(axis_phase), ny = std::sin(axis_phase);
    const double c = std::cos(angle), sn = std::sin(angle);

    // Rodrigues with n = (nx, ny, 0).
    const double dot = nx * x + ny * y;
    const double cx = ny * z, cy = -nx * z, cz = nx * y - ny * x;
    const double rx = x * c + cx * sn + nx * dot * (1.0 - c);
    const double ry = y * c + cy * sn + ny * dot * (1.0 - c);
    const double rz = z * c + cz * sn;
    return {rz, {0.5 * rx, 0.5 * ry}};
}

QubitState dephase(const QubitState& s, double factor, double phase) {
    if (factor < 0.0 || factor > 1.0) throw std::invalid_argument("dephasing factor must lie in [0, 1]");
    return {s.w, s.coherence * std::polar(factor, phase)};
}

double backaction_factor(double n0, double distance, double waist) {
    if (!(waist > 0.0)) throw std::invalid_argument("backaction waist must be positive");
    if (n0 < 0.0) throw std::invalid_argument("scattered photon number must be >= 0");
    const double r = distance / waist;
    return std::exp(-n0 * std::exp(-2.0 * r * r));
}

}  // namespace cavmeas::ramsey
