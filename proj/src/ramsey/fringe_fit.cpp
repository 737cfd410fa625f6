#include "cavmeas/ramsey/fringe_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace cavmeas::ramsey {

namespace {

int distinct_phases(const std::vector<double>& phases) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> wrapped;
    for (double p : phases) {
        double r = std::fmod(p, two_pi);
        if (r < 0.0) r += two_pi;
        wrapped.push_back(r);
    }
    std::sort(wrapped.begin(), wrapped.end());
    int n = 0;
    for (std::size_t i = 0; i < wrapped.size(); ++i) {
        if (i == 0 || wrapped[i] - wrapped[i - 1] > 1e-9) ++n;
    }
    if (n > 1 && two_pi - wrapped.back() + wrapped.front() <= 1e-9) --n;
    return n;
}

}  // namespace

FringeFit fit_fringe(const std::vector<double>& phases, const std::vector<double>& probabilities) {
    if (phases.size() != probabilities.size()) throw std::invalid_argument("phase and probability counts differ");
    if (distinct_phases(phases) < 4) throw std::invalid_argument("fringe fit needs at least 4 distinct phases");

    const Eigen::Index n = static_cast<Eigen::Index>(phases.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = std::cos(phases[i]);
        a(i, 2) = std::sin(phases[i]);
        b(i) = probabilities[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw std::invalid_argument("phase set gives a rank-deficient fringe fit");
    const Eigen::Vector3d x = qr.solve(b);

    // (c/2) cos(phi - phi0) = (c/2) cos phi0 cos phi + (c/2) sin phi0 sin phi
    FringeFit fit;
    fit.baseline = x(0);
    fit.raw_contrast = 2.0 * std::hypot(x(1), x(2));
    fit.contrast = std::clamp(fit.raw_contrast, 0.0, 1.0);
    fit.phase_offset = fit.raw_contrast > 0.0 ? std::atan2(x(2), x(1)) : 0.0;
    return fit;
}

}  // namespace cavmeas::ramsey
