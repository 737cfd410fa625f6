#include "cavmeas/readout/statistics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace cavmeas::readout {

Estimate wilson_interval(long successes, long trials, double z) {
    if (trials <= 0) throw std::invalid_argument("Wilson interval needs at least one trial");
    if (successes < 0 || successes > trials) throw std::invalid_argument("successes out of range");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    // Clamp against rounding so the interval always brackets p.
    return {p, std::max(0.0, std::min(p, center - half)), std::min(1.0, std::max(p, center + half))};
}

double poisson_cdf(int k, double mean) {
    if (k < 0) return 0.0;
    if (mean <= 0.0) return 1.0;
    return boost::math::gamma_q(static_cast<double>(k) + 1.0, mean);
}

double ashman_d(double mu1, double var1, double mu2, double var2) {
    if (var1 < 0.0 || var2 < 0.0) throw std::invalid_argument("variances must be >= 0");
    if (var1 + var2 <= 0.0) throw std::invalid_argument("Ashman's D needs a non-zero variance");
    return std::sqrt(2.0) * std::abs(mu1 - mu2) / std::sqrt(var1 + var2);
}

}  // namespace cavmeas::readout
