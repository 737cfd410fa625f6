#include "cavmeas/cqed/transmission.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <boost/math/tools/roots.hpp>

#include "cavmeas/errors.hpp"

namespace cavmeas::cqed {

namespace {

void require_nonneg(double c, const char* what) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

// Axial average of |1 + b cos^2|^-2 for a complex single-atom response b.
// Integrand is smooth and pi-periodic so the trapezoidal rule converges
// geometrically.
double axial_average(std::complex<double> b) {
    auto f = [b](double x) {
        const double c = std::cos(x);
        return 1.0 / std::norm(1.0 + b * c * c);
    };
    return boost::math::quadrature::trapezoidal(f, 0.0, std::numbers::pi, 1e-13) / std::numbers::pi;
}

}  // namespace

double transmission_ratio_fixed(double cooperativity) {
    require_nonneg(cooperativity, "cooperativity");
    const double d = 1.0 + 2.0 * cooperativity;
    return 1.0 / (d * d);
}

double transmission_ratio_axial_avg(double cooperativity) {
    require_nonneg(cooperativity, "cooperativity");
    const double a = 2.0 * cooperativity;
    return (2.0 + a) / (2.0 * std::pow(1.0 + a, 1.5));
}

double transmission_ratio_axial_avg_quadrature(double cooperativity) {
    require_nonneg(cooperativity, "cooperativity");
    return axial_average(2.0 * cooperativity);
}

double transmission_ratio_broadened(double cooperativity, double detuning_spread,
                                    SpreadShape shape, double gamma) {
    require_nonneg(cooperativity, "cooperativity");
    require_nonneg(detuning_spread, "detuning_spread");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const double a = 2.0 * cooperativity;
    if (detuning_spread == 0.0) return axial_average(a);

    auto at_detuning = [&](double delta) {
        return axial_average(a / std::complex<double>(1.0, delta / gamma));
    };
    using boost::math::quadrature::gauss_kronrod;
    const double s = detuning_spread;
    if (shape == SpreadShape::Gaussian) {
        // Even integrand; integrate the half line out to 9 sigma.
        const double norm = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
        auto f = [&](double d) { return 2.0 * norm * std::exp(-0.5 * d * d / (s * s)) * at_detuning(d); };
        return gauss_kronrod<double, 31>::integrate(f, 0.0, 9.0 * s, 12, 1e-11);
    }
    // Uniform with the same rms: half-width sqrt(3) s.
    const double h = std::sqrt(3.0) * s;
    auto f = [&](double d) { return at_detuning(d) / h; };
    return gauss_kronrod<double, 31>::integrate(f, 0.0, h, 12, 1e-11);
}

BistabilityPoint bistability_transmission(double drive, double cooperativity) {
    require_nonneg(drive, "drive");
    require_nonneg(cooperativity, "cooperativity");
    if (drive == 0.0) return {0.0, transmission_ratio_fixed(cooperativity)};

    const double a = 2.0 * cooperativity;
    auto state = [a](double x) {
        const double f = 1.0 + a / (1.0 + x);
        return x * f * f;
    };
    auto residual = [&](double x) { return state(x) - drive; };

    // state(x) >= x, so the root lies in [0, drive]. For C > 4 the state
    // equation folds back; its local maximum bounds the lower branch.
    double upper = drive;
    const double disc = (a - 2.0) * (a - 2.0) - 4.0 * (1.0 + a);
    if (disc > 0.0) {
        const double x_fold = 0.5 * ((a - 2.0) - std::sqrt(disc));
        if (x_fold > 0.0 && state(x_fold) >= drive) upper = std::min(upper, x_fold);
    }
    if (residual(upper) == 0.0) return {upper, upper / drive};

    std::uintmax_t max_iter = 200;
    const auto tol = [](double l, double r) { return std::abs(r - l) <= 1e-12 * std::max(std::abs(l), std::abs(r)); };
    const auto [lo, hi] = boost::math::tools::toms748_solve(residual, 0.0, upper, -drive, residual(upper), tol, max_iter);
    const double x = 0.5 * (lo + hi);
    if (max_iter >= 200 || std::abs(hi - lo) > 1e-10 * std::max(x, 1e-300)) {
        throw ConvergenceError("bistability root did not converge");
    }
    return {x, x / drive};
}

}  // namespace cavmeas::cqed
