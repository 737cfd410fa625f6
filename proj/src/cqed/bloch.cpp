#include "cavmeas/cqed/bloch.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "cavmeas/cqed/rates.hpp"

namespace cavmeas::cqed {

using cd = std::complex<double>;

namespace {

constexpr cd I{0.0, 1.0};

// Equations of motion for x = (<s>, <s+>, <sz>) in the probe frame with
// H = -detuning s+s + (rabi/2)(s + s+) and decay 2 gamma:  dx/dt = M x + b.
Eigen::Matrix3cd bloch_generator(double rabi, double detuning, double gamma) {
    Eigen::Matrix3cd m;
    m << -gamma + I * detuning, 0.0, I * rabi / 2.0,
        0.0, -gamma - I * detuning, -I * rabi / 2.0,
        I * rabi, -I * rabi, -2.0 * gamma;
    return m;
}

// Eigenvector basis condition number above which the pole expansion is
// abandoned.
constexpr double kDefectiveCondition = 1e7;

}  // namespace

BlochSteadyState bloch_steady_state(double rabi, double detuning, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const double denom = detuning * detuning + gamma * gamma + 0.5 * rabi * rabi;
    BlochSteadyState s;
    s.excited_population = 0.25 * rabi * rabi / denom;
    const double w = 2.0 * s.excited_population - 1.0;
    s.coherence = I * (rabi / 2.0) * w / (gamma - I * detuning);
    return s;
}

EmissionSpectrum::EmissionSpectrum(double rabi, double detuning, double gamma)
    : gamma_(gamma), steady_(bloch_steady_state(rabi, detuning, gamma)) {
    generator_ = bloch_generator(rabi, detuning, gamma);

    const cd s = steady_.coherence;
    const cd sc = std::conj(s);
    const double w = 2.0 * steady_.excited_population - 1.0;
    // <s+ x> - <s+><x>, using s+ s+ = 0 and s+ sz = -s+.
    initial_ << steady_.excited_population - std::norm(s), -sc * sc, -sc - sc * w;

    elastic_weight_ = 2.0 * gamma * std::norm(s);
    inelastic_weight_ = 2.0 * gamma * initial_(0).real();

    if (rabi == 0.0) return;  // nothing scattered, no inelastic part

    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(generator_);
    const Eigen::Matrix3cd& v = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(v);
    const auto sv = svd.singularValues();
    const double cond = sv(0) / sv(2);
    if (es.info() != Eigen::Success || !std::isfinite(cond) || cond > kDefectiveCondition) {
        degenerate_ = true;
        return;
    }
    const Eigen::Vector3cd coeff = v.partialPivLu().solve(initial_);
    for (int k = 0; k < 3; ++k) {
        components_.push_back({es.eigenvalues()(k), v(0, k) * coeff(k)});
    }
}

cd EmissionSpectrum::resolvent(cd s) const {
    const Eigen::Matrix3cd a = generator_ + s * Eigen::Matrix3cd::Identity();
    return -a.partialPivLu().solve(initial_)(0);
}

cd EmissionSpectrum::correlation(double t) const {
    if (!degenerate_) {
        cd sum = 0.0;
        for (const auto& c : components_) sum += c.residue * std::exp(c.pole * t);
        return sum;
    }
    const Eigen::Matrix3cd prop = (generator_ * t).exp();
    return (prop * initial_)(0);
}

double EmissionSpectrum::inelastic_density(double nu) const {
    if (inelastic_weight_ == 0.0) return 0.0;
    cd sum = 0.0;
    if (!degenerate_) {
        for (const auto& c : components_) sum += -c.residue / (c.pole + I * nu);
    } else {
        sum = resolvent(I * nu);
    }
    return gamma_ / std::numbers::pi * 2.0 * sum.real();
}

double EmissionSpectrum::filtered_inelastic(double center, double halfwidth) const {
    if (inelastic_weight_ == 0.0) return 0.0;
    // Closing the contour in the upper half plane picks up only the
    // Lorentzian pole at center + i*halfwidth.
    const cd s = I * center - halfwidth;
    cd sum = 0.0;
    if (!degenerate_) {
        for (const auto& c : components_) sum += -c.residue / (c.pole + s);
    } else {
        sum = resolvent(s);
    }
    return 2.0 * gamma_ * halfwidth * sum.real();
}

double EmissionSpectrum::filtered_elastic(double center, double halfwidth) const {
    const double h2 = halfwidth * halfwidth;
    return elastic_weight_ * h2 / (center * center + h2);
}

CavityFilteredRate::CavityFilteredRate(const SystemParams& params) : params_(params) {
    params_.validate();
    // Coarse log scan for the bracket, then Brent in log(rabi).
    const double g = params_.gamma;
    constexpr int kScan = 241;
    const double lo = std::log(1e-2 * g), hi = std::log(1e3 * g);
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < kScan; ++i) {
        const double x = lo + (hi - lo) * i / (kScan - 1);
        const double v = response(std::exp(x));
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double step = (hi - lo) / (kScan - 1);
    const double a = lo + step * std::max(0, best - 1);
    const double b = lo + step * std::min(kScan - 1, best + 1);
    auto neg = [this](double x) { return -response(std::exp(x)); };
    const auto [x_opt, f_opt] = boost::math::tools::brent_find_minima(neg, a, b, 52);
    optimal_rabi_ = std::exp(x_opt);
    max_response_ = -f_opt;
    calibration_ = max_response_ > 0.0 ? expected_max_rate(params_) / max_response_ : 0.0;
}

double CavityFilteredRate::response(double rabi) const {
    if (rabi == 0.0) return 0.0;
    const EmissionSpectrum spec(rabi, params_.delta_pa(), params_.gamma);
    const double center = -params_.delta_pc;
    return spec.filtered_elastic(center, params_.kappa) +
           spec.filtered_inelastic(center, params_.kappa);
}

double cavity_filtered_rate(double rabi, const SystemParams& params) {
    return CavityFilteredRate(params)(rabi);
}

}  // namespace cavmeas::cqed
