#include "cavmeas/readout/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cavmeas/errors.hpp"
#include "cavmeas/readout/statistics.hpp"

namespace cavmeas::readout {

using sim::Method;
using sim::TweezerState;

double StateTriple::operator[](TweezerState s) const {
    switch (s) {
        case TweezerState::Empty: return empty;
        case TweezerState::F1: return f1;
        case TweezerState::F2: return f2;
        case TweezerState::Lost: break;
    }
    throw std::invalid_argument("no infidelity for Lost");
}

double StateTriple::max() const { return std::max({empty, f1, f2}); }
double StateTriple::mean() const { return (empty + f1 + f2) / 3.0; }

double miss_probability(double r_signal, double r_other, double gamma_depump, double tau, int threshold) {
    if (r_signal < 0.0 || r_other < 0.0 || gamma_depump < 0.0) throw std::invalid_argument("rates must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (threshold < 0) throw std::invalid_argument("threshold must be >= 0");
    const double no_switch = std::exp(-gamma_depump * tau) * poisson_cdf(threshold, r_signal * tau);
    if (gamma_depump == 0.0) return no_switch;

    // Switch time t = x tau.
    const double g = gamma_depump * tau;
    auto integrand = [&](double x) {
        return g * std::exp(-g * x) * poisson_cdf(threshold, r_signal * tau * x + r_other * tau * (1.0 - x));
    };
    double error = 0.0;
    const double switched =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 20, 1e-14, &error);
    if (!(error <= 1e-10)) throw ConvergenceError("miss_probability quadrature did not reach 1e-10");
    return no_switch + switched;
}

int threshold_search_limit(double tau, const sim::RateModel& model) {
    const double mu = std::max(model.r_bright, model.r_dark) * tau;
    return static_cast<int>(std::ceil(mu + 10.0 * std::sqrt(mu)));
}

namespace {

constexpr int kJitterNodes = 48;

struct JitterNode {
    double scale;
    double weight;
};

// Gauss-Legendre nodes over the bulk of Gamma(k, 1/k), k = 1/jitter^2,
// with the weights multiplied by the density and renormalised.
std::vector<JitterNode> jitter_nodes(double jitter) {
    if (jitter <= 0.0) return {{1.0, 1.0}};
    using Rule = boost::math::quadrature::gauss<double, kJitterNodes>;
    const double k = 1.0 / (jitter * jitter);
    const double lo = std::max(1e-6, 1.0 - 9.0 * jitter);
    const double hi = 1.0 + 12.0 * jitter;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto log_pdf = [k](double u) { return k * std::log(k) + (k - 1.0) * std::log(u) - k * u - std::lgamma(k); };

    std::vector<JitterNode> nodes;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double sign : {-1.0, 1.0}) {
            if (x[i] == 0.0 && sign > 0.0) continue;
            const double u = mid + sign * half * x[i];
            nodes.push_back({u, w[i] * half * std::exp(log_pdf(u))});
        }
    }
    double total = 0.0;
    for (const auto& n : nodes) total += n.weight;
    for (auto& n : nodes) n.weight /= total;
    return nodes;
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

double sum_range(const std::vector<double>& v, int from, int to) {
    double s = 0.0;
    for (int n = from; n <= to; ++n) s += v[n];
    return s;
}

}  // namespace

ReadoutErrorModel::ReadoutErrorModel(double tau, const sim::RateModel& model, Method method, int max_threshold)
    : tau_(tau), model_(model), method_(method), max_threshold_(max_threshold) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (max_threshold < 0) throw std::invalid_argument("max_threshold must be >= 0");
    model_.validate(method);
    const int cap = max_threshold_ + 1;
    const long max_prior = model_.loss_heating > 0.0 ? cap : 0;

    for (const auto& jn : jitter_nodes(model_.rate_jitter)) {
        Node node;
        node.weight = jn.weight;
        node.other = poisson_table(jn.scale * model_.other_rate(method) * tau, cap);
        F2IntervalRates rates;
        rates.f2_rate = jn.scale * model_.f2_rate(method);
        rates.other_rate = jn.scale * model_.other_rate(method);
        rates.gamma_depump = model_.gamma_depump;
        rates.p_loss = model_.p_loss_per_detected_photon;
        rates.loss_heating = model_.loss_heating;
        for (long prior = 0; prior <= max_prior; ++prior) {
            rates.prior_attributable = prior;
            node.f2_tables.emplace(prior, f2_interval_table(rates, tau, cap));
        }
        nodes_.push_back(std::move(node));
    }
}

const IntervalCountTable& ReadoutErrorModel::f2_table(const Node& node, long prior) const {
    if (model_.loss_heating <= 0.0) return node.f2_tables.begin()->second;
    return node.f2_tables.at(std::min<long>(prior, max_threshold_ + 1));
}

Matrix3 ReadoutErrorModel::node_matrix(const Node& node, int th) const {
    const int cap = max_threshold_ + 1;
    const bool fluor = method_ == Method::Fluorescence;
    const double pr = model_.p_repump;

    const double low_dark = sum_range(node.other, 0, th);
    const double high_dark = sum_range(node.other, th + 1, cap);
    const double sig_dark = fluor ? high_dark : low_dark;
    const double nonsig_dark = fluor ? low_dark : high_dark;

    // P(second interval shows the F2 level) from a post-first-interval
    // condition, before the repump is applied.
    auto f2_signal = [&](long prior) {
        const auto& t = f2_table(node, prior);
        double low = 0.0, high = 0.0;
        for (int e = 0; e < 3; ++e) {
            low += sum_range(t.by_end[e], 0, th);
            high += sum_range(t.by_end[e], th + 1, cap);
        }
        return fluor ? high : low;
    };
    const double sig_repumped = f2_signal(0);
    auto second_signal = [&](EndState e, long prior) {
        switch (e) {
            case EndState::F2: return f2_signal(prior);
            case EndState::F1: return pr * sig_repumped + (1.0 - pr) * sig_dark;
            case EndState::Gone: break;
        }
        return sig_dark;
    };

    // Rows by actual initial condition: 0 empty, 1 F1, 2 F2.
    Matrix3 actual{};
    const int first_sig_lo = fluor ? th + 1 : 0;
    const int first_sig_hi = fluor ? cap : th;
    const int first_non_lo = fluor ? 0 : th + 1;
    const int first_non_hi = fluor ? th : cap;

    const auto& t0 = f2_table(node, 0);
    for (int e = 0; e < 3; ++e) {
        actual[2][2] += sum_range(t0.by_end[e], first_sig_lo, first_sig_hi);
        for (int n = first_non_lo; n <= first_non_hi; ++n) {
            const double v = t0.by_end[e][n];
            if (v == 0.0) continue;
            const auto end = static_cast<EndState>(e);
            const double s2 = second_signal(end, end == EndState::F2 ? n : 0);
            actual[2][1] += v * s2;
            actual[2][0] += v * (1.0 - s2);
        }
    }
    for (int row : {0, 1}) {
        const double s2 = second_signal(row == 1 ? EndState::F1 : EndState::Gone, 0);
        actual[row][2] = sig_dark;
        actual[row][1] = nonsig_dark * s2;
        actual[row][0] = nonsig_dark * (1.0 - s2);
    }

    auto mix = [&](int a, int b, double eps) {
        std::array<double, 3> r{};
        for (int j = 0; j < 3; ++j) r[j] = (1.0 - eps) * actual[a][j] + eps * actual[b][j];
        return r;
    };
    return {mix(0, 2, model_.eps_prep_empty), mix(1, 2, model_.eps_prep_f1), mix(2, 1, model_.eps_prep_f2)};
}

Matrix3 ReadoutErrorModel::outcome_matrix(int threshold) const {
    if (threshold < 0 || threshold > max_threshold_) throw std::out_of_range("threshold outside model range");
    Matrix3 total{};
    for (const auto& node : nodes_) {
        const Matrix3 m = node_matrix(node, threshold);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) total[i][j] += node.weight * m[i][j];
        }
    }
    return total;
}

StateTriple ReadoutErrorModel::infidelity(int threshold) const {
    const Matrix3 m = outcome_matrix(threshold);
    // 1 - diagonal, summed from the off-diagonal entries to keep precision
    // for small infidelities.
    return {m[0][1] + m[0][2], m[1][0] + m[1][2], m[2][0] + m[2][1]};
}

StateTriple infidelity_model(double tau, int threshold, const sim::RateModel& model, Method method) {
    return ReadoutErrorModel(tau, model, method, threshold).infidelity(threshold);
}

}  // namespace cavmeas::readout
