#include "cavmeas/readout/count_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavmeas::readout {

double IntervalCountTable::low(EndState e, int threshold) const {
    if (threshold >= cap) throw std::out_of_range("threshold beyond table cap");
    const auto& row = by_end[static_cast<int>(e)];
    double sum = 0.0;
    for (int n = 0; n <= threshold; ++n) sum += row[n];
    return sum;
}

double IntervalCountTable::low(int threshold) const {
    return low(EndState::F2, threshold) + low(EndState::F1, threshold) + low(EndState::Gone, threshold);
}

double IntervalCountTable::total(EndState e) const {
    const auto& row = by_end[static_cast<int>(e)];
    double sum = 0.0;
    for (double v : row) sum += v;
    return sum;
}

IntervalCountTable f2_interval_table(const F2IntervalRates& r, double duration, int cap) {
    if (cap < 1) throw std::invalid_argument("table cap must be >= 1");
    if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
    const int width = cap + 1;
    IntervalCountTable out;
    out.cap = cap;
    for (auto& v : out.by_end) v.assign(width, 0.0);

    const double exit_f2 = r.f2_rate + r.gamma_depump;
    const double lambda = std::max(exit_f2, r.other_rate);
    const double x = lambda * duration;
    if (x == 0.0) {
        out.by_end[0][0] = 1.0;
        return out;
    }

    std::vector<double> q(width);
    for (int n = 0; n < width; ++n) {
        q[n] = std::min(1.0, r.p_loss + r.loss_heating * static_cast<double>(r.prior_attributable + n));
    }
    const double stay_f2 = 1.0 - exit_f2 / lambda;
    const double emit_f2 = r.f2_rate / lambda;
    const double depump = r.gamma_depump / lambda;
    const double emit_other = r.other_rate / lambda;
    const double stay_other = 1.0 - emit_other;

    // p[s * width + n]
    std::vector<double> p(3 * width, 0.0), next(3 * width);
    p[0] = 1.0;
    auto f2 = [width](std::vector<double>& v, int n) -> double& { return v[n]; };
    auto f1 = [width](std::vector<double>& v, int n) -> double& { return v[width + n]; };
    auto gone = [width](std::vector<double>& v, int n) -> double& { return v[2 * width + n]; };

    const int k_max = static_cast<int>(x + 15.0 * std::sqrt(x) + 40.0);
    const double log_x = std::log(x);
    double accumulated = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        const double w = std::exp(k * log_x - x - std::lgamma(k + 1.0));
        for (int s = 0; s < 3; ++s) {
            for (int n = 0; n < width; ++n) out.by_end[s][n] += w * p[s * width + n];
        }
        accumulated += w;
        if (k > x && 1.0 - accumulated < 1e-16) break;

        std::fill(next.begin(), next.end(), 0.0);
        for (int n = 0; n < width; ++n) {
            const int up = std::min(n + 1, cap);
            const double v = f2(p, n);
            if (v != 0.0) {
                f2(next, n) += v * stay_f2;
                f2(next, up) += v * emit_f2 * (1.0 - q[n]);
                gone(next, up) += v * emit_f2 * q[n];
                f1(next, n) += v * depump;
            }
            const double a = f1(p, n);
            f1(next, n) += a * stay_other;
            f1(next, up) += a * emit_other;
            const double b = gone(p, n);
            gone(next, n) += b * stay_other;
            gone(next, up) += b * emit_other;
        }
        p.swap(next);
    }
    return out;
}

std::vector<double> poisson_table(double mean, int cap) {
    if (cap < 1) throw std::invalid_argument("table cap must be >= 1");
    std::vector<double> t(cap + 1, 0.0);
    if (mean <= 0.0) {
        t[0] = 1.0;
        return t;
    }
    double sum = 0.0;
    const double log_mean = std::log(mean);
    for (int n = 0; n < cap; ++n) {
        t[n] = std::exp(n * log_mean - mean - std::lgamma(n + 1.0));
        sum += t[n];
    }
    t[cap] = std::max(0.0, 1.0 - sum);
    return t;
}

}  // namespace cavmeas::readout
