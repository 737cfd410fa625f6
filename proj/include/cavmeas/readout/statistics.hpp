#pragma once

namespace cavmeas::readout {

// Point estimate with a confidence interval.
struct Estimate {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for k successes in n trials. z = 1 gives the
// 68.3% (one standard deviation) interval.
Estimate wilson_interval(long successes, long trials, double z = 1.0);

// P(N <= k) for N ~ Poisson(mean).
double poisson_cdf(int k, double mean);

// sqrt(2) |mu1 - mu2| / sqrt(var1 + var2). Throws if both variances vanish.
double ashman_d(double mu1, double var1, double mu2, double var2);

}  // namespace cavmeas::readout
