#pragma once

#include <vector>

namespace cavmeas::ramsey {

// p(phi) = baseline + (contrast / 2) cos(phi - phase_offset)
struct FringeFit {
    double contrast = 0.0;  // clamped to [0, 1]
    double raw_contrast = 0.0;
    double phase_offset = 0.0;
    double baseline = 0.0;
};

// Linear least squares in (A, c cos phi0, c sin phi0). Throws
// std::invalid_argument for fewer than four distinct phases (mod 2 pi) or
// a rank-deficient design.
FringeFit fit_fringe(const std::vector<double>& phases, const std::vector<double>& probabilities);

}  // namespace cavmeas::ramsey
