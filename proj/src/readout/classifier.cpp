#include "cavmeas/readout/classifier.hpp"

#include <stdexcept>

namespace cavmeas::readout {

using sim::Method;
using sim::TweezerState;

Level classify_interval(int counts, int threshold) {
    if (counts < 0 || threshold < 0) throw std::invalid_argument("counts and threshold must be >= 0");
    return counts > threshold ? Level::High : Level::Low;
}

TweezerState classify_two_interval(int counts1, int counts2, int threshold, Method method) {
    // The level that signals an F2 atom in the cavity.
    const Level f2_level = method == Method::Fluorescence ? Level::High : Level::Low;
    if (classify_interval(counts1, threshold) == f2_level) return TweezerState::F2;
    if (classify_interval(counts2, threshold) == f2_level) return TweezerState::F1;
    return TweezerState::Empty;
}

}  // namespace cavmeas::readout
