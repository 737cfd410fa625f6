#include "cavmeas/sim/tweezer_state.hpp"

#include <stdexcept>

namespace cavmeas::sim {

int state_index(TweezerState s) {
    switch (s) {
        case TweezerState::Empty: return 0;
        case TweezerState::F1: return 1;
        case TweezerState::F2: return 2;
        case TweezerState::Lost: break;
    }
    throw std::invalid_argument("Lost has no confusion-matrix index");
}

std::string to_string(TweezerState s) {
    switch (s) {
        case TweezerState::Empty: return "empty";
        case TweezerState::F1: return "F1";
        case TweezerState::F2: return "F2";
        case TweezerState::Lost: return "lost";
    }
    return "?";
}

TweezerState parse_state(std::string_view name) {
    if (name == "empty" || name == "Empty") return TweezerState::Empty;
    if (name == "F1" || name == "f1") return TweezerState::F1;
    if (name == "F2" || name == "f2") return TweezerState::F2;
    if (name == "lost" || name == "Lost") return TweezerState::Lost;
    throw std::invalid_argument("unknown tweezer state '" + std::string(name) + "'");
}

std::string to_string(Method m) {
    return m == Method::Fluorescence ? "fluorescence" : "transmission";
}

Method parse_method(std::string_view name) {
    if (name == "fluorescence") return Method::Fluorescence;
    if (name == "transmission") return Method::Transmission;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

}  // namespace cavmeas::sim
