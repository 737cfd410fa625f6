#pragma once

#include <array>
#include <string>
#include <string_view>

namespace cavmeas::sim {

// Ground-truth tweezer content. Lost is absorbing within an attempt and
// only ever appears as a final state.
enum class TweezerState { Empty, F1, F2, Lost };

inline constexpr std::array<TweezerState, 3> kPreparedStates = {
    TweezerState::Empty, TweezerState::F1, TweezerState::F2};

// Index 0..2 for Empty, F1, F2; used for confusion-matrix rows.
int state_index(TweezerState s);

std::string to_string(TweezerState s);
TweezerState parse_state(std::string_view name);

enum class Method { Fluorescence, Transmission };

std::string to_string(Method m);
Method parse_method(std::string_view name);

}  // namespace cavmeas::sim
