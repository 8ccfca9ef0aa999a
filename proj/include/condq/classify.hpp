// Two-qubit gate classification: does the gate decompose as a control on one
// qubit with per-control-value local actions on the other (Class 1), or does
// it act conditionally on both qubits (Class 2)?
//
// Classification is relative to the computational basis; no search over
// local basis changes is attempted.

#pragma once

#include <optional>
#include <utility>

#include "condq/gates.hpp"
#include "condq/statevec.hpp"

namespace condq {

enum class Verdict { Class1, Class2 };

enum class ControlSide { First, Second, BothDiagonal };

inline const char* to_string(Verdict v) { return v == Verdict::Class1 ? "Class1" : "Class2"; }

inline const char* to_string(ControlSide s) {
  switch (s) {
    case ControlSide::First: return "first";
    case ControlSide::Second: return "second";
    case ControlSide::BothDiagonal: return "both(diagonal)";
  }
  return "?";
}

struct GateClass {
  Verdict verdict = Verdict::Class2;
  std::optional<ControlSide> control_side;
  /// Per-control-value local actions (control value 0 first). For
  /// BothDiagonal these are the first-side blocks.
  std::optional<std::pair<Unitary, Unitary>> blocks;
};

/// If g = |0><0| x U0 + |1><1| x U1 (side First) or g = U0 x |0><0| +
/// U1 x |1><1| (side Second) with unitary blocks, return (U0, U1).
inline std::optional<std::pair<Unitary, Unitary>> one_sided_decomposition(const Unitary& g, ControlSide side) {
  if (g.arity() != 2) throw std::invalid_argument("one_sided_decomposition: need a two-qubit gate");
  if (side == ControlSide::BothDiagonal) {
    throw std::invalid_argument("one_sided_decomposition: side must be First or Second");
  }
  // Entry (r, c) couples control values ctrl(r) -> ctrl(c); anything across
  // distinct control values must vanish.
  const auto ctrl_bit = [&](std::size_t idx) {
    return side == ControlSide::First ? (idx >> 1) & 1 : idx & 1;
  };
  const auto local_bit = [&](std::size_t idx) {
    return side == ControlSide::First ? idx & 1 : (idx >> 1) & 1;
  };
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (ctrl_bit(r) != ctrl_bit(c) && std::abs(g.at(r, c)) > kNormTol) return std::nullopt;
    }
  }
  std::vector<Amplitude> u0(4), u1(4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (ctrl_bit(r) != ctrl_bit(c)) continue;
      auto& block = ctrl_bit(r) == 0 ? u0 : u1;
      block[local_bit(r) * 2 + local_bit(c)] = g.at(r, c);
    }
  }
  try {
    return std::make_pair(Unitary(1, std::move(u0)), Unitary(1, std::move(u1)));
  } catch (const NonUnitaryError&) {
    return std::nullopt;
  }
}

/// Rebuild the two-qubit gate from a one-sided decomposition (inverse of
/// one_sided_decomposition on success).
inline Unitary reassemble(const std::pair<Unitary, Unitary>& blocks, ControlSide side) {
  std::vector<Amplitude> e(16, 0.0);
  for (std::size_t ctrl = 0; ctrl < 2; ++ctrl) {
    const Unitary& u = ctrl == 0 ? blocks.first : blocks.second;
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < 2; ++c) {
        const std::size_t row = side == ControlSide::First ? (ctrl << 1) | r : (r << 1) | ctrl;
        const std::size_t col = side == ControlSide::First ? (ctrl << 1) | c : (c << 1) | ctrl;
        e[row * 4 + col] = u.at(r, c);
      }
    }
  }
  return Unitary(2, std::move(e));
}

/// True when the gate needs no conditional action at all: some one-sided
/// decomposition exists whose two blocks agree up to a global phase, making
/// the control vacuous.
inline bool single_system_reducible(const Unitary& g) {
  for (ControlSide side : {ControlSide::First, ControlSide::Second}) {
    if (auto blocks = one_sided_decomposition(g, side)) {
      if (equal_up_to_global_phase(blocks->first, blocks->second)) return true;
    }
  }
  return false;
}

/// Class 1 iff the gate decomposes on at least one side; both sides
/// decomposing means the gate is diagonal and is reported as such.
inline GateClass classify(const Unitary& g) {
  auto first = one_sided_decomposition(g, ControlSide::First);
  auto second = one_sided_decomposition(g, ControlSide::Second);
  GateClass result;
  if (first && second) {
    result = {Verdict::Class1, ControlSide::BothDiagonal, std::move(first)};
  } else if (first) {
    result = {Verdict::Class1, ControlSide::First, std::move(first)};
  } else if (second) {
    result = {Verdict::Class1, ControlSide::Second, std::move(second)};
  }
  return result;
}

}  // namespace condq
