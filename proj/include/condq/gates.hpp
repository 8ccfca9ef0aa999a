// Standard gate table and the conditional gate constructor.
//
// build_conditional turns an "If <predicate on the basis bit-string> then
// <apply these single-qubit gates and this phase>" description into a dense
// matrix and validates that the result is actually unitary. The named
// constructors below (definition1_swap, definition2_fredkin, ...) are the
// specific conditional gates this library is built around.

#pragma once

#include <cctype>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condq/statevec.hpp"

namespace condq {

inline Unitary identity_gate(int arity = 1) {
  const std::size_t d = std::size_t{1} << arity;
  std::vector<Amplitude> e(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) e[i * d + i] = 1.0;
  return Unitary(arity, std::move(e));
}

inline Unitary not_gate() {
  return Unitary(1, {0, 1,  //
                     1, 0});
}

inline Unitary hadamard_gate() {
  const double r = 1.0 / std::numbers::sqrt2;
  return Unitary(1, {r, r,  //
                     r, -r});
}

inline Unitary z_gate() {
  return Unitary(1, {1, 0,  //
                     0, -1});
}

/// One-qubit phase gate: |s> -> e^{i s phi} |s>.
inline Unitary phase_gate(double phi) {
  return Unitary(1, {1, 0,  //
                     0, std::polar(1.0, phi)});
}

/// Controlled-NOT, control on the first listed qubit.
inline Unitary cnot_gate() {
  return Unitary(2, {1, 0, 0, 0,  //
                     0, 1, 0, 0,  //
                     0, 0, 0, 1,  //
                     0, 0, 1, 0});
}

inline Unitary swap_gate() {
  return Unitary(2, {1, 0, 0, 0,  //
                     0, 0, 1, 0,  //
                     0, 1, 0, 0,  //
                     0, 0, 0, 1});
}

/// Double CNOT: |i,j> -> |j, i^j>.
inline Unitary dcnot_gate() {
  std::vector<Amplitude> e(16, 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t col = (i << 1) | j;
      const std::size_t row = (j << 1) | (i ^ j);
      e[row * 4 + col] = 1.0;
    }
  }
  return Unitary(2, std::move(e));
}

/// Controlled phase: |11> -> e^{i phi} |11>.
inline Unitary cphase_gate(double phi) {
  std::vector<Amplitude> e(16, 0.0);
  e[0 * 4 + 0] = 1.0;
  e[1 * 4 + 1] = 1.0;
  e[2 * 4 + 2] = 1.0;
  e[3 * 4 + 3] = std::polar(1.0, phi);
  return Unitary(2, std::move(e));
}

/// Relative phase gate conditioned on the two bits differing:
/// diag(1, e^{i phi}, e^{i phi}, 1).
inline Unitary relphase_gate(double phi) {
  std::vector<Amplitude> e(16, 0.0);
  e[0 * 4 + 0] = 1.0;
  e[1 * 4 + 1] = std::polar(1.0, phi);
  e[2 * 4 + 2] = std::polar(1.0, phi);
  e[3 * 4 + 3] = 1.0;
  return Unitary(2, std::move(e));
}

/// Controlled-SWAP on three qubits, control first.
inline Unitary fredkin_gate() {
  std::vector<Amplitude> e(64, 0.0);
  for (std::size_t col = 0; col < 8; ++col) {
    const std::size_t b1 = (col >> 2) & 1, b2 = (col >> 1) & 1, b3 = col & 1;
    const std::size_t row = b1 ? ((b1 << 2) | (b3 << 1) | b2) : col;
    e[row * 8 + col] = 1.0;
  }
  return Unitary(3, std::move(e));
}

/// Cyclic three-qubit swap: qubit 1 receives qubit 3's state, qubit 2
/// receives qubit 1's, qubit 3 receives qubit 2's. On the basis,
/// |b1 b2 b3> -> |b3 b1 b2>.
inline Unitary cycle3_gate() {
  std::vector<Amplitude> e(64, 0.0);
  for (std::size_t col = 0; col < 8; ++col) {
    const std::size_t b1 = (col >> 2) & 1, b2 = (col >> 1) & 1, b3 = col & 1;
    const std::size_t row = (b3 << 2) | (b1 << 1) | b2;
    e[row * 8 + col] = 1.0;
  }
  return Unitary(3, std::move(e));
}

/// Gate lookup by name for the CLI surface. Names are case-insensitive;
/// phase-parameterized gates require `phi`.
inline Unitary standard_gate(std::string_view name, std::optional<double> phi = std::nullopt) {
  std::string key;
  for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  const auto need_phi = [&]() -> double {
    if (!phi) throw std::invalid_argument("gate '" + key + "' requires a phase parameter");
    return *phi;
  };
  if (key == "not" || key == "x") return not_gate();
  if (key == "h" || key == "hadamard") return hadamard_gate();
  if (key == "z") return z_gate();
  if (key == "phase") return phase_gate(need_phi());
  if (key == "cnot") return cnot_gate();
  if (key == "swap") return swap_gate();
  if (key == "dcnot") return dcnot_gate();
  if (key == "cphase") return cphase_gate(need_phi());
  if (key == "relphase") return relphase_gate(need_phi());
  if (key == "fredkin") return fredkin_gate();
  if (key == "cycle3") return cycle3_gate();
  if (key == "i" || key == "id") return identity_gate();
  throw std::invalid_argument("unknown gate '" + std::string(name) + "'");
}

/// An "If condition Then act" gate description. The condition is a predicate
/// over computational-basis bit-strings (bits[0] is qubit 1); when it holds,
/// every qubit receives its entry of `actions` and the whole term picks up
/// `phase_when_true`. Basis states failing the condition are left unchanged.
struct ConditionalGateSpec {
  int n_qubits = 0;
  std::function<bool(std::span<const int>)> condition;
  std::vector<Unitary> actions;
  Amplitude phase_when_true = 1.0;
};

/// Materialize the conditional description as a matrix. Raises
/// NonUnitaryError when the sentence does not define a physical gate (the
/// constructed columns fail U†U = I).
inline Unitary build_conditional(const ConditionalGateSpec& spec) {
  const int n = spec.n_qubits;
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("build_conditional: qubit count out of range");
  if (!spec.condition) throw std::invalid_argument("build_conditional: missing condition");
  if (static_cast<int>(spec.actions.size()) != n) {
    throw std::invalid_argument("build_conditional: need one action per qubit");
  }
  for (const auto& a : spec.actions) {
    if (a.arity() != 1) throw std::invalid_argument("build_conditional: actions must be single-qubit gates");
  }
  if (std::abs(std::abs(spec.phase_when_true) - 1.0) > kNormTol) {
    throw std::invalid_argument("build_conditional: |phase_when_true| must be 1");
  }

  const std::size_t dim = std::size_t{1} << n;
  std::vector<Amplitude> entries(dim * dim, 0.0);
  for (std::size_t col = 0; col < dim; ++col) {
    const std::vector<int> bits = index_bits(col, n);
    if (spec.condition(bits)) {
      // Column = phase * (action_1 x ... x action_n) |col>.
      for (std::size_t row = 0; row < dim; ++row) {
        Amplitude v = spec.phase_when_true;
        for (int q = 1; q <= n; ++q) {
          const int rb = detail::bit_of(row, q, n);
          v *= spec.actions[q - 1].at(rb, bits[q - 1]);
        }
        entries[row * dim + col] = v;
      }
    } else {
      entries[col * dim + col] = 1.0;
    }
  }
  return Unitary(n, std::move(entries));
}

/// "If the states of the two qubits are not equal, apply NOT on each;
/// otherwise leave them unchanged." Equals the standard SWAP gate.
inline Unitary definition1_swap() {
  ConditionalGateSpec spec;
  spec.n_qubits = 2;
  spec.condition = [](std::span<const int> b) { return b[0] != b[1]; };
  spec.actions = {not_gate(), not_gate()};
  return build_conditional(spec);
}

/// "If the control qubit is |1>, apply NOT on both target qubits if they are
/// not equal; otherwise leave them unchanged." Equals the Fredkin gate.
inline Unitary definition2_fredkin() {
  ConditionalGateSpec spec;
  spec.n_qubits = 3;
  spec.condition = [](std::span<const int> b) { return b[0] == 1 && b[1] != b[2]; };
  spec.actions = {identity_gate(), not_gate(), not_gate()};
  return build_conditional(spec);
}

/// Three-qubit analogue of definition1_swap ("if the bits are not all equal,
/// flip every qubit"). Built only to show it is NOT the cyclic three-qubit
/// swap; see the disproof tests.
inline Unitary definition1_style_3q() {
  ConditionalGateSpec spec;
  spec.n_qubits = 3;
  spec.condition = [](std::span<const int> b) { return !(b[0] == b[1] && b[1] == b[2]); };
  spec.actions = {not_gate(), not_gate(), not_gate()};
  return build_conditional(spec);
}

/// |0><0| x I + |1><1| x u.
inline Unitary controlled_u(const Unitary& u) {
  if (u.arity() != 1) throw std::invalid_argument("controlled_u: need a single-qubit unitary");
  std::vector<Amplitude> e(16, 0.0);
  e[0 * 4 + 0] = 1.0;
  e[1 * 4 + 1] = 1.0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) e[(2 + r) * 4 + (2 + c)] = u.at(r, c);
  return Unitary(2, std::move(e));
}

/// One circuit element: a gate and the qubits it acts on.
struct GateOp {
  Unitary gate;
  std::vector<int> targets;
};

/// A circuit, listed in application order (front element acts first).
using GateExpr = std::vector<GateOp>;

/// Full 2^n x 2^n matrix of `u` acting on `targets` with identity elsewhere.
inline Unitary embed(const Unitary& u, std::span<const int> targets, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<Amplitude> entries(dim * dim, 0.0);
  for (std::size_t col = 0; col < dim; ++col) {
    const StateVector out = apply(u, targets, basis_state(index_bits(col, n_qubits)));
    for (std::size_t row = 0; row < dim; ++row) entries[row * dim + col] = out.amp(row);
  }
  return Unitary(n_qubits, std::move(entries));
}

/// Product of the embedded circuit elements, first element applied first.
inline Unitary compose(const GateExpr& expr, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("compose: qubit count out of range");
  const std::size_t dim = std::size_t{1} << n_qubits;
  // Columns of the running product, built by pushing basis states through
  // the circuit.
  std::vector<Amplitude> entries(dim * dim, 0.0);
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector s = basis_state(index_bits(col, n_qubits));
    for (const auto& op : expr) s = apply(op.gate, op.targets, s);
    for (std::size_t row = 0; row < dim; ++row) entries[row * dim + col] = s.amp(row);
  }
  return Unitary(n_qubits, std::move(entries));
}

inline double max_entry_diff(const Unitary& a, const Unitary& b) {
  if (a.arity() != b.arity()) throw std::invalid_argument("max_entry_diff: dimensions differ");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      worst = std::max(worst, std::abs(a.at(r, c) - b.at(r, c)));
  return worst;
}

/// Entrywise equality within kExactTol.
inline bool equal_exact(const Unitary& a, const Unitary& b) {
  if (a.arity() != b.arity()) throw std::invalid_argument("equal_exact: dimensions differ");
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (std::abs(a.at(r, c) - b.at(r, c)) > kExactTol) return false;
  return true;
}

/// a = lambda * b for some |lambda| = 1, with lambda fixed from the first
/// entry pair of largest modulus.
inline bool equal_up_to_global_phase(const Unitary& a, const Unitary& b, double tol = kNormTol) {
  if (a.arity() != b.arity()) throw std::invalid_argument("equal_up_to_global_phase: dimensions differ");
  std::size_t best_r = 0, best_c = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < b.dim(); ++r) {
    for (std::size_t c = 0; c < b.dim(); ++c) {
      const double m = std::abs(b.at(r, c));
      if (m > best + kExactTol) {
        best = m;
        best_r = r;
        best_c = c;
      }
    }
  }
  if (best <= tol) return false;
  const Amplitude lambda = a.at(best_r, best_c) / b.at(best_r, best_c);
  if (std::abs(std::abs(lambda) - 1.0) > tol) return false;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (std::abs(a.at(r, c) - lambda * b.at(r, c)) > tol) return false;
  return true;
}

}  // namespace condq
