// Exact state-vector arithmetic for small qubit registers.
//
// Conventions used throughout the library:
//   - Qubits are numbered 1..n in the public interface.
//   - Basis index b encodes the bit-string b1 b2 ... bn with qubit 1 as the
//     most significant bit, so for two qubits |01> is index 1 and |10> is
//     index 2.
//   - At most 8 qubits (256 amplitudes); everything is dense and exact up to
//     floating-point rounding.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace condq {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 8;

/// Tolerance for unit-norm and unitarity checks.
inline constexpr double kNormTol = 1e-10;
/// Tolerance for entrywise identity checks on exactly-representable matrices.
inline constexpr double kExactTol = 1e-12;
/// Probability below which a measurement branch counts as impossible.
inline constexpr double kZeroProbTol = 1e-12;

/// Raised when a matrix that must be unitary fails U†U = I.
class NonUnitaryError : public std::runtime_error {
 public:
  explicit NonUnitaryError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline bool finite(const Amplitude& a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

/// Bit position (from the least significant end) of 1-based qubit q in an
/// n-qubit basis index.
inline int bit_shift(int qubit, int n_qubits) { return n_qubits - qubit; }

inline int bit_of(std::size_t index, int qubit, int n_qubits) {
  return static_cast<int>((index >> bit_shift(qubit, n_qubits)) & 1u);
}

}  // namespace detail

/// Max |(U†U - I)_{rc}| for a dim x dim row-major matrix.
inline double unitarity_defect(std::span<const Amplitude> entries, std::size_t dim) {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      Amplitude dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        dot += std::conj(entries[k * dim + r]) * entries[k * dim + c];
      }
      if (r == c) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

/// Dense 2^k x 2^k unitary matrix. Unitarity is validated on construction;
/// a failed check raises NonUnitaryError.
class Unitary {
 public:
  Unitary(int arity, std::vector<Amplitude> entries) : arity_(arity), entries_(std::move(entries)) {
    if (arity_ < 1 || arity_ > kMaxQubits) {
      throw std::invalid_argument("Unitary: arity must be in [1, 8]");
    }
    const std::size_t d = std::size_t{1} << arity_;
    if (entries_.size() != d * d) {
      throw std::invalid_argument("Unitary: entry count does not match arity");
    }
    for (const auto& e : entries_) {
      if (!detail::finite(e)) throw std::invalid_argument("Unitary: non-finite entry");
    }
    const double defect = unitarity_defect(entries_, d);
    if (defect > kNormTol) {
      throw NonUnitaryError("matrix is not unitary: max |U†U - I| entry = " + std::to_string(defect));
    }
  }

  int arity() const { return arity_; }
  std::size_t dim() const { return std::size_t{1} << arity_; }
  const Amplitude& at(std::size_t row, std::size_t col) const { return entries_[row * dim() + col]; }
  std::span<const Amplitude> entries() const { return entries_; }

 private:
  int arity_;
  std::vector<Amplitude> entries_;
};

/// Normalized joint state of n_qubits qubits: 2^n amplitudes indexed
/// most-significant-qubit-first.
class StateVector {
 public:
  StateVector(int n_qubits, std::vector<Amplitude> amps) : n_qubits_(n_qubits), amps_(std::move(amps)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) {
      throw std::invalid_argument("StateVector: qubit count must be in [1, 8]");
    }
    if (amps_.size() != (std::size_t{1} << n_qubits_)) {
      throw std::invalid_argument("StateVector: amplitude count does not match qubit count");
    }
    double norm2 = 0.0;
    for (const auto& a : amps_) {
      if (!detail::finite(a)) throw std::invalid_argument("StateVector: non-finite amplitude");
      norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > kNormTol) {
      throw std::invalid_argument("StateVector: norm^2 = " + std::to_string(norm2) + ", expected 1");
    }
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }
  const Amplitude& amp(std::size_t index) const { return amps_.at(index); }
  std::span<const Amplitude> amps() const { return amps_; }

  double norm() const {
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    return std::sqrt(n2);
  }

  /// Bit of 1-based qubit q in basis index `index`.
  int bit_at(std::size_t index, int qubit) const { return detail::bit_of(index, qubit, n_qubits_); }

 private:
  int n_qubits_;
  std::vector<Amplitude> amps_;
};

/// |b1 b2 ... bn> for the given bit string (qubit 1 first).
inline StateVector basis_state(std::span<const int> bits) {
  const int n = static_cast<int>(bits.size());
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("basis_state: need between 1 and 8 bits");
  }
  std::size_t index = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("basis_state: bits must be 0 or 1");
    index = (index << 1) | static_cast<std::size_t>(b);
  }
  std::vector<Amplitude> amps(std::size_t{1} << n, 0.0);
  amps[index] = 1.0;
  return StateVector(n, std::move(amps));
}

inline StateVector basis_state(std::initializer_list<int> bits) {
  return basis_state(std::span<const int>(bits.begin(), bits.size()));
}

/// Decode basis index into its bit string (inverse of the basis_state encoding).
inline std::vector<int> index_bits(std::size_t index, int n_qubits) {
  std::vector<int> bits(n_qubits);
  for (int q = 1; q <= n_qubits; ++q) bits[q - 1] = detail::bit_of(index, q, n_qubits);
  return bits;
}

/// Kronecker product; `a` supplies the more significant qubits.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() + b.n_qubits() > kMaxQubits) {
    throw std::invalid_argument("tensor: combined state exceeds 8 qubits");
  }
  std::vector<Amplitude> amps;
  amps.reserve(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      amps.push_back(a.amp(i) * b.amp(j));
    }
  }
  return StateVector(a.n_qubits() + b.n_qubits(), std::move(amps));
}

/// Kronecker product of matrices; `a` acts on the more significant qubits.
inline Unitary kron(const Unitary& a, const Unitary& b) {
  const std::size_t da = a.dim(), db = b.dim();
  std::vector<Amplitude> entries(da * db * da * db);
  for (std::size_t ra = 0; ra < da; ++ra)
    for (std::size_t ca = 0; ca < da; ++ca)
      for (std::size_t rb = 0; rb < db; ++rb)
        for (std::size_t cb = 0; cb < db; ++cb)
          entries[(ra * db + rb) * (da * db) + (ca * db + cb)] = a.at(ra, ca) * b.at(rb, cb);
  return Unitary(a.arity() + b.arity(), std::move(entries));
}

/// Apply u to the listed qubits (targets[0] maps to u's most significant
/// qubit), identity elsewhere.
inline StateVector apply(const Unitary& u, std::span<const int> targets, const StateVector& s) {
  const int n = s.n_qubits();
  const int k = u.arity();
  if (static_cast<int>(targets.size()) != k) {
    throw std::invalid_argument("apply: unitary arity does not match target count");
  }
  std::size_t target_mask = 0;
  std::vector<int> shifts(k);
  for (int j = 0; j < k; ++j) {
    const int q = targets[j];
    if (q < 1 || q > n) throw std::out_of_range("apply: target qubit out of range");
    const std::size_t bit = std::size_t{1} << detail::bit_shift(q, n);
    if (target_mask & bit) throw std::invalid_argument("apply: duplicate target qubit");
    target_mask |= bit;
    shifts[j] = detail::bit_shift(q, n);
  }

  // Scatter local index l (u's own MSB-first convention) onto the full index.
  const std::size_t local_dim = std::size_t{1} << k;
  std::vector<std::size_t> scatter(local_dim, 0);
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t pattern = 0;
    for (int j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1u) pattern |= std::size_t{1} << shifts[j];
    }
    scatter[l] = pattern;
  }

  std::vector<Amplitude> out(s.dim(), 0.0);
  for (std::size_t base = 0; base < s.dim(); ++base) {
    if (base & target_mask) continue;
    for (std::size_t r = 0; r < local_dim; ++r) {
      Amplitude acc = 0.0;
      for (std::size_t c = 0; c < local_dim; ++c) {
        acc += u.at(r, c) * s.amp(base | scatter[c]);
      }
      out[base | scatter[r]] = acc;
    }
  }
  return StateVector(n, std::move(out));
}

inline StateVector apply(const Unitary& u, std::initializer_list<int> targets, const StateVector& s) {
  return apply(u, std::span<const int>(targets.begin(), targets.size()), s);
}

inline Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("inner_product: qubit counts differ");
  }
  Amplitude dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += std::conj(a.amp(i)) * b.amp(i);
  return dot;
}

/// |<a|b>|^2.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

struct MeasurementOutcome {
  int bit = 0;
  double probability = 0.0;
  StateVector post_state;
};

namespace detail {

inline double prob_of_bit0(const StateVector& s, int qubit) {
  double p0 = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (bit_of(i, qubit, s.n_qubits()) == 0) p0 += std::norm(s.amp(i));
  }
  return p0;
}

inline StateVector collapse(const StateVector& s, int qubit, int bit, double prob) {
  std::vector<Amplitude> amps(s.dim(), 0.0);
  const double scale = 1.0 / std::sqrt(prob);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (bit_of(i, qubit, s.n_qubits()) == bit) amps[i] = s.amp(i) * scale;
  }
  return StateVector(s.n_qubits(), std::move(amps));
}

}  // namespace detail

/// Projective measurement of one qubit in the computational basis. The draw
/// is an injected number in [0,1): outcome 0 iff draw < P(0), except that a
/// branch of (numerically) zero probability is never selected.
inline MeasurementOutcome measure(const StateVector& s, int qubit, double draw) {
  if (qubit < 1 || qubit > s.n_qubits()) throw std::out_of_range("measure: qubit out of range");
  if (draw < 0.0 || draw >= 1.0) throw std::invalid_argument("measure: draw must lie in [0, 1)");
  const double p0 = detail::prob_of_bit0(s, qubit);
  int bit;
  if (p0 < kZeroProbTol) {
    bit = 1;
  } else if (1.0 - p0 < kZeroProbTol) {
    bit = 0;
  } else {
    bit = draw < p0 ? 0 : 1;
  }
  const double prob = bit == 0 ? p0 : 1.0 - p0;
  return MeasurementOutcome{bit, prob, detail::collapse(s, qubit, bit, prob)};
}

/// One branch of an exhaustive measurement. A branch of zero probability has
/// no post state; it is kept in the list as a flag but must be skipped by
/// downstream verification.
struct MeasurementBranch {
  int bit = 0;
  double probability = 0.0;
  std::optional<StateVector> post;

  bool viable() const { return post.has_value(); }
};

/// Both measurement branches of one qubit, in bit order 0, 1.
inline std::vector<MeasurementBranch> enumerate_branches(const StateVector& s, int qubit) {
  if (qubit < 1 || qubit > s.n_qubits()) throw std::out_of_range("enumerate_branches: qubit out of range");
  const double p0 = detail::prob_of_bit0(s, qubit);
  std::vector<MeasurementBranch> branches;
  for (int bit = 0; bit <= 1; ++bit) {
    const double prob = bit == 0 ? p0 : 1.0 - p0;
    MeasurementBranch br{bit, prob, std::nullopt};
    if (prob > kZeroProbTol) br.post = detail::collapse(s, qubit, bit, prob);
    branches.push_back(std::move(br));
  }
  return branches;
}

/// Remove a qubit that is in the definite basis state `bit` (e.g. just
/// measured), keeping the state on the remaining qubits.
inline StateVector drop_definite_qubit(const StateVector& s, int qubit, int bit) {
  if (s.n_qubits() < 2) throw std::invalid_argument("drop_definite_qubit: cannot drop the last qubit");
  if (qubit < 1 || qubit > s.n_qubits()) throw std::out_of_range("drop_definite_qubit: qubit out of range");
  const int n = s.n_qubits();
  const int shift = detail::bit_shift(qubit, n);
  const std::size_t low_mask = (std::size_t{1} << shift) - 1;
  std::vector<Amplitude> amps(s.dim() / 2);
  double kept = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const int b = detail::bit_of(i, qubit, n);
    const std::size_t reduced = ((i >> (shift + 1)) << shift) | (i & low_mask);
    if (b == bit) {
      amps[reduced] = s.amp(i);
      kept += std::norm(s.amp(i));
    } else if (std::norm(s.amp(i)) > kZeroProbTol) {
      throw std::invalid_argument("drop_definite_qubit: qubit is not in a definite state");
    }
  }
  const double scale = 1.0 / std::sqrt(kept);
  for (auto& a : amps) a *= scale;
  return StateVector(n - 1, std::move(amps));
}

}  // namespace condq
