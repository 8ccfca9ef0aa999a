// Two-party LOCC simulator. Alice and Bob own disjoint qubits of one joint
// state, allocate Bell pairs on demand, and exchange classical bits over a
// counted channel. Every protocol here is exact: measurement outcomes come
// from an injected OutcomeSource, so runs are replayable, and
// run_all_branches replaces sampling with exhaustive branch enumeration.
//
// Measured qubits are removed from the joint state after collapse; the
// largest protocol (nonlocal SWAP via three CNOTs) therefore never holds
// more than four live qubits.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "condq/gates.hpp"
#include "condq/statevec.hpp"

namespace condq {

enum class Party { Alice, Bob };

inline Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }

inline const char* party_name(Party p) { return p == Party::Alice ? "Alice" : "Bob"; }

/// A party acted on a qubit it does not own — a protocol bug.
class OwnershipError : public std::logic_error {
 public:
  explicit OwnershipError(const std::string& what) : std::logic_error(what) {}
};

/// Stable handle for a qubit; survives removal of other qubits.
using QubitId = int;

struct ResourceLedger {
  int ebits_consumed = 0;
  int cbits_alice_to_bob = 0;
  int cbits_bob_to_alice = 0;

  int cbits_sent() const { return cbits_alice_to_bob + cbits_bob_to_alice; }
};

struct TranscriptEvent {
  enum class Kind { BellPair, Gate, Measure, ClassicalBit };

  Kind kind;
  std::optional<Party> party;    // actor (Gate/Measure) or sender (ClassicalBit)
  std::vector<QubitId> qubits;
  std::string gate_name;         // Gate only
  std::optional<int> bit;        // Measure outcome or ClassicalBit value
  std::optional<double> probability;  // Measure only
  ResourceLedger ledger;         // running totals after the event
};

/// Supplies measurement outcomes. `p0` is the probability of outcome 0;
/// implementations must never select a branch of (numerically) zero
/// probability.
class OutcomeSource {
 public:
  virtual ~OutcomeSource() = default;
  virtual int choose(double p0) = 0;
};

/// Deterministic pseudo-random outcomes from a caller-provided seed.
class SeededSource final : public OutcomeSource {
 public:
  explicit SeededSource(std::uint64_t seed) : rng_(seed) {}

  int choose(double p0) override {
    if (p0 < kZeroProbTol) return 1;
    if (1.0 - p0 < kZeroProbTol) return 0;
    const double draw = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return draw < p0 ? 0 : 1;
  }

 private:
  std::mt19937_64 rng_;
};

/// Forces a preset outcome sequence. Once the script is exhausted, picks the
/// 0 branch whenever it is viable. Records every outcome taken and the
/// 0-branch probability seen at each measurement, which is what the branch
/// enumerator replays.
class ScriptedSource final : public OutcomeSource {
 public:
  ScriptedSource() = default;
  explicit ScriptedSource(std::vector<int> script) : script_(std::move(script)) {}

  int choose(double p0) override {
    int bit;
    if (next_ < script_.size()) {
      bit = script_[next_++];
      const double prob = bit == 0 ? p0 : 1.0 - p0;
      if (prob < kZeroProbTol) {
        throw std::logic_error("ScriptedSource: scripted outcome has zero probability");
      }
    } else {
      bit = p0 > kZeroProbTol ? 0 : 1;
    }
    path_.push_back(bit);
    p0_seen_.push_back(p0);
    return bit;
  }

  const std::vector<int>& path() const { return path_; }
  const std::vector<double>& p0_seen() const { return p0_seen_; }

 private:
  std::vector<int> script_;
  std::size_t next_ = 0;
  std::vector<int> path_;
  std::vector<double> p0_seen_;
};

/// (|00> + |11>) / sqrt(2).
inline StateVector bell_pair_state() {
  const double r = 1.0 / std::numbers::sqrt2;
  return StateVector(2, {r, 0.0, 0.0, r});
}

class LoccSystem {
 public:
  /// Start from a data state whose qubits are assigned to the given owners
  /// (owners[0] is qubit 1). The initial qubits receive ids 1..n.
  LoccSystem(StateVector data, std::vector<Party> owners) : joint_(std::move(data)) {
    if (static_cast<int>(owners.size()) != joint_.n_qubits()) {
      throw std::invalid_argument("LoccSystem: need one owner per qubit");
    }
    for (Party p : owners) slots_.push_back({next_id_++, p});
  }

  const StateVector& joint() const { return joint_; }
  const ResourceLedger& ledger() const { return ledger_; }
  const std::vector<TranscriptEvent>& transcript() const { return transcript_; }

  int live_qubits() const { return joint_.n_qubits(); }

  /// Live ids in position order.
  std::vector<QubitId> qubits() const {
    std::vector<QubitId> ids;
    for (const auto& s : slots_) ids.push_back(s.id);
    return ids;
  }

  Party owner(QubitId id) const { return slots_[slot_index(id)].owner; }

  /// Extend the joint state by a fresh Bell pair, one half per party.
  /// Returns (Alice's half, Bob's half). Counted as one consumed ebit at
  /// allocation.
  std::pair<QubitId, QubitId> create_bell_pair() {
    if (joint_.n_qubits() + 2 > kMaxQubits) {
      throw std::invalid_argument("create_bell_pair: qubit budget exceeded");
    }
    joint_ = tensor(joint_, bell_pair_state());
    const QubitId a = next_id_++;
    const QubitId b = next_id_++;
    slots_.push_back({a, Party::Alice});
    slots_.push_back({b, Party::Bob});
    ledger_.ebits_consumed += 1;
    record({TranscriptEvent::Kind::BellPair, std::nullopt, {a, b}, "", std::nullopt, std::nullopt, {}});
    return {a, b};
  }

  void local_apply(Party actor, const Unitary& u, std::span<const QubitId> targets,
                   std::string_view gate_name = "U") {
    std::vector<int> positions;
    for (QubitId id : targets) {
      require_owner(actor, id);
      positions.push_back(position(id));
    }
    joint_ = apply(u, positions, joint_);
    record({TranscriptEvent::Kind::Gate, actor, {targets.begin(), targets.end()},
            std::string(gate_name), std::nullopt, std::nullopt, {}});
  }

  void local_apply(Party actor, const Unitary& u, std::initializer_list<QubitId> targets,
                   std::string_view gate_name = "U") {
    local_apply(actor, u, std::span<const QubitId>(targets.begin(), targets.size()), gate_name);
  }

  /// Measure with an explicit draw in [0,1). The measured qubit collapses
  /// and is removed from the joint state.
  int local_measure(Party actor, QubitId id, double draw) {
    require_owner(actor, id);
    const MeasurementOutcome out = measure(joint_, position(id), draw);
    finish_measure(actor, id, out.bit, out.probability);
    return out.bit;
  }

  /// Measure with the outcome chosen by the source.
  int local_measure(Party actor, QubitId id, OutcomeSource& source) {
    require_owner(actor, id);
    const double p0 = detail::prob_of_bit0(joint_, position(id));
    const int bit = source.choose(p0);
    const double prob = bit == 0 ? p0 : 1.0 - p0;
    if (prob < kZeroProbTol) {
      throw std::logic_error("local_measure: outcome source selected a zero-probability branch");
    }
    finish_measure(actor, id, bit, prob);
    return bit;
  }

  void send_bit(Party from, int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("send_bit: bit must be 0 or 1");
    if (from == Party::Alice) {
      ledger_.cbits_alice_to_bob += 1;
    } else {
      ledger_.cbits_bob_to_alice += 1;
    }
    record({TranscriptEvent::Kind::ClassicalBit, from, {}, "", bit, std::nullopt, {}});
  }

  /// Joint state restricted to the given ids, reordered so ids[0] becomes
  /// qubit 1. The ids must be exactly the live qubits.
  StateVector state_of(std::span<const QubitId> ids) const {
    const int n = joint_.n_qubits();
    if (static_cast<int>(ids.size()) != n) {
      throw std::invalid_argument("state_of: must list every live qubit exactly once");
    }
    std::vector<int> old_pos;
    for (QubitId id : ids) old_pos.push_back(position(id));
    std::vector<Amplitude> amps(joint_.dim());
    for (std::size_t i = 0; i < joint_.dim(); ++i) {
      std::size_t permuted = 0;
      for (int q = 1; q <= n; ++q) {
        permuted = (permuted << 1) | static_cast<std::size_t>(detail::bit_of(i, old_pos[q - 1], n));
      }
      amps[permuted] = joint_.amp(i);
    }
    return StateVector(n, std::move(amps));
  }

  StateVector state_of(std::initializer_list<QubitId> ids) const {
    return state_of(std::span<const QubitId>(ids.begin(), ids.size()));
  }

 private:
  struct Slot {
    QubitId id;
    Party owner;
  };

  std::size_t slot_index(QubitId id) const {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (slots_[i].id == id) return i;
    }
    throw std::invalid_argument("unknown or already-measured qubit id " + std::to_string(id));
  }

  int position(QubitId id) const { return static_cast<int>(slot_index(id)) + 1; }

  void require_owner(Party actor, QubitId id) const {
    if (owner(id) != actor) {
      throw OwnershipError(std::string(party_name(actor)) + " does not own qubit " + std::to_string(id));
    }
  }

  void finish_measure(Party actor, QubitId id, int bit, double prob) {
    const int pos = position(id);
    const StateVector collapsed = detail::collapse(joint_, pos, bit, prob);
    joint_ = drop_definite_qubit(collapsed, pos, bit);
    slots_.erase(slots_.begin() + (pos - 1));
    record({TranscriptEvent::Kind::Measure, actor, {id}, "", bit, prob, {}});
  }

  void record(TranscriptEvent ev) {
    ev.ledger = ledger_;
    transcript_.push_back(std::move(ev));
  }

  StateVector joint_;
  std::vector<Slot> slots_;
  QubitId next_id_ = 1;
  ResourceLedger ledger_;
  std::vector<TranscriptEvent> transcript_;
};

// ---------------------------------------------------------------------------
// Protocols. Each consumes a fixed number of ebits and classical bits:
//   teleport                  1 ebit, 2 cbits (both sender -> receiver)
//   nonlocal_control_u        1 ebit, 2 cbits (one each direction)
//   nonlocal_swap_teleport    2 ebits, 4 cbits (two each direction)
//   nonlocal_swap_three_cnots 3 ebits, 6 cbits (three each direction)
// ---------------------------------------------------------------------------

/// Transfer the state of `source` to a fresh qubit at party `to` via one
/// Bell pair and two classical bits. Returns the receiving qubit's id.
inline QubitId teleport(LoccSystem& sys, QubitId source, Party to, OutcomeSource& outcomes) {
  const Party from = sys.owner(source);
  if (from == to) throw std::invalid_argument("teleport: source is already at the destination party");
  const auto [alice_half, bob_half] = sys.create_bell_pair();
  const QubitId near_half = from == Party::Alice ? alice_half : bob_half;
  const QubitId far_half = from == Party::Alice ? bob_half : alice_half;

  sys.local_apply(from, cnot_gate(), {source, near_half}, "CNOT");
  sys.local_apply(from, hadamard_gate(), {source}, "H");
  const int m1 = sys.local_measure(from, source, outcomes);
  const int m2 = sys.local_measure(from, near_half, outcomes);
  sys.send_bit(from, m2);
  sys.send_bit(from, m1);
  if (m2 == 1) sys.local_apply(to, not_gate(), {far_half}, "X");
  if (m1 == 1) sys.local_apply(to, z_gate(), {far_half}, "Z");
  return far_half;
}

/// Controlled-u across the parties: `control` stays put, u hits `target` iff
/// the control is set. One Bell pair, one classical bit in each direction.
///
/// The control party entangles the control with its Bell half and measures
/// it out; after a conditional flip, the target party's Bell half mirrors
/// the control, so controlled-u can be applied locally. Erasing the used
/// half in the Hadamard basis leaves at most a phase on the control, fixed
/// by the final Z.
inline void nonlocal_control_u(LoccSystem& sys, QubitId control, QubitId target, const Unitary& u,
                               OutcomeSource& outcomes) {
  const Party ctrl_party = sys.owner(control);
  const Party tgt_party = sys.owner(target);
  if (ctrl_party == tgt_party) {
    throw std::invalid_argument("nonlocal_control_u: control and target belong to the same party");
  }
  const auto [alice_half, bob_half] = sys.create_bell_pair();
  const QubitId ctrl_half = ctrl_party == Party::Alice ? alice_half : bob_half;
  const QubitId tgt_half = ctrl_party == Party::Alice ? bob_half : alice_half;

  sys.local_apply(ctrl_party, cnot_gate(), {control, ctrl_half}, "CNOT");
  const int m = sys.local_measure(ctrl_party, ctrl_half, outcomes);
  sys.send_bit(ctrl_party, m);
  if (m == 1) sys.local_apply(tgt_party, not_gate(), {tgt_half}, "X");
  sys.local_apply(tgt_party, controlled_u(u), {tgt_half, target}, "C-U");
  sys.local_apply(tgt_party, hadamard_gate(), {tgt_half}, "H");
  const int k = sys.local_measure(tgt_party, tgt_half, outcomes);
  sys.send_bit(tgt_party, k);
  if (k == 1) sys.local_apply(ctrl_party, z_gate(), {control}, "Z");
}

/// Exchange the states of one qubit per party: teleport Alice's qubit over,
/// SWAP locally at Bob, teleport the swapped qubit back. Two ebits, four
/// classical bits. Returns (replacement for qa, qb).
inline std::pair<QubitId, QubitId> nonlocal_swap_teleport(LoccSystem& sys, QubitId qa, QubitId qb,
                                                          OutcomeSource& outcomes) {
  const Party pa = sys.owner(qa);
  const Party pb = sys.owner(qb);
  if (pa == pb) throw std::invalid_argument("nonlocal_swap_teleport: qubits belong to the same party");
  const QubitId moved = teleport(sys, qa, pb, outcomes);
  sys.local_apply(pb, swap_gate(), {moved, qb}, "SWAP");
  const QubitId back = teleport(sys, moved, pa, outcomes);
  return {back, qb};
}

/// Exchange via three sequential nonlocal CNOTs (control alternating
/// a -> b -> a). Three ebits, six classical bits; the data qubits keep
/// their ids.
inline void nonlocal_swap_three_cnots(LoccSystem& sys, QubitId qa, QubitId qb, OutcomeSource& outcomes) {
  nonlocal_control_u(sys, qa, qb, not_gate(), outcomes);
  nonlocal_control_u(sys, qb, qa, not_gate(), outcomes);
  nonlocal_control_u(sys, qa, qb, not_gate(), outcomes);
}

// ---------------------------------------------------------------------------
// Exhaustive branch enumeration.
// ---------------------------------------------------------------------------

struct ProtocolBranch {
  std::vector<int> outcomes;   // measurement bits in protocol order
  double probability = 0.0;
  StateVector final_state;     // data qubits in the order the run returned
  ResourceLedger ledger;
  std::vector<TranscriptEvent> transcript;
};

/// One full protocol execution: the system after the run plus the data
/// qubits (in the order the final state should be read).
struct ProtocolRun {
  LoccSystem system;
  std::vector<QubitId> data;
};

inline constexpr int kMaxMeasurementEvents = 16;

/// Run the protocol once per reachable measurement path. `run` must build a
/// fresh system and execute the protocol with the supplied source. Branches
/// are returned in lexicographic outcome order; their probabilities sum
/// to 1.
inline std::vector<ProtocolBranch> run_all_branches(
    const std::function<ProtocolRun(OutcomeSource&)>& run) {
  std::vector<ProtocolBranch> branches;
  std::deque<std::vector<int>> pending;
  pending.push_back({});
  while (!pending.empty()) {
    const std::vector<int> script = std::move(pending.front());
    pending.pop_front();
    ScriptedSource source(script);
    ProtocolRun result = run(source);
    const auto& path = source.path();
    const auto& p0s = source.p0_seen();
    if (static_cast<int>(path.size()) > kMaxMeasurementEvents) {
      throw std::invalid_argument("run_all_branches: too many measurement events");
    }
    double probability = 1.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      probability *= path[i] == 0 ? p0s[i] : 1.0 - p0s[i];
    }
    // Queue the sibling of every free choice made after the forced prefix.
    for (std::size_t i = script.size(); i < path.size(); ++i) {
      const double flipped_prob = path[i] == 0 ? 1.0 - p0s[i] : p0s[i];
      if (flipped_prob > kZeroProbTol) {
        std::vector<int> sibling(path.begin(), path.begin() + static_cast<long>(i));
        sibling.push_back(1 - path[i]);
        pending.push_back(std::move(sibling));
      }
    }
    branches.push_back(ProtocolBranch{path, probability, result.system.state_of(result.data),
                                      result.system.ledger(), result.system.transcript()});
  }
  std::sort(branches.begin(), branches.end(),
            [](const ProtocolBranch& a, const ProtocolBranch& b) { return a.outcomes < b.outcomes; });
  return branches;
}

}  // namespace condq
