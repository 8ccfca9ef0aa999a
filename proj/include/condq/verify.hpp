// The full identity/property battery behind `condq verify`: gate identities,
// the conditional constructions, the classification table, and every LOCC
// protocol checked branch-by-branch against the ideal gate, with exact
// resource counts.

#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "condq/classify.hpp"
#include "condq/gates.hpp"
#include "condq/locc.hpp"
#include "condq/statevec.hpp"

namespace condq::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline StateVector random_qubit_state(std::mt19937_64& rng) {
  for (;;) {
    const auto u = [&] { return uniform01(rng) * 2.0 - 1.0; };
    const Amplitude a(u(), u()), b(u(), u());
    const double n2 = std::norm(a) + std::norm(b);
    if (n2 < 1e-2) continue;
    const double s = 1.0 / std::sqrt(n2);
    return StateVector(1, {a * s, b * s});
  }
}

inline StateVector random_state(std::mt19937_64& rng, int n_qubits) {
  StateVector s = random_qubit_state(rng);
  for (int q = 1; q < n_qubits; ++q) s = tensor(s, random_qubit_state(rng));
  // Entangle a little so the state is not a bare product.
  if (n_qubits >= 2) {
    s = apply(hadamard_gate(), {1}, s);
    s = apply(cnot_gate(), {1, 2}, s);
  }
  return s;
}

/// The four Bell states as 2-qubit inputs.
inline std::vector<StateVector> bell_states() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {
      StateVector(2, {r, 0, 0, r}),    // (|00> + |11>)/sqrt(2)
      StateVector(2, {r, 0, 0, -r}),   // (|00> - |11>)/sqrt(2)
      StateVector(2, {0, r, r, 0}),    // (|01> + |10>)/sqrt(2)
      StateVector(2, {0, r, -r, 0}),   // (|01> - |10>)/sqrt(2)
  };
}

namespace detail {

struct BranchSummary {
  bool ok = true;
  std::size_t branch_count = 0;
  double worst_fidelity = 1.0;
  double prob_sum = 0.0;
  std::string problem;
};

/// Check every branch of a protocol run against the ideal final state.
inline BranchSummary check_branches(const std::function<ProtocolRun(OutcomeSource&)>& run,
                                    const StateVector& ideal, std::size_t expected_branches,
                                    const ResourceLedger& expected_ledger) {
  BranchSummary sum;
  const auto branches = run_all_branches(run);
  sum.branch_count = branches.size();
  if (branches.size() != expected_branches) {
    sum.ok = false;
    sum.problem = "expected " + std::to_string(expected_branches) + " branches, got " +
                  std::to_string(branches.size());
  }
  for (const auto& br : branches) {
    sum.prob_sum += br.probability;
    const double f = fidelity(br.final_state, ideal);
    sum.worst_fidelity = std::min(sum.worst_fidelity, f);
    if (f < 1.0 - 1e-12) {
      sum.ok = false;
      sum.problem = "branch fidelity " + std::to_string(f);
    }
    if (br.ledger.ebits_consumed != expected_ledger.ebits_consumed ||
        br.ledger.cbits_alice_to_bob != expected_ledger.cbits_alice_to_bob ||
        br.ledger.cbits_bob_to_alice != expected_ledger.cbits_bob_to_alice) {
      sum.ok = false;
      sum.problem = "ledger mismatch";
    }
  }
  if (std::abs(sum.prob_sum - 1.0) > 1e-9) {
    sum.ok = false;
    sum.problem = "branch probabilities sum to " + std::to_string(sum.prob_sum);
  }
  return sum;
}

inline std::function<ProtocolRun(OutcomeSource&)> teleport_run(const StateVector& alice_qubit) {
  return [alice_qubit](OutcomeSource& src) {
    LoccSystem sys(alice_qubit, {Party::Alice});
    const QubitId dst = teleport(sys, 1, Party::Bob, src);
    return ProtocolRun{std::move(sys), {dst}};
  };
}

inline std::function<ProtocolRun(OutcomeSource&)> cnot_run(const StateVector& data) {
  return [data](OutcomeSource& src) {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    nonlocal_control_u(sys, 1, 2, not_gate(), src);
    return ProtocolRun{std::move(sys), {1, 2}};
  };
}

inline std::function<ProtocolRun(OutcomeSource&)> swap_teleport_run(const StateVector& data) {
  return [data](OutcomeSource& src) {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    const auto [qa, qb] = nonlocal_swap_teleport(sys, 1, 2, src);
    return ProtocolRun{std::move(sys), {qa, qb}};
  };
}

inline std::function<ProtocolRun(OutcomeSource&)> swap_3cnot_run(const StateVector& data) {
  return [data](OutcomeSource& src) {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    nonlocal_swap_three_cnots(sys, 1, 2, src);
    return ProtocolRun{std::move(sys), {1, 2}};
  };
}

}  // namespace detail

/// Run every check; one result per line of `condq verify`.
inline std::vector<CheckResult> run_suite() {
  std::vector<CheckResult> results;
  const auto add = [&results](std::string name, bool pass, std::string detail = "") {
    results.push_back({std::move(name), pass, std::move(detail)});
  };

  // --- gate identities -----------------------------------------------------
  {
    const Unitary def1 = definition1_swap();
    const Unitary swap = swap_gate();
    bool rows_ok = true;
    // Truth table row for row: |00>->|00>, |01>->|10>, |10>->|01>, |11>->|11>.
    const int expected[4] = {0, 2, 1, 3};
    for (std::size_t col = 0; col < 4; ++col) {
      const StateVector out = apply(def1, {1, 2}, basis_state(index_bits(col, 2)));
      for (std::size_t row = 0; row < 4; ++row) {
        const double want = row == static_cast<std::size_t>(expected[col]) ? 1.0 : 0.0;
        if (std::abs(out.amp(row) - want) > kExactTol) rows_ok = false;
      }
    }
    add("definition1 == SWAP", equal_exact(def1, swap) && rows_ok);
  }
  {
    const GateExpr three_cnots = {{cnot_gate(), {1, 2}}, {cnot_gate(), {2, 1}}, {cnot_gate(), {1, 2}}};
    add("three CNOTs == SWAP", equal_exact(compose(three_cnots, 2), swap_gate()));
  }
  {
    const GateExpr two_cnots = {{cnot_gate(), {1, 2}}, {cnot_gate(), {2, 1}}};
    add("CNOT(1,2)*CNOT(2,1) == DCNOT", equal_exact(compose(two_cnots, 2), dcnot_gate()));
  }
  add("definition2 == FREDKIN", equal_exact(definition2_fredkin(), fredkin_gate()));
  {
    // The definition-1 style three-qubit rule must disagree with the cyclic
    // swap somewhere on the basis.
    const Unitary candidate = definition1_style_3q();
    const Unitary cyc = cycle3_gate();
    bool differs = false;
    for (std::size_t col = 0; col < 8 && !differs; ++col) {
      for (std::size_t row = 0; row < 8; ++row) {
        if (std::abs(candidate.at(row, col) - cyc.at(row, col)) > kExactTol) {
          differs = true;
          break;
        }
      }
    }
    add("3-qubit definition-1 rule != CYCLE3", differs);
  }
  {
    bool rejected = false;
    try {
      ConditionalGateSpec spec;
      spec.n_qubits = 2;
      spec.condition = [](std::span<const int> b) { return b[0] != b[1]; };
      spec.actions = {hadamard_gate(), hadamard_gate()};
      build_conditional(spec);
    } catch (const NonUnitaryError&) {
      rejected = true;
    }
    add("conditional (bits differ -> H,H) rejected as non-unitary", rejected);
  }
  {
    // Swap of two unknown qubits: 100 seeded random product states.
    std::mt19937_64 rng(20260808);
    const Unitary def1 = definition1_swap();
    double worst = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector q1 = random_qubit_state(rng);
      const StateVector q2 = random_qubit_state(rng);
      const StateVector swapped = apply(def1, {1, 2}, tensor(q1, q2));
      worst = std::min(worst, fidelity(swapped, tensor(q2, q1)));
    }
    add("unknown-qubit swap (100 random product states)", worst >= 1.0 - 1e-12,
        "worst fidelity " + std::to_string(worst));
  }
  {
    // Cyclic three-qubit swap as coefficient reassignment 1<-3, 2<-1, 3<-2.
    std::mt19937_64 rng(20260809);
    const Unitary cyc = cycle3_gate();
    double worst = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector q1 = random_qubit_state(rng);
      const StateVector q2 = random_qubit_state(rng);
      const StateVector q3 = random_qubit_state(rng);
      const StateVector out = apply(cyc, {1, 2, 3}, tensor(tensor(q1, q2), q3));
      worst = std::min(worst, fidelity(out, tensor(tensor(q3, q1), q2)));
    }
    add("CYCLE3 cyclic coefficient reassignment (100 random states)", worst >= 1.0 - 1e-12);
  }
  {
    bool ok = true;
    const std::vector<Unitary> table = {not_gate(),        hadamard_gate(),     z_gate(),
                                        phase_gate(0.7),   cnot_gate(),         swap_gate(),
                                        dcnot_gate(),      cphase_gate(0.7),    relphase_gate(0.7),
                                        fredkin_gate(),    cycle3_gate(),       definition1_swap(),
                                        definition2_fredkin(), definition1_style_3q()};
    for (const auto& g : table) {
      if (unitarity_defect(g.entries(), g.dim()) > kNormTol) ok = false;
    }
    add("gate table reversibility (U†U = I)", ok);
  }

  // --- classification ------------------------------------------------------
  {
    const bool ok = classify(cnot_gate()).verdict == Verdict::Class1 &&
                    classify(cphase_gate(0.7)).verdict == Verdict::Class1 &&
                    classify(relphase_gate(0.7)).verdict == Verdict::Class1 &&
                    classify(swap_gate()).verdict == Verdict::Class2 &&
                    classify(dcnot_gate()).verdict == Verdict::Class2;
    add("classification table (CNOT,CPHASE,RELPHASE -> Class1; SWAP,DCNOT -> Class2)", ok);
  }
  {
    bool ok = true;
    for (const Unitary& g : {cnot_gate(), cphase_gate(0.7), relphase_gate(0.7), controlled_u(hadamard_gate())}) {
      const GateClass cls = classify(g);
      if (cls.verdict != Verdict::Class1 || !cls.blocks || !cls.control_side) {
        ok = false;
        continue;
      }
      const ControlSide side =
          *cls.control_side == ControlSide::BothDiagonal ? ControlSide::First : *cls.control_side;
      if (max_entry_diff(reassemble(*cls.blocks, side), g) > kNormTol) ok = false;
    }
    add("Class1 blocks reassemble the gate", ok);
  }
  {
    const auto cp = classify(cphase_gate(0.7));
    const auto rp = classify(relphase_gate(0.7));
    add("diagonal gates report control side both(diagonal)",
        cp.control_side == ControlSide::BothDiagonal && rp.control_side == ControlSide::BothDiagonal);
  }

  // --- state-vector invariants ----------------------------------------------
  {
    std::mt19937_64 rng(20260810);
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector s = random_state(rng, 3);
      for (const auto& [gate, targets] :
           std::vector<std::pair<Unitary, std::vector<int>>>{{hadamard_gate(), {2}},
                                                             {cnot_gate(), {1, 3}},
                                                             {swap_gate(), {3, 2}},
                                                             {fredkin_gate(), {1, 2, 3}}}) {
        if (std::abs(apply(gate, targets, s).norm() - 1.0) > kNormTol) ok = false;
      }
    }
    add("norm preservation under apply", ok);
  }
  {
    std::mt19937_64 rng(20260811);
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector s = random_state(rng, 2);
      for (const Unitary& u : {hadamard_gate(), phase_gate(0.9)}) {
        const StateVector direct = apply(u, {1}, s);
        const StateVector embedded = apply(kron(u, identity_gate()), {1, 2}, s);
        for (std::size_t i = 0; i < direct.dim(); ++i) {
          if (std::abs(direct.amp(i) - embedded.amp(i)) > kExactTol) ok = false;
        }
      }
    }
    add("embedding consistency (u on qubit 1 == u x I)", ok);
  }
  {
    std::mt19937_64 rng(20260812);
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector s = random_state(rng, 3);
      for (int q = 1; q <= 3; ++q) {
        double total = 0.0;
        for (const auto& br : enumerate_branches(s, q)) total += br.probability;
        if (std::abs(total - 1.0) > kNormTol) ok = false;
      }
    }
    add("measurement branch probabilities sum to 1", ok);
  }
  {
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
      for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
        const auto bits = index_bits(idx, n);
        const StateVector s = basis_state(bits);
        if (std::abs(s.amp(idx) - 1.0) > kExactTol) ok = false;
      }
    }
    add("basis-state encoding round-trip", ok);
  }

  // --- LOCC protocols --------------------------------------------------------
  std::mt19937_64 rng(20260813);
  const StateVector psi = random_qubit_state(rng);
  const StateVector product2 = tensor(random_qubit_state(rng), random_qubit_state(rng));

  {
    const auto sum = detail::check_branches(detail::teleport_run(psi), psi, 4, {1, 2, 0});
    add("teleport correct in all 4 branches", sum.ok, sum.problem);
  }
  {
    const StateVector ideal = apply(cnot_gate(), {1, 2}, product2);
    const auto sum = detail::check_branches(detail::cnot_run(product2), ideal, 4, {1, 1, 1});
    add("nonlocal CNOT correct in all 4 branches", sum.ok, sum.problem);
  }
  {
    const StateVector ideal = apply(swap_gate(), {1, 2}, product2);
    const auto sum = detail::check_branches(detail::swap_teleport_run(product2), ideal, 16, {2, 2, 2});
    add("nonlocal SWAP (teleport) correct in all 16 branches", sum.ok, sum.problem);
  }
  {
    const StateVector ideal = apply(swap_gate(), {1, 2}, product2);
    const auto sum = detail::check_branches(detail::swap_3cnot_run(product2), ideal, 64, {3, 3, 3});
    add("nonlocal SWAP (3 CNOTs) correct in all 64 branches", sum.ok, sum.problem);
  }
  {
    bool ok = true;
    std::string problem;
    for (const StateVector& bell : bell_states()) {
      const StateVector cnot_ideal = apply(cnot_gate(), {1, 2}, bell);
      const StateVector swap_ideal = apply(swap_gate(), {1, 2}, bell);
      for (const auto& [run, ideal, count] :
           std::vector<std::tuple<std::function<ProtocolRun(OutcomeSource&)>, StateVector, std::size_t>>{
               {detail::cnot_run(bell), cnot_ideal, 4},
               {detail::swap_teleport_run(bell), swap_ideal, 16},
               {detail::swap_3cnot_run(bell), swap_ideal, 64}}) {
        const auto branches = run_all_branches(run);
        if (branches.size() != count) {
          ok = false;
          problem = "branch count";
        }
        for (const auto& br : branches) {
          if (fidelity(br.final_state, ideal) < 1.0 - 1e-12) {
            ok = false;
            problem = "Bell-input branch fidelity";
          }
        }
      }
    }
    add("protocols correct on all four Bell-state inputs", ok, problem);
  }
  {
    LoccSystem sys(product2, {Party::Alice, Party::Bob});
    SeededSource src(7);
    nonlocal_control_u(sys, 1, 2, not_gate(), src);
    const auto& l = sys.ledger();
    add("nonlocal CNOT ledger = (1 ebit, 2 cbits)",
        l.ebits_consumed == 1 && l.cbits_sent() == 2 && l.cbits_alice_to_bob == 1 && l.cbits_bob_to_alice == 1);
  }
  ResourceLedger swap_ledger;
  {
    LoccSystem sys(product2, {Party::Alice, Party::Bob});
    SeededSource src(7);
    nonlocal_swap_teleport(sys, 1, 2, src);
    swap_ledger = sys.ledger();
    add("nonlocal SWAP ledger = (2 ebits, 4 cbits)",
        swap_ledger.ebits_consumed == 2 && swap_ledger.cbits_sent() == 4 &&
            swap_ledger.cbits_alice_to_bob == 2 && swap_ledger.cbits_bob_to_alice == 2);
  }
  {
    LoccSystem sys(product2, {Party::Alice, Party::Bob});
    SeededSource src(7);
    nonlocal_swap_three_cnots(sys, 1, 2, src);
    const auto& l = sys.ledger();
    add("nonlocal SWAP (3 CNOTs) ledger = (3 ebits, 6 cbits)", l.ebits_consumed == 3 && l.cbits_sent() == 6);
  }
  {
    LoccSystem sys(product2, {Party::Alice, Party::Bob});
    SeededSource src(7);
    nonlocal_control_u(sys, 1, 2, not_gate(), src);
    const auto& cnot_ledger = sys.ledger();
    add("SWAP ledger strictly dominates CNOT ledger",
        swap_ledger.ebits_consumed > cnot_ledger.ebits_consumed &&
            swap_ledger.cbits_sent() > cnot_ledger.cbits_sent());
  }
  {
    bool raised = false;
    try {
      LoccSystem sys(product2, {Party::Alice, Party::Bob});
      sys.local_apply(Party::Alice, not_gate(), {2}, "X");
    } catch (const OwnershipError&) {
      raised = true;
    }
    add("ownership violation fails loudly", raised);
  }

  return results;
}

inline bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace condq::verify
