// Acceptance suite: every headline property of the library, one line each.
// Usage: condq_acceptance <path-to-condq-cli>
//
// The CLI checks run the installed binary as a subprocess, so this suite
// exercises the same surface a user scripts against.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "condq/classify.hpp"
#include "condq/format.hpp"
#include "condq/gates.hpp"
#include "condq/locc.hpp"
#include "condq/statevec.hpp"
#include "condq/verify.hpp"

using namespace condq;

namespace {

int g_failures = 0;

void check(const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
  if (!ok && !detail.empty()) std::cout << " — " << detail;
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult result;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

bool is_exact_permutation(const Unitary& u, const std::vector<std::size_t>& col_to_row) {
  for (std::size_t c = 0; c < u.dim(); ++c) {
    for (std::size_t r = 0; r < u.dim(); ++r) {
      // Round at 1e-12, then demand exact 0/1 entries.
      const double re = u.at(r, c).real(), im = u.at(r, c).imag();
      if (std::abs(im) > 1e-12) return false;
      const double want = r == col_to_row[c] ? 1.0 : 0.0;
      if (std::abs(re - want) > 1e-12) return false;
    }
  }
  return true;
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

StateVector random_qubit(std::mt19937_64& rng) {
  for (;;) {
    const Amplitude a(uniform(rng) * 2 - 1, uniform(rng) * 2 - 1);
    const Amplitude b(uniform(rng) * 2 - 1, uniform(rng) * 2 - 1);
    const double n2 = std::norm(a) + std::norm(b);
    if (n2 < 1e-2) continue;
    const double s = 1.0 / std::sqrt(n2);
    return StateVector(1, {a * s, b * s});
  }
}

// --- criterion 1 -----------------------------------------------------------

void criterion1() {
  const Unitary def1 = definition1_swap();
  bool ok = is_exact_permutation(def1, {0, 2, 1, 3});
  // Truth table row for row: |00>->|00>, |11>->|11>, |01>->|10>, |10>->|01>.
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> rows = {
      {{0, 0}, {0, 0}}, {{1, 1}, {1, 1}}, {{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}};
  for (const auto& [in, want] : rows) {
    if (fidelity(apply(def1, {1, 2}, basis_state(in)), basis_state(want)) < 1.0 - 1e-12) ok = false;
  }
  check("criterion 1: conditional definition reproduces SWAP exactly, row for row", ok);
}

// --- criterion 2 -----------------------------------------------------------

void criterion2() {
  std::mt19937_64 rng(424242);
  const Unitary def1 = definition1_swap();
  double worst = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector q1 = random_qubit(rng);
    const StateVector q2 = random_qubit(rng);
    worst = std::min(worst, fidelity(apply(def1, {1, 2}, tensor(q1, q2)), tensor(q2, q1)));
  }
  check("criterion 2: swap of two unknown qubits on 100 random product states", worst >= 1.0 - 1e-12,
        "worst fidelity " + std::to_string(worst));
}

// --- criterion 3 -----------------------------------------------------------

void criterion3() {
  const GateExpr expr = {{cnot_gate(), {1, 2}}, {cnot_gate(), {2, 1}}, {cnot_gate(), {1, 2}}};
  check("criterion 3: three alternating CNOTs equal SWAP exactly",
        is_exact_permutation(compose(expr, 2), {0, 2, 1, 3}));
}

// --- criterion 4 -----------------------------------------------------------

void criterion4() {
  const Unitary def2 = definition2_fredkin();
  const Unitary fredkin = fredkin_gate();
  bool ok = equal_exact(def2, fredkin);
  for (std::size_t b = 0; b < 8; ++b) {
    const StateVector in = basis_state(index_bits(b, 3));
    if (fidelity(apply(def2, {1, 2, 3}, in), apply(fredkin, {1, 2, 3}, in)) < 1.0 - 1e-12) ok = false;
  }
  check("criterion 4: conditional Fredkin equals controlled-SWAP on all 8 basis states", ok);
}

// --- criterion 5 -----------------------------------------------------------

void criterion5() {
  const Unitary candidate = definition1_style_3q();
  const Unitary cyc = cycle3_gate();
  int disagreements = 0;
  for (std::size_t b = 0; b < 8; ++b) {
    const StateVector in = basis_state(index_bits(b, 3));
    if (fidelity(apply(candidate, {1, 2, 3}, in), apply(cyc, {1, 2, 3}, in)) < 0.5) ++disagreements;
  }
  // The expected witness: the rule flips |011> to |100>, the cyclic swap
  // sends it to |101>.
  const bool witness =
      fidelity(apply(candidate, {1, 2, 3}, basis_state({0, 1, 1})), basis_state({1, 0, 0})) > 1.0 - 1e-12 &&
      fidelity(apply(cyc, {1, 2, 3}, basis_state({0, 1, 1})), basis_state({1, 0, 1})) > 1.0 - 1e-12;
  check("criterion 5: definition-1-style rule differs from the cyclic 3-swap (witness |011>)",
        disagreements > 0 && witness,
        "disagreements on " + std::to_string(disagreements) + " basis states");
}

// --- criterion 6 -----------------------------------------------------------

void criterion6() {
  struct Expectation {
    std::string name;
    Unitary gate;
    Verdict verdict;
  };
  const std::vector<Expectation> table = {{"CNOT", cnot_gate(), Verdict::Class1},
                                          {"CPHASE(0.7)", cphase_gate(0.7), Verdict::Class1},
                                          {"RELPHASE(0.7)", relphase_gate(0.7), Verdict::Class1},
                                          {"SWAP", swap_gate(), Verdict::Class2},
                                          {"DCNOT", dcnot_gate(), Verdict::Class2}};
  bool ok = true;
  std::string detail;
  for (const auto& e : table) {
    const GateClass cls = classify(e.gate);
    if (cls.verdict != e.verdict) {
      ok = false;
      detail = e.name + " misclassified";
    }
    if (cls.verdict == Verdict::Class1) {
      if (!cls.blocks || !cls.control_side) {
        ok = false;
        detail = e.name + " missing blocks";
        continue;
      }
      const ControlSide side =
          *cls.control_side == ControlSide::BothDiagonal ? ControlSide::First : *cls.control_side;
      if (max_entry_diff(reassemble(*cls.blocks, side), e.gate) > 1e-10) {
        ok = false;
        detail = e.name + " blocks do not reassemble";
      }
    }
  }
  check("criterion 6: classification table with reassembling Class1 blocks", ok, detail);
}

// --- criterion 7 -----------------------------------------------------------

void criterion7() {
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
  check("criterion 7: conditional Hadamard-on-unequal sentence rejected as non-unitary", rejected);
}

// --- criteria 8 and 9 ------------------------------------------------------

struct ProtocolOutcome {
  bool fidelities_ok = true;
  bool counts_ok = true;
  bool ledger_ok = true;
  double worst_fidelity = 1.0;
};

ProtocolOutcome check_protocol(const std::function<ProtocolRun(OutcomeSource&)>& run,
                               const StateVector& ideal, std::size_t expected_branches,
                               int ebits, int a2b, int b2a) {
  ProtocolOutcome out;
  const auto branches = run_all_branches(run);
  out.counts_ok = branches.size() == expected_branches;
  double prob_sum = 0.0;
  for (const auto& br : branches) {
    prob_sum += br.probability;
    const double f = fidelity(br.final_state, ideal);
    out.worst_fidelity = std::min(out.worst_fidelity, f);
    if (f < 1.0 - 1e-12) out.fidelities_ok = false;
    if (br.ledger.ebits_consumed != ebits || br.ledger.cbits_alice_to_bob != a2b ||
        br.ledger.cbits_bob_to_alice != b2a) {
      out.ledger_ok = false;
    }
  }
  if (std::abs(prob_sum - 1.0) > 1e-9) out.fidelities_ok = false;
  return out;
}

std::function<ProtocolRun(OutcomeSource&)> teleport_product_run(const StateVector& psi) {
  return [psi](OutcomeSource& src) {
    LoccSystem sys(psi, {Party::Alice});
    const QubitId dst = teleport(sys, 1, Party::Bob, src);
    return ProtocolRun{std::move(sys), {dst}};
  };
}

std::function<ProtocolRun(OutcomeSource&)> teleport_spectator_run(const StateVector& data) {
  return [data](OutcomeSource& src) {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    const QubitId dst = teleport(sys, 1, Party::Bob, src);
    return ProtocolRun{std::move(sys), {dst, 2}};
  };
}

std::function<ProtocolRun(OutcomeSource&)> cnot_run(const StateVector& data) {
  return [data](OutcomeSource& src) {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    nonlocal_control_u(sys, 1, 2, not_gate(), src);
    return ProtocolRun{std::move(sys), {1, 2}};
  };
}

std::function<ProtocolRun(OutcomeSource&)> swap_teleport_run(const StateVector& data) {
  return [data](OutcomeSource& src) {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    const auto [qa, qb] = nonlocal_swap_teleport(sys, 1, 2, src);
    return ProtocolRun{std::move(sys), {qa, qb}};
  };
}

std::function<ProtocolRun(OutcomeSource&)> swap_3cnot_run(const StateVector& data) {
  return [data](OutcomeSource& src) {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    nonlocal_swap_three_cnots(sys, 1, 2, src);
    return ProtocolRun{std::move(sys), {1, 2}};
  };
}

void criteria_8_and_9() {
  std::mt19937_64 rng(777);
  std::vector<StateVector> two_qubit_inputs;
  for (int trial = 0; trial < 5; ++trial) {
    two_qubit_inputs.push_back(tensor(random_qubit(rng), random_qubit(rng)));
  }
  for (const auto& bell : verify::bell_states()) two_qubit_inputs.push_back(bell);

  bool teleport_ok = true, cnot_ok = true, swap_tp_ok = true, swap_3c_ok = true;
  double worst = 1.0;

  for (int trial = 0; trial < 5; ++trial) {
    const StateVector psi = random_qubit(rng);
    const auto out = check_protocol(teleport_product_run(psi), psi, 4, 1, 2, 0);
    worst = std::min(worst, out.worst_fidelity);
    if (!out.fidelities_ok || !out.counts_ok || !out.ledger_ok) teleport_ok = false;
  }
  for (const auto& bell : verify::bell_states()) {
    const auto out = check_protocol(teleport_spectator_run(bell), bell, 4, 1, 2, 0);
    worst = std::min(worst, out.worst_fidelity);
    if (!out.fidelities_ok || !out.counts_ok || !out.ledger_ok) teleport_ok = false;
  }

  for (const auto& input : two_qubit_inputs) {
    const StateVector cnot_ideal = apply(cnot_gate(), {1, 2}, input);
    const StateVector swap_ideal = apply(swap_gate(), {1, 2}, input);

    const auto cn = check_protocol(cnot_run(input), cnot_ideal, 4, 1, 1, 1);
    if (!cn.fidelities_ok || !cn.counts_ok) cnot_ok = false;
    if (!cn.ledger_ok) cnot_ok = false;

    const auto st = check_protocol(swap_teleport_run(input), swap_ideal, 16, 2, 2, 2);
    if (!st.fidelities_ok || !st.counts_ok) swap_tp_ok = false;
    if (!st.ledger_ok) swap_tp_ok = false;

    const auto s3 = check_protocol(swap_3cnot_run(input), swap_ideal, 64, 3, 3, 3);
    if (!s3.fidelities_ok || !s3.counts_ok) swap_3c_ok = false;
    if (!s3.ledger_ok) swap_3c_ok = false;

    worst = std::min({worst, cn.worst_fidelity, st.worst_fidelity, s3.worst_fidelity});
  }

  check("criterion 8: teleport ideal in all 4 branches (product and Bell inputs)", teleport_ok);
  check("criterion 8: nonlocal CNOT ideal in all 4 branches (product and Bell inputs)", cnot_ok);
  check("criterion 8: nonlocal SWAP via teleportation ideal in all 16 branches", swap_tp_ok);
  check("criterion 8: nonlocal SWAP via three CNOTs ideal in all 64 branches", swap_3c_ok,
        "worst fidelity " + std::to_string(worst));

  // Criterion 9: integer-exact ledgers from single sampled runs.
  const StateVector data = tensor(random_qubit(rng), random_qubit(rng));
  ResourceLedger cnot_ledger, swap_tp_ledger, swap_3c_ledger;
  {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    SeededSource src(1);
    nonlocal_control_u(sys, 1, 2, not_gate(), src);
    cnot_ledger = sys.ledger();
  }
  {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    SeededSource src(2);
    nonlocal_swap_teleport(sys, 1, 2, src);
    swap_tp_ledger = sys.ledger();
  }
  {
    LoccSystem sys(data, {Party::Alice, Party::Bob});
    SeededSource src(3);
    nonlocal_swap_three_cnots(sys, 1, 2, src);
    swap_3c_ledger = sys.ledger();
  }
  check("criterion 9: nonlocal CNOT ledger = (1 ebit, 2 cbits)",
        cnot_ledger.ebits_consumed == 1 && cnot_ledger.cbits_sent() == 2);
  check("criterion 9: SWAP-via-teleportation ledger = (2 ebits, 4 cbits)",
        swap_tp_ledger.ebits_consumed == 2 && swap_tp_ledger.cbits_sent() == 4);
  check("criterion 9: SWAP-via-three-CNOTs ledger = (3 ebits, 6 cbits)",
        swap_3c_ledger.ebits_consumed == 3 && swap_3c_ledger.cbits_sent() == 6);
  check("criterion 9: SWAP ledger strictly dominates CNOT ledger",
        swap_tp_ledger.ebits_consumed > cnot_ledger.ebits_consumed &&
            swap_tp_ledger.cbits_sent() > cnot_ledger.cbits_sent());
}

// --- criterion 10 ------------------------------------------------------------

void criterion10(const std::string& cli) {
  if (cli.empty()) {
    check("criterion 10: CLI contract", false, "no CLI path supplied");
    return;
  }
  const std::string quoted = "\"" + cli + "\"";

  const CommandResult verify_run = run_command(quoted + " verify");
  const bool verify_ok = verify_run.exit_code == 0 &&
                         verify_run.output.find("FAIL") == std::string::npos &&
                         verify_run.output.find("definition1 == SWAP: PASS") != std::string::npos &&
                         verify_run.output.find("nonlocal SWAP ledger = (2 ebits, 4 cbits): PASS") !=
                             std::string::npos;
  check("criterion 10: `verify` exits 0 with every check PASS", verify_ok,
        "exit " + std::to_string(verify_run.exit_code));

  const std::string sim_cmd = quoted + " simulate nonlocal-swap-teleport --seed 42 --json";
  const CommandResult sim1 = run_command(sim_cmd);
  const CommandResult sim2 = run_command(sim_cmd);
  check("criterion 10: fixed-seed structured output is byte-identical across runs",
        sim1.exit_code == 0 && sim1.output == sim2.output && !sim1.output.empty());

  const CommandResult branches = run_command(quoted + " simulate nonlocal-cnot --all-branches");
  check("criterion 10: `simulate nonlocal-cnot --all-branches` reports 4 ideal branches",
        branches.exit_code == 0 && branches.output.find("branches: 4") != std::string::npos &&
            branches.output.find("ebits=1 cbits=2") != std::string::npos);

  // Matrix round-trip through a file, within 1e-12.
  bool roundtrip_ok = true;
  std::string detail;
  const struct {
    std::string args;
    Unitary expected;
  } cases[] = {{" matrix swap", swap_gate()}, {" matrix relphase --phase 0.7", relphase_gate(0.7)}};
  for (const auto& c : cases) {
    const CommandResult printed = run_command(quoted + c.args);
    if (printed.exit_code != 0) {
      roundtrip_ok = false;
      detail = "matrix print failed";
      continue;
    }
    std::istringstream in(printed.output);
    try {
      const Unitary back = parse_matrix(in);
      if (max_entry_diff(back, c.expected) > 1e-12) {
        roundtrip_ok = false;
        detail = "reparsed matrix differs";
      }
    } catch (const std::exception& e) {
      roundtrip_ok = false;
      detail = e.what();
    }
  }
  check("criterion 10: printed matrices reparse to the same unitary within 1e-12", roundtrip_ok, detail);

  // A non-unitary matrix file is rejected as a usage error naming the check.
  const std::string tmp = "condq_acceptance_nonunitary.txt";
  {
    std::ofstream out(tmp);
    out << "1+0j 0+0j\n0+0j 2+0j\n";
  }
  const CommandResult bad = run_command(quoted + " classify --file " + tmp);
  std::remove(tmp.c_str());
  check("criterion 10: non-unitary matrix file rejected with exit 2",
        bad.exit_code == 2 && bad.output.find("not unitary") != std::string::npos);

  const CommandResult unknown = run_command(quoted + " truth-table nosuchgate");
  check("criterion 10: unknown gate is a usage error", unknown.exit_code == 2);
}

}  // namespace

int main(int argc, char** argv) {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criteria_8_and_9();
  criterion10(argc > 1 ? argv[1] : "");

  if (g_failures == 0) {
    std::cout << "acceptance: all criteria passed" << std::endl;
    return 0;
  }
  std::cout << "acceptance: " << g_failures << " check(s) failed" << std::endl;
  return 1;
}
