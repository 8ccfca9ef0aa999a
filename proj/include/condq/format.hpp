// Text rendering and parsing for the CLI.
//
// Matrix file format: one row per line, entries as re+imj pairs separated by
// whitespace (e.g. "0.707106781187+0j 0-1j"). Reals render as exact integers
// when within 1e-12 of one, else with 12 significant digits, so a printed
// matrix reparses to the same unitary within 1e-12.

#pragma once

#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "condq/locc.hpp"
#include "condq/statevec.hpp"

namespace condq {

inline std::string format_real(double x) {
  const double rounded = std::round(x);
  if (std::abs(x - rounded) < 1e-12) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", rounded == 0.0 ? 0.0 : rounded);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// re+imj, always with both parts: "1+0j", "0-1j", "0.5-0.5j".
inline std::string format_amplitude(const Amplitude& a) {
  std::string s = format_real(a.real());
  const std::string im = format_real(a.imag());
  if (im.empty() || im[0] != '-') s += '+';
  s += im;
  s += 'j';
  return s;
}

inline Amplitude parse_amplitude(const std::string& token) {
  if (token.size() < 2 || token.back() != 'j') {
    throw std::invalid_argument("bad amplitude '" + token + "': expected re+imj");
  }
  const std::string body = token.substr(0, token.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    throw std::invalid_argument("bad amplitude '" + token + "': expected re+imj");
  }
  const auto parse_part = [&token](const std::string& part) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad amplitude '" + token + "': unparseable number");
    }
    if (used != part.size()) {
      throw std::invalid_argument("bad amplitude '" + token + "': trailing characters");
    }
    return v;
  };
  return {parse_part(body.substr(0, split)), parse_part(body.substr(split))};
}

inline std::string format_matrix(const Unitary& u) {
  std::string out;
  for (std::size_t r = 0; r < u.dim(); ++r) {
    for (std::size_t c = 0; c < u.dim(); ++c) {
      if (c) out += ' ';
      out += format_amplitude(u.at(r, c));
    }
    out += '\n';
  }
  return out;
}

/// Parse a square 2^k x 2^k matrix; unitarity is validated by the Unitary
/// constructor (NonUnitaryError on failure).
inline Unitary parse_matrix(std::istream& in) {
  std::vector<std::vector<Amplitude>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<Amplitude> row;
    std::string token;
    while (ls >> token) row.push_back(parse_amplitude(token));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const std::size_t dim = rows.size();
  int arity = 0;
  while ((std::size_t{1} << (arity + 1)) <= dim) ++arity;
  if (dim == 0 || (std::size_t{1} << arity) != dim) {
    throw std::invalid_argument("matrix must have a power-of-two number of rows");
  }
  std::vector<Amplitude> entries;
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::invalid_argument("matrix rows must have as many entries as rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Unitary(arity, std::move(entries));
}

inline std::string format_bits(std::span<const int> bits) {
  std::string s;
  for (int b : bits) s += static_cast<char>('0' + b);
  return s;
}

inline std::string format_ket(std::size_t index, int n_qubits) {
  const auto bits = index_bits(index, n_qubits);
  return "|" + format_bits(bits) + ">";
}

/// "|01>", "-|10>", "0.707106781187|00> + 0.707106781187|11>", ...
inline std::string format_state(const StateVector& s) {
  std::string out;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const Amplitude a = s.amp(i);
    if (std::abs(a) < 1e-12) continue;
    std::string coeff;
    if (std::abs(a - Amplitude(1.0)) < 1e-12) {
      coeff = "";
    } else if (std::abs(a + Amplitude(1.0)) < 1e-12) {
      coeff = "-";
    } else if (std::abs(a.imag()) < 1e-12) {
      coeff = format_real(a.real());
    } else {
      coeff = "(" + format_amplitude(a) + ")";
    }
    if (!out.empty()) out += " + ";
    out += coeff + format_ket(i, s.n_qubits());
  }
  if (out.empty()) out = "0";
  return out;
}

inline std::string format_ledger(const ResourceLedger& l) {
  return "ebits=" + std::to_string(l.ebits_consumed) + " cbits=" + std::to_string(l.cbits_sent()) +
         " (alice->bob=" + std::to_string(l.cbits_alice_to_bob) +
         ", bob->alice=" + std::to_string(l.cbits_bob_to_alice) + ")";
}

/// One transcript event as a stable single-line record.
inline std::string to_line(const TranscriptEvent& ev) {
  std::string line;
  switch (ev.kind) {
    case TranscriptEvent::Kind::BellPair:
      line = "bell-pair qubits=" + std::to_string(ev.qubits[0]) + "," + std::to_string(ev.qubits[1]);
      break;
    case TranscriptEvent::Kind::Gate: {
      line = "gate party=" + std::string(party_name(*ev.party)) + " name=" + ev.gate_name + " qubits=";
      for (std::size_t i = 0; i < ev.qubits.size(); ++i) {
        if (i) line += ',';
        line += std::to_string(ev.qubits[i]);
      }
      break;
    }
    case TranscriptEvent::Kind::Measure:
      line = "measure party=" + std::string(party_name(*ev.party)) + " qubit=" + std::to_string(ev.qubits[0]) +
             " bit=" + std::to_string(*ev.bit) + " p=" + format_real(*ev.probability);
      break;
    case TranscriptEvent::Kind::ClassicalBit:
      line = "cbit from=" + std::string(party_name(*ev.party)) + " bit=" + std::to_string(*ev.bit);
      break;
  }
  line += " ledger[ebits=" + std::to_string(ev.ledger.ebits_consumed) +
          " a2b=" + std::to_string(ev.ledger.cbits_alice_to_bob) +
          " b2a=" + std::to_string(ev.ledger.cbits_bob_to_alice) + "]";
  return line;
}

}  // namespace condq
