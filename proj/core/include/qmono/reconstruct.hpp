#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qmono/circuit.hpp"

namespace qmono {

/// Result of duplicate_terminals(): the circuit plus, for each of its
/// variables, the name of the original variable it copies.
struct TerminalCopies {
  Circuit circuit;
  std::vector<std::string> origin;
};

/// Where a z-variable was attached.
struct ZProvenance {
  enum class Site { kMulGate, kTerminalEdge };
  std::string name;
  Site site = Site::kMulGate;
  /// The x gate (for kMulGate) or the terminal copy (for kTerminalEdge),
  /// named as in the duplicated circuit C*.
  std::string attached_to;
  /// The + gate that consumes the terminal (kTerminalEdge only).
  std::string consumer;
};

/// Role of each variable of the reconstructed circuit C'.
struct TerminalRole {
  bool is_z = false;
  /// For x-terminals: index into ReconstructedCircuit::x_variables and the
  /// occurrence number among that variable's copies (0-based).
  std::size_t variable = 0;
  std::size_t occurrence = 0;
  /// For z-terminals: index into z_vars.
  std::size_t z_index = 0;
};

/// C': a tree whose x-terminals are per-occurrence copies of the original
/// variables and whose z-terminals tag every x gate and every terminal that
/// feeds a + gate.
struct ReconstructedCircuit {
  Circuit circuit;
  /// Original variables that occur in C', in first-declaration order.
  std::vector<std::string> x_variables;
  /// Original variable name -> names of its terminal copies in C'.
  std::map<std::string, std::vector<std::string>> x_occurrences;
  std::vector<ZProvenance> z_vars;
  /// One entry per variable of `circuit`.
  std::vector<TerminalRole> roles;

  std::size_t h() const noexcept { return z_vars.size(); }
  std::size_t occurrence_count() const noexcept;

  /// For each variable of `circuit`: the original variable name for
  /// x-terminals, the z name for z-terminals. Feeding these to the oracle
  /// projects copies back onto their originals.
  std::vector<std::string> labels() const;
};

/// Splices + gates that feed other + gates into their consumer. Only the
/// part reachable from the output is kept. Throws NotTreeLikeError.
Circuit eliminate_plus_chains(const Circuit& c);

/// Gives every terminal occurrence its own variable so that the full graph,
/// terminals included, is a tree. A variable with a single occurrence keeps
/// its name; others become `x__1`, `x__2`, ...
TerminalCopies duplicate_terminals(const Circuit& c);

/// Multiplies a fresh z onto each x gate and onto each terminal that feeds
/// a + gate. z's are numbered in pre-order (inputs left to right).
ReconstructedCircuit add_z_variables(const TerminalCopies& c);

/// The three steps above in order. Throws NotTreeLikeError for circuits
/// that are not tree-like.
ReconstructedCircuit reconstruct(const Circuit& c);

}  // namespace qmono
