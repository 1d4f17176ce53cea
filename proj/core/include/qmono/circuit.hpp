#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmono {

enum class GateOp { kAdd, kMul };

/// Reference to a node: either a variable (terminal) or a gate, by index
/// into the owning circuit's tables.
struct NodeRef {
  enum class Kind { kVariable, kGate };
  Kind kind = Kind::kVariable;
  std::size_t index = 0;

  static NodeRef variable(std::size_t i) { return {Kind::kVariable, i}; }
  static NodeRef gate(std::size_t i) { return {Kind::kGate, i}; }
  bool is_variable() const noexcept { return kind == Kind::kVariable; }
  bool is_gate() const noexcept { return kind == Kind::kGate; }

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

struct Gate {
  std::string name;
  GateOp op = GateOp::kAdd;
  std::vector<NodeRef> inputs;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// An arithmetic circuit: + gates of fan-in >= 2, x gates of fan-in exactly
/// 2, variables as the only terminals, and a single output. Gates only refer
/// to variables or to earlier gates, so declaration order is topological.
///
/// Circuits are built through CircuitBuilder or parse(); a constructed
/// Circuit always satisfies its invariants.
class Circuit {
 public:
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  NodeRef output() const noexcept { return output_; }

  /// Size s(n): the number of gates (terminals are not counted).
  std::size_t size() const noexcept { return gates_.size(); }

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::optional<std::size_t> find_variable(std::string_view name) const;
  std::optional<std::size_t> find_gate(std::string_view name) const;
  const std::string& node_name(NodeRef ref) const;

  /// Number of references to each node: uses by gate inputs plus one for
  /// the output reference.
  std::vector<std::size_t> gate_fanout() const;
  std::vector<std::size_t> variable_fanout() const;

  /// Gates reachable from the output, as a mask over gate indices.
  std::vector<bool> reachable_gates() const;

  /// Structural equality ignores the metadata name.
  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.variables_ == b.variables_ && a.gates_ == b.gates_ &&
           a.output_ == b.output_;
  }

 private:
  friend class CircuitBuilder;

  std::vector<std::string> variables_;
  std::vector<Gate> gates_;
  NodeRef output_;
  std::string name_;
};

/// Incremental construction with validation of every invariant.
class CircuitBuilder {
 public:
  NodeRef add_variable(std::string name);
  NodeRef add_gate(std::string name, GateOp op, std::vector<NodeRef> inputs);
  void set_output(NodeRef ref);

  /// Resolves a previously declared variable or gate name.
  std::optional<NodeRef> lookup(std::string_view name) const;
  bool has_name(std::string_view name) const;

  /// Throws std::logic_error if no output was set.
  Circuit build() &&;

 private:
  void claim_name(const std::string& name);

  Circuit circuit_;
  std::map<std::string, NodeRef, std::less<>> names_;
  bool has_output_ = false;
};

/// Generates fresh names that do not collide with a set of taken names.
class NameAllocator {
 public:
  explicit NameAllocator(const Circuit& c);
  NameAllocator() = default;

  void reserve(const std::string& name) { taken_.emplace(name, 0); }
  /// `stem` if free, otherwise `stem_2`, `stem_3`, ...
  std::string fresh(const std::string& stem);
  /// `prefix<i>` for a prefix guaranteed to avoid every taken name.
  std::string numbered(const std::string& prefix, std::size_t i);

 private:
  std::map<std::string, int, std::less<>> taken_;
  std::map<std::string, std::string, std::less<>> safe_prefix_;
};

/// Parses the line-oriented circuit DSL:
///   var NAME+ | gate NAME (ADD|MUL) REF REF+ | out REF     ('#' comments)
/// Throws ParseError with 1-based line/column on any violation.
Circuit parse(std::string_view text, std::string name = {});

/// Canonical DSL text: one `var` line (if any), gates in topological order,
/// then `out`. parse(serialize(c)) == c.
std::string serialize(const Circuit& c);

struct TreeReport {
  bool is_tree_like = true;
  /// Names of gates with fan-out > 1.
  std::vector<std::string> offending_nodes;
};

/// Every gate must have fan-out at most one; terminals are unrestricted.
TreeReport check_tree_like(const Circuit& c);

/// Value domain for evaluate().
template <typename T>
struct Domain {
  std::function<T()> zero;
  std::function<T(const T&, const T&)> add;
  std::function<T(const T&, const T&)> mul;
};

/// Bottom-up evaluation with one value per reachable gate. `values[i]` is
/// the value of variable i.
template <typename T>
T evaluate(const Circuit& c, std::span<const T> values, const Domain<T>& domain) {
  if (values.size() != c.variables().size()) {
    throw std::invalid_argument("assignment size does not match variable count");
  }
  const auto reachable = c.reachable_gates();
  std::vector<std::optional<T>> memo(c.gates().size());
  auto value_of = [&](NodeRef r) -> const T& {
    return r.is_variable() ? values[r.index] : *memo[r.index];
  };
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    if (!reachable[g]) continue;
    const Gate& gate = c.gates()[g];
    if (gate.op == GateOp::kMul) {
      memo[g] = domain.mul(value_of(gate.inputs[0]), value_of(gate.inputs[1]));
    } else {
      T acc = domain.zero();
      for (const auto& in : gate.inputs) acc = domain.add(acc, value_of(in));
      memo[g] = std::move(acc);
    }
  }
  return value_of(c.output());
}

/// Name-keyed overload. Throws std::invalid_argument naming the first
/// variable missing from the assignment.
template <typename T>
T evaluate(const Circuit& c, const std::map<std::string, T, std::less<>>& assignment,
           const Domain<T>& domain) {
  std::vector<T> values;
  values.reserve(c.variables().size());
  for (const auto& v : c.variables()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw std::invalid_argument("no value assigned to variable '" + v + "'");
    }
    values.push_back(it->second);
  }
  return evaluate<T>(c, std::span<const T>(values), domain);
}

}  // namespace qmono
