#include "qmono/reconstruct.hpp"

#include <functional>

#include "qmono/errors.hpp"

namespace qmono {

namespace {

void require_tree_like(const Circuit& c) {
  const auto report = check_tree_like(c);
  if (report.is_tree_like) return;
  std::string msg = "circuit is not tree-like; gates with fan-out > 1:";
  for (const auto& n : report.offending_nodes) msg += " " + n;
  throw NotTreeLikeError(msg);
}

}  // namespace

std::size_t ReconstructedCircuit::occurrence_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [name, copies] : x_occurrences) n += copies.size();
  return n;
}

std::vector<std::string> ReconstructedCircuit::labels() const {
  std::vector<std::string> out;
  out.reserve(roles.size());
  for (const auto& r : roles) {
    out.push_back(r.is_z ? z_vars[r.z_index].name : x_variables[r.variable]);
  }
  return out;
}

Circuit eliminate_plus_chains(const Circuit& c) {
  require_tree_like(c);
  CircuitBuilder b;
  for (const auto& v : c.variables()) b.add_variable(v);

  std::vector<std::optional<NodeRef>> emitted(c.gates().size());
  std::function<NodeRef(NodeRef)> emit;
  std::function<void(const Gate&, std::vector<NodeRef>&)> flatten_into;

  flatten_into = [&](const Gate& add, std::vector<NodeRef>& out) {
    for (const auto& in : add.inputs) {
      if (in.is_gate() && c.gates()[in.index].op == GateOp::kAdd) {
        flatten_into(c.gates()[in.index], out);
      } else {
        out.push_back(emit(in));
      }
    }
  };
  emit = [&](NodeRef r) -> NodeRef {
    if (r.is_variable()) return r;
    if (emitted[r.index]) return *emitted[r.index];
    const Gate& g = c.gates()[r.index];
    std::vector<NodeRef> inputs;
    if (g.op == GateOp::kAdd) {
      flatten_into(g, inputs);
    } else {
      for (const auto& in : g.inputs) inputs.push_back(emit(in));
    }
    const NodeRef out = b.add_gate(g.name, g.op, std::move(inputs));
    emitted[r.index] = out;
    return out;
  };

  b.set_output(emit(c.output()));
  Circuit out = std::move(b).build();
  out.set_name(c.name());
  return out;
}

TerminalCopies duplicate_terminals(const Circuit& c) {
  require_tree_like(c);
  const auto reachable = c.reachable_gates();

  // Occurrences of each variable, in gate order then output.
  std::vector<std::size_t> uses(c.variables().size(), 0);
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    if (!reachable[g]) continue;
    for (const auto& in : c.gates()[g].inputs) {
      if (in.is_variable()) ++uses[in.index];
    }
  }
  if (c.output().is_variable()) ++uses[c.output().index];

  NameAllocator names(c);
  CircuitBuilder b;
  TerminalCopies result{Circuit{}, {}};
  std::vector<std::vector<NodeRef>> copies(c.variables().size());
  for (std::size_t v = 0; v < c.variables().size(); ++v) {
    const std::string& x = c.variables()[v];
    if (uses[v] == 1) {
      copies[v].push_back(b.add_variable(x));
      result.origin.push_back(x);
      continue;
    }
    for (std::size_t j = 1; j <= uses[v]; ++j) {
      copies[v].push_back(b.add_variable(names.fresh(x + "__" + std::to_string(j))));
      result.origin.push_back(x);
    }
  }

  std::vector<std::size_t> next(c.variables().size(), 0);
  auto take = [&](NodeRef r) { return copies[r.index][next[r.index]++]; };

  std::vector<std::optional<NodeRef>> mapped(c.gates().size());
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    if (!reachable[g]) continue;
    const Gate& gate = c.gates()[g];
    std::vector<NodeRef> inputs;
    for (const auto& in : gate.inputs) {
      inputs.push_back(in.is_variable() ? take(in) : *mapped[in.index]);
    }
    mapped[g] = b.add_gate(gate.name, gate.op, std::move(inputs));
  }
  b.set_output(c.output().is_variable() ? take(c.output())
                                        : *mapped[c.output().index]);
  result.circuit = std::move(b).build();
  result.circuit.set_name(c.name());
  return result;
}

ReconstructedCircuit add_z_variables(const TerminalCopies& tc) {
  const Circuit& c = tc.circuit;
  if (tc.origin.size() != c.variables().size()) {
    throw std::invalid_argument("terminal origin table does not match circuit");
  }
  const auto var_fanout = c.variable_fanout();
  for (std::size_t v = 0; v < var_fanout.size(); ++v) {
    if (var_fanout[v] > 1) {
      throw std::invalid_argument("terminal '" + c.variables()[v] +
                                  "' has fan-out > 1; duplicate terminals first");
    }
  }
  require_tree_like(c);

  ReconstructedCircuit rc;
  NameAllocator names(c);

  // Pre-order numbering of z sites.
  std::vector<std::optional<std::size_t>> gate_z(c.gates().size());
  std::vector<std::optional<std::size_t>> var_z(c.variables().size());
  std::function<void(NodeRef, const Gate*)> number = [&](NodeRef r, const Gate* parent) {
    if (r.is_variable()) {
      if (parent != nullptr && parent->op == GateOp::kAdd) {
        var_z[r.index] = rc.z_vars.size();
        rc.z_vars.push_back({"", ZProvenance::Site::kTerminalEdge,
                             c.variables()[r.index], parent->name});
      }
      return;
    }
    const Gate& g = c.gates()[r.index];
    if (g.op == GateOp::kMul) {
      gate_z[r.index] = rc.z_vars.size();
      rc.z_vars.push_back({"", ZProvenance::Site::kMulGate, g.name, ""});
    }
    for (const auto& in : g.inputs) number(in, &g);
  };
  number(c.output(), nullptr);
  for (std::size_t i = 0; i < rc.z_vars.size(); ++i) {
    rc.z_vars[i].name = names.numbered("z", i + 1);
  }

  CircuitBuilder b;
  std::map<std::string, std::size_t> x_index;
  for (std::size_t v = 0; v < c.variables().size(); ++v) {
    const std::string& origin = tc.origin[v];
    auto [it, inserted] = x_index.emplace(origin, rc.x_variables.size());
    if (inserted) rc.x_variables.push_back(origin);
    auto& occ = rc.x_occurrences[origin];
    rc.roles.push_back(TerminalRole{false, it->second, occ.size(), 0});
    occ.push_back(c.variables()[v]);
    b.add_variable(c.variables()[v]);
  }
  std::vector<NodeRef> z_refs;
  for (std::size_t i = 0; i < rc.z_vars.size(); ++i) {
    z_refs.push_back(b.add_variable(rc.z_vars[i].name));
    rc.roles.push_back(TerminalRole{true, 0, 0, i});
  }

  std::function<NodeRef(NodeRef)> emit = [&](NodeRef r) -> NodeRef {
    if (r.is_variable()) {
      if (var_z[r.index]) {
        return b.add_gate(names.fresh(c.variables()[r.index] + "_z"), GateOp::kMul,
                          {r, z_refs[*var_z[r.index]]});
      }
      return r;
    }
    const Gate& g = c.gates()[r.index];
    std::vector<NodeRef> inputs;
    for (const auto& in : g.inputs) inputs.push_back(emit(in));
    const NodeRef out = b.add_gate(g.name, g.op, std::move(inputs));
    if (gate_z[r.index]) {
      return b.add_gate(names.fresh(g.name + "_z"), GateOp::kMul,
                        {out, z_refs[*gate_z[r.index]]});
    }
    return out;
  };
  b.set_output(emit(c.output()));
  rc.circuit = std::move(b).build();
  rc.circuit.set_name(c.name());
  return rc;
}

ReconstructedCircuit reconstruct(const Circuit& c) {
  return add_z_variables(duplicate_terminals(eliminate_plus_chains(c)));
}

}  // namespace qmono
