#include "qmono/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qmono/errors.hpp"

namespace qmono {

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_valid_name(std::string_view s) {
  if (s.empty() || !is_name_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_name_char);
}

bool is_reserved(std::string_view s) {
  return s == "var" || s == "gate" || s == "out" || s == "ADD" || s == "MUL";
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != '#' &&
           !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

}  // namespace

std::optional<std::size_t> Circuit::find_variable(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Circuit::find_gate(std::string_view name) const {
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].name == name) return i;
  }
  return std::nullopt;
}

const std::string& Circuit::node_name(NodeRef ref) const {
  return ref.is_variable() ? variables_.at(ref.index) : gates_.at(ref.index).name;
}

std::vector<std::size_t> Circuit::gate_fanout() const {
  std::vector<std::size_t> out(gates_.size(), 0);
  for (const auto& g : gates_) {
    for (const auto& in : g.inputs) {
      if (in.is_gate()) ++out[in.index];
    }
  }
  if (output_.is_gate()) ++out[output_.index];
  return out;
}

std::vector<std::size_t> Circuit::variable_fanout() const {
  std::vector<std::size_t> out(variables_.size(), 0);
  for (const auto& g : gates_) {
    for (const auto& in : g.inputs) {
      if (in.is_variable()) ++out[in.index];
    }
  }
  if (output_.is_variable()) ++out[output_.index];
  return out;
}

std::vector<bool> Circuit::reachable_gates() const {
  std::vector<bool> seen(gates_.size(), false);
  if (!output_.is_gate()) return seen;
  seen[output_.index] = true;
  // Inputs always precede their consumer, so one reverse sweep suffices.
  for (std::size_t g = gates_.size(); g-- > 0;) {
    if (!seen[g]) continue;
    for (const auto& in : gates_[g].inputs) {
      if (in.is_gate()) seen[in.index] = true;
    }
  }
  return seen;
}

void CircuitBuilder::claim_name(const std::string& name) {
  if (!is_valid_name(name) || is_reserved(name)) {
    throw std::invalid_argument("invalid node name '" + name + "'");
  }
  if (names_.contains(name)) {
    throw std::invalid_argument("duplicate node name '" + name + "'");
  }
}

NodeRef CircuitBuilder::add_variable(std::string name) {
  claim_name(name);
  const auto ref = NodeRef::variable(circuit_.variables_.size());
  names_.emplace(name, ref);
  circuit_.variables_.push_back(std::move(name));
  return ref;
}

NodeRef CircuitBuilder::add_gate(std::string name, GateOp op,
                                 std::vector<NodeRef> inputs) {
  claim_name(name);
  if (op == GateOp::kMul && inputs.size() != 2) {
    throw std::invalid_argument("MUL gate '" + name +
                                "' must have exactly 2 inputs");
  }
  if (op == GateOp::kAdd && inputs.size() < 2) {
    throw std::invalid_argument("ADD gate '" + name +
                                "' must have at least 2 inputs");
  }
  for (const auto& in : inputs) {
    const std::size_t bound =
        in.is_variable() ? circuit_.variables_.size() : circuit_.gates_.size();
    if (in.index >= bound) {
      throw std::invalid_argument("gate '" + name +
                                  "' refers to an undeclared node");
    }
  }
  const auto ref = NodeRef::gate(circuit_.gates_.size());
  names_.emplace(name, ref);
  circuit_.gates_.push_back(Gate{std::move(name), op, std::move(inputs)});
  return ref;
}

void CircuitBuilder::set_output(NodeRef ref) {
  if (has_output_) throw std::invalid_argument("circuit already has an output");
  const std::size_t bound =
      ref.is_variable() ? circuit_.variables_.size() : circuit_.gates_.size();
  if (ref.index >= bound) throw std::invalid_argument("output refers to an undeclared node");
  circuit_.output_ = ref;
  has_output_ = true;
}

std::optional<NodeRef> CircuitBuilder::lookup(std::string_view name) const {
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

bool CircuitBuilder::has_name(std::string_view name) const {
  return names_.find(name) != names_.end();
}

Circuit CircuitBuilder::build() && {
  if (!has_output_) throw std::logic_error("circuit has no output");
  return std::move(circuit_);
}

NameAllocator::NameAllocator(const Circuit& c) {
  for (const auto& v : c.variables()) reserve(v);
  for (const auto& g : c.gates()) reserve(g.name);
}

std::string NameAllocator::fresh(const std::string& stem) {
  if (!taken_.contains(stem) && is_valid_name(stem) && !is_reserved(stem)) {
    reserve(stem);
    return stem;
  }
  for (int i = 2;; ++i) {
    std::string candidate = stem + "_" + std::to_string(i);
    if (!taken_.contains(candidate)) {
      reserve(candidate);
      return candidate;
    }
  }
}

std::string NameAllocator::numbered(const std::string& prefix, std::size_t i) {
  auto it = safe_prefix_.find(prefix);
  if (it == safe_prefix_.end()) {
    std::string p = prefix;
    auto clashes = [&](const std::string& cand) {
      for (const auto& [name, unused] : taken_) {
        if (name.size() > cand.size() && name.starts_with(cand) &&
            std::all_of(name.begin() + static_cast<long>(cand.size()), name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
          return true;
        }
      }
      return false;
    };
    while (clashes(p)) p += "_";
    it = safe_prefix_.emplace(prefix, p).first;
  }
  std::string name = it->second + std::to_string(i);
  reserve(name);
  return name;
}

Circuit parse(std::string_view text, std::string name) {
  // Pre-pass: where each name is declared, so that references to later
  // gates are reported as cycles rather than as unknown names.
  std::map<std::string, std::size_t, std::less<>> declared_on;
  {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++line_no;
      const auto tokens = tokenize(text.substr(pos, end - pos));
      if (tokens.size() >= 2 && tokens[0].text == "gate") {
        declared_on.emplace(std::string(tokens[1].text), line_no);
      }
      pos = end + 1;
    }
  }

  CircuitBuilder builder;
  bool seen_out = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t last_line_len = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    last_line_len = line.size();
    pos = end + 1;

    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const auto& head = tokens[0];

    auto fail = [&](const Token& at, const std::string& msg) -> void {
      throw ParseError(line_no, at.column, msg);
    };
    auto check_new_name = [&](const Token& t) {
      if (!is_valid_name(t.text)) {
        fail(t, "invalid name '" + std::string(t.text) + "'");
      }
      if (is_reserved(t.text)) {
        fail(t, "'" + std::string(t.text) + "' is a reserved word");
      }
      if (builder.has_name(t.text)) {
        fail(t, "duplicate declaration of '" + std::string(t.text) + "'");
      }
    };
    auto resolve = [&](const Token& t, std::string_view current_gate) -> NodeRef {
      if (auto ref = builder.lookup(t.text)) return *ref;
      if (t.text == current_gate) {
        fail(t, "cycle: gate '" + std::string(t.text) + "' refers to itself");
      }
      if (declared_on.contains(t.text)) {
        fail(t, "cycle or forward reference: '" + std::string(t.text) +
                    "' is declared later");
      }
      fail(t, "reference to undeclared name '" + std::string(t.text) + "'");
      return {};
    };

    if (seen_out) fail(head, "content after the 'out' line");

    if (head.text == "var") {
      if (tokens.size() < 2) fail(head, "'var' needs at least one name");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        check_new_name(tokens[i]);
        builder.add_variable(std::string(tokens[i].text));
      }
    } else if (head.text == "gate") {
      if (tokens.size() < 3) fail(head, "expected 'gate NAME ADD|MUL REF REF+'");
      check_new_name(tokens[1]);
      GateOp op{};
      if (tokens[2].text == "ADD") {
        op = GateOp::kAdd;
      } else if (tokens[2].text == "MUL") {
        op = GateOp::kMul;
      } else {
        fail(tokens[2], "expected ADD or MUL, got '" + std::string(tokens[2].text) + "'");
      }
      const std::size_t arity = tokens.size() - 3;
      if (op == GateOp::kMul && arity != 2) {
        fail(tokens[2], "MUL takes exactly 2 inputs, got " + std::to_string(arity));
      }
      if (op == GateOp::kAdd && arity < 2) {
        fail(tokens[2], "ADD takes at least 2 inputs, got " + std::to_string(arity));
      }
      std::vector<NodeRef> inputs;
      for (std::size_t i = 3; i < tokens.size(); ++i) {
        inputs.push_back(resolve(tokens[i], tokens[1].text));
      }
      builder.add_gate(std::string(tokens[1].text), op, std::move(inputs));
    } else if (head.text == "out") {
      if (tokens.size() != 2) fail(head, "expected 'out REF'");
      builder.set_output(resolve(tokens[1], {}));
      seen_out = true;
    } else {
      fail(head, "unknown statement '" + std::string(head.text) + "'");
    }
  }
  if (!seen_out) {
    throw ParseError(line_no, last_line_len + 1, "missing 'out' line");
  }
  Circuit c = std::move(builder).build();
  c.set_name(std::move(name));
  return c;
}

std::string serialize(const Circuit& c) {
  std::ostringstream os;
  if (!c.variables().empty()) {
    os << "var";
    for (const auto& v : c.variables()) os << ' ' << v;
    os << '\n';
  }
  for (const auto& g : c.gates()) {
    os << "gate " << g.name << (g.op == GateOp::kAdd ? " ADD" : " MUL");
    for (const auto& in : g.inputs) os << ' ' << c.node_name(in);
    os << '\n';
  }
  os << "out " << c.node_name(c.output()) << '\n';
  return os.str();
}

TreeReport check_tree_like(const Circuit& c) {
  TreeReport report;
  const auto fanout = c.gate_fanout();
  for (std::size_t g = 0; g < fanout.size(); ++g) {
    if (fanout[g] > 1) report.offending_nodes.push_back(c.gates()[g].name);
  }
  report.is_tree_like = report.offending_nodes.empty();
  return report;
}

}  // namespace qmono
