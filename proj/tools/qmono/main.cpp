#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmono/circuit.hpp"
#include "qmono/errors.hpp"
#include "qmono/oracle.hpp"
#include "qmono/randqmt.hpp"
#include "qmono/reconstruct.hpp"
#include "qmono/selftest.hpp"
#include "qmono/substitution.hpp"
#include "qmono/transform.hpp"
#include "report.hpp"

namespace {

using namespace qmono;
using nlohmann::json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;
constexpr int kExitPrecondition = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string circuit;
  unsigned q = 0;
  unsigned k = 0;
  std::optional<std::uint64_t> restarts;
  std::optional<double> confidence;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> loop_budget;
  std::optional<unsigned> min_degree;
  unsigned jobs = 1;
  bool json = false;
  bool check_precondition = false;
  bool dump_plan = false;
  std::size_t max_terms = kDefaultMaxTerms;
  std::string evaluator = "direct";
  std::string output;
  std::string provenance;
};

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read circuit file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str(), path);
  } catch (const ParseError& e) {
    throw UsageError(path + ": parse error: " + e.what());
  }
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("QMONO_SEED")) {
    try {
      std::size_t used = 0;
      const std::uint64_t s = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return s;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("QMONO_SEED is not a 64-bit integer: '") + env + "'");
  }
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) ^ rd();
}

void require_qk(const Options& o) {
  if (o.q < 2) throw UsageError("-q must be >= 2");
  if (o.k < 1) throw UsageError("-k must be >= 1");
}

ExpandedPolynomial expand_original(const Circuit& c, const Options& o) {
  ExpandOptions eo;
  eo.max_terms = o.max_terms;
  return expand(c, eo);
}

int cmd_test(const Options& o) {
  require_qk(o);
  Circuit c = load_circuit(o.circuit);
  if (o.min_degree && *o.min_degree < o.k) {
    if (*o.min_degree < 1) throw UsageError("--min-degree must be >= 1");
    c = pad_degree(c, o.k, *o.min_degree);
  }
  if (o.check_precondition) {
    const auto poly = expand_original(c, o);
    if (auto low = min_q_monomial_degree(poly, o.q); low && *low < o.k) {
      std::cerr << "qmono: precondition violated: the polynomial has a " << o.q
                << "-monomial of degree " << *low << " < k = " << o.k
                << " (rerun with --min-degree " << *low << " to pad)\n";
      return kExitPrecondition;
    }
  }

  RandQMTConfig cfg;
  cfg.q = o.q;
  cfg.k = o.k;
  cfg.loop_budget = o.loop_budget;
  cfg.seed = resolve_seed(o);
  cfg.jobs = o.jobs;
  if (o.evaluator == "transform") cfg.evaluator = Evaluator::kTransform;
  cfg.restarts = o.restarts ? *o.restarts : restarts_for_confidence(o.confidence.value_or(1e-3));
  cfg.validate();

  if (o.dump_plan) {
    const ReconstructedCircuit rc = reconstruct(c);
    std::mt19937_64 rng(iteration_seed(cfg.seed, 0, 0));
    const auto sample = sample_iteration(rc, cfg.q, cfg.k, field_for_degree(cfg.k), rng);
    std::cerr << cli::to_json(sample.plan, rc).dump(2) << '\n';
  }

  const RandQMTReport report = run(c, cfg);
  if (o.json) {
    std::cout << cli::to_json(report).dump() << '\n';
  } else {
    std::cout << (report.decision ? "yes" : "no") << '\n'
              << "iterations_executed: " << report.iterations_executed << '\n';
    if (report.decision) {
      std::cout << "first_hit_iteration: " << *report.first_hit_iteration << '\n'
                << "restart_index: " << *report.restart_index << '\n';
    }
    std::cout << "field_degree: " << report.field_degree << '\n'
              << "restarts: " << cfg.restarts << '\n'
              << "seed: " << cfg.seed << '\n'
              << "wall_time: " << report.wall_time.count() << "s\n";
  }
  return report.decision ? kExitYes : kExitNo;
}

int cmd_oracle(const Options& o) {
  require_qk(o);
  const Circuit c = load_circuit(o.circuit);
  const auto poly = expand_original(c, o);
  const auto witness = q_monomial_witness(poly, o.q, o.k);
  const auto low = min_q_monomial_degree(poly, o.q);
  if (o.json) {
    json j;
    j["decision"] = witness ? "yes" : "no";
    j["witness"] = witness ? json(witness->to_string()) : json(nullptr);
    j["coefficient"] = witness ? json(coefficient_of(poly, *witness).str()) : json(nullptr);
    j["min_q_monomial_degree"] = low ? json(*low) : json(nullptr);
    std::cout << j.dump() << '\n';
  } else if (witness) {
    std::cout << "yes\n"
              << "witness: " << coefficient_of(poly, *witness) << '*' << witness->to_string()
              << '\n';
  } else {
    std::cout << "no\n";
  }
  if (!o.json && low && *low < o.k) {
    std::cerr << "qmono: note: minimum " << o.q << "-monomial degree is " << *low << '\n';
  }
  return witness ? kExitYes : kExitNo;
}

int cmd_expand(const Options& o) {
  const Circuit c = load_circuit(o.circuit);
  const auto poly = expand_original(c, o);
  if (o.json) {
    std::cout << cli::to_json(poly).dump() << '\n';
  } else if (poly.is_zero()) {
    std::cout << "0\n";
  } else {
    std::cout << poly.to_string();
  }
  return 0;
}

int cmd_reconstruct(const Options& o) {
  const Circuit c = load_circuit(o.circuit);
  const ReconstructedCircuit rc = reconstruct(c);
  const std::string text = serialize(rc.circuit);
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!(out << text)) throw UsageError("cannot write '" + o.output + "'");
  }
  if (!o.provenance.empty()) {
    std::ofstream out(o.provenance);
    if (!(out << cli::provenance_json(rc).dump(2))) {
      throw UsageError("cannot write '" + o.provenance + "'");
    }
  }
  return 0;
}

int cmd_selftest(const Options& o) {
  SelfTestOptions so;
  if (o.seed) so.seed = *o.seed;
  const auto results = run_selftest(so);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  if (o.json) {
    std::cout << cli::to_json(results).dump() << '\n';
  } else {
    for (const auto& r : results) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized q-monomial testing for tree-like arithmetic circuits"};
  app.require_subcommand(1);
  Options o;

  auto add_circuit = [&](CLI::App* sub) {
    sub->add_option("-c,--circuit", o.circuit, "Circuit file (.circ)")->required();
  };
  auto add_qk = [&](CLI::App* sub) {
    sub->add_option("-q", o.q, "Exponent bound q >= 2")->required();
    sub->add_option("-k", o.k, "Target degree k >= 1")->required();
  };
  auto add_max_terms = [&](CLI::App* sub) {
    sub->add_option("--max-terms", o.max_terms, "Term cap for exact expansion")
        ->check(CLI::PositiveNumber);
  };

  auto* test = app.add_subcommand("test", "Run the randomized test");
  add_circuit(test);
  add_qk(test);
  auto* restarts = test->add_option("--restarts", o.restarts, "Independent full runs")
                       ->check(CLI::PositiveNumber);
  test->add_option("--confidence", o.confidence,
                   "Target failure probability; sets --restarts (default 1e-3)")
      ->check(CLI::Range(0.0, 1.0))
      ->excludes(restarts);
  test->add_option("--seed", o.seed, "Master seed (fallback: QMONO_SEED)");
  test->add_option("--loop-budget", o.loop_budget, "Iterations per run")
      ->check(CLI::PositiveNumber);
  test->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  test->add_flag("--json", o.json, "JSON report");
  test->add_flag("--check-precondition", o.check_precondition,
                 "Expand exactly and exit 3 if a q-monomial of degree < k exists");
  test->add_option("--min-degree", o.min_degree,
                   "Known minimum q-monomial degree; pads the circuit up to k");
  test->add_flag("--dump-plan", o.dump_plan, "Print the first replacement plan to stderr");
  test->add_option("--evaluator", o.evaluator, "Group-algebra evaluator")
      ->check(CLI::IsMember({"transform", "direct"}));
  add_max_terms(test);

  auto* oracle = app.add_subcommand("oracle", "Exact answer by full expansion");
  add_circuit(oracle);
  add_qk(oracle);
  oracle->add_flag("--json", o.json, "JSON output");
  add_max_terms(oracle);

  auto* expand_cmd = app.add_subcommand("expand", "Print the sum-product expansion");
  add_circuit(expand_cmd);
  expand_cmd->add_flag("--json", o.json, "JSON output");
  add_max_terms(expand_cmd);

  auto* recon = app.add_subcommand("reconstruct", "Print the reconstructed circuit");
  add_circuit(recon);
  recon->add_option("-o,--output", o.output, "Write the circuit here instead of stdout");
  recon->add_option("--provenance", o.provenance, "Write z-variable provenance JSON here");

  auto* self = app.add_subcommand("selftest", "Check the algebraic identities");
  self->add_option("--seed", o.seed, "Seed for the Monte Carlo checks");
  self->add_flag("--json", o.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*test) return cmd_test(o);
    if (*oracle) return cmd_oracle(o);
    if (*expand_cmd) return cmd_expand(o);
    if (*recon) return cmd_reconstruct(o);
    return cmd_selftest(o);
  } catch (const NotTreeLikeError& e) {
    std::cerr << "qmono: " << e.what() << '\n';
  } catch (const OracleLimitError& e) {
    std::cerr << "qmono: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "qmono: error: " << e.what() << '\n';
  }
  return kExitError;
}
