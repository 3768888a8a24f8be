#include "twcst/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twcst/approx.hpp"
#include "twcst/dp2wcst.hpp"
#include "twcst/gbst.hpp"
#include "twcst/noeq.hpp"
#include "twcst/oracle.hpp"
#include "twcst/random_instance.hpp"
#include "twcst/tree.hpp"

namespace twcst {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

// approx also reports the exact optimum up to this size
constexpr int kApproxExactLimit = 100;

// One flat record. Text and JSON render the same fields in the same order.
class Report {
 public:
  template <class T>
  Report& set(const std::string& key, T&& value) {
    fields_[key] = std::forward<T>(value);
    return *this;
  }
  Report& cost(const std::string& key, const Rational& value) {
    set(key, to_string(value));
    set(key + "_decimal", to_decimal(value, 6));
    return *this;
  }
  Report& list(const std::string& key, const std::vector<std::string>& values) {
    fields_[key] = Json::array();
    for (const auto& v : values) fields_[key].push_back(v);
    return *this;
  }

  void print(std::ostream& out, bool json) const {
    if (json) {
      out << fields_.dump(2) << "\n";
      return;
    }
    for (const auto& [key, value] : fields_.items()) {
      if (value.is_array()) {
        out << key << ":";
        if (value.empty()) out << " (none)";
        out << "\n";
        for (const auto& v : value) out << "  - " << scalar(v) << "\n";
      } else {
        out << key << ": " << scalar(value) << "\n";
      }
    }
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }
  Json fields_ = Json::object();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct Flags {
  std::string input;
  std::string ops;
  std::string tree;
  std::string dot;
  std::string klass = "2wcst";
  std::string queries = "standard";
  std::uint64_t seed = 1;
  int n = 8;
  int runs = 3;
  bool no_equality = false;
  bool json = false;
};

Instance load_instance(const Flags& f) {
  if (f.input.empty()) throw UsageError("--input is required");
  Instance inst = parse_instance(read_file(f.input));
  if (!f.ops.empty()) inst = inst.with_ops(parse_ops(f.ops));
  return inst;
}

void describe(Report& r, const std::string& command, const Instance& inst) {
  r.set("command", command);
  r.set("n", inst.n());
  r.set("ops", inst.ops().to_string());
  r.set("classes", static_cast<int>(inst.queries().size()));
}

int cmd_solve(const Flags& f, std::ostream& out) {
  Instance inst = load_instance(f);
  Report r;
  describe(r, "solve", inst);
  Tree tree;
  if (f.no_equality) {
    OpSet ops;
    if (inst.ops().contains(Op::Lt)) ops.insert(Op::Lt);
    if (inst.ops().contains(Op::Le)) ops.insert(Op::Le);
    if (ops.empty()) throw InfeasibleInstance("--no-equality leaves no operator");
    Instance reduced = inst.with_ops(ops);
    NoeqSolution s = solve_noeq(reduced);
    r.set("solver", "noeq");
    r.cost("cost", s.cost);
    tree = std::move(s.tree);
  } else {
    Solution s = solve(inst);
    r.set("solver", "dp2wcst");
    r.cost("cost", s.cost);
    r.set("perturbed_cost", to_string(s.perturbed_cost));
    tree = std::move(s.tree);
  }
  r.set("height", tree.height());
  r.set("tree", to_sexpr(tree));
  if (!f.dot.empty()) {
    write_file(f.dot, export_dot(tree));
    r.set("dot", f.dot);
  }
  r.print(out, f.json);
  return exit_code::ok;
}

int cmd_approx(const Flags& f, std::ostream& out) {
  Instance raw = load_instance(f);
  if (raw.total_weight() <= 0) throw UsageError("instance has zero total weight");
  Rational factor = 1 / raw.total_weight();
  Instance inst = raw.normalized();
  Report r;
  describe(r, "approx", inst);
  r.set("normalization_factor", to_string(factor));
  Tree tree;
  Rational c;
  try {
    ApproxResult a = approx3(inst);
    r.set("method", "approx3");
    tree = std::move(a.tree);
    c = a.cost;
  } catch (const EqualityOnly&) {
    r.set("method", "equality-chain");
    tree = equality_chain(inst);
    c = cost(tree, inst);
  }
  const double h = entropy(inst);
  r.cost("cost", c);
  r.set("entropy", fixed(h, 9));
  r.set("gap_to_entropy", fixed(to_double(c) - h, 9));
  if (inst.n() <= kApproxExactLimit) {
    Solution opt = solve(inst);
    r.cost("optimum", opt.cost);
    r.cost("gap_to_optimum", c - opt.cost);
    r.set("within_3", c - opt.cost <= 3);
  }
  r.set("tree", to_sexpr(tree));
  r.print(out, f.json);
  return exit_code::ok;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  Instance inst = load_instance(f);
  if (f.tree.empty()) throw UsageError("--tree is required");
  Tree tree = parse_sexpr(read_file(f.tree));
  VerifyReport v = verify(tree, inst);
  Report r;
  describe(r, "verify", inst);
  r.set("correct", v.correct);
  r.set("irreducible", v.irreducible);
  r.set("ops_legal", v.ops_legal);
  r.set("ok", v.ok());
  if (v.correct) {
    r.set("spuler", spuler_check(tree, inst));
    r.cost("cost", cost(tree, inst));
  }
  r.list("problems", v.problems);
  r.print(out, f.json);
  return exit_code::ok;
}

int cmd_oracle(const Flags& f, std::ostream& out) {
  Instance inst = load_instance(f);
  if (inst.n() > kBruteLimit)
    throw UsageError("oracle handles n <= " + std::to_string(kBruteLimit));
  Report r;
  describe(r, "oracle", inst);
  r.set("class", f.klass);
  if (f.klass == "2wcst") {
    OracleSolution s = brute_2wcst(inst);
    r.cost("cost", s.cost);
    r.set("tree", to_sexpr(s.tree));
  } else if (f.klass == "split" || f.klass == "gbst") {
    GbstSolution s = f.klass == "split" ? brute_split(inst) : brute_gbst(inst);
    std::vector<std::string> names;
    for (int i = 1; i <= inst.n(); ++i) names.push_back("K" + std::to_string(i));
    r.cost("cost", s.cost);
    r.set("tree", to_string(s.tree, names));
  } else {
    throw UsageError("unknown class '" + f.klass + "'");
  }
  r.print(out, f.json);
  return exit_code::ok;
}

int cmd_counterexample(const Flags& f, std::ostream& out) {
  NamedWeights ce = counterexample_instance();
  HwResult base = huang_wong(ce.beta);
  const int d1 = ce.index_of("d1");
  const Rational delta(99, 100);
  std::vector<Rational> bumped = ce.beta;
  bumped[static_cast<size_t>(d1 - 1)] += delta;
  HwResult moved = huang_wong(bumped);
  // the tree found on the heavier table, priced on the original one
  const Rational extracted = gbst_cost(moved.tree, ce.beta);

  Report r;
  r.set("command", "gbst-counterexample");
  r.set("n", static_cast<int>(ce.beta.size()));
  r.cost("huang_wong_cost", base.cost);
  r.set("expected_1763", base.cost == 1763);
  r.set("perturbed_key", "d1");
  r.set("perturbed_delta", to_string(delta));
  r.cost("perturbed_cost", moved.cost);
  r.set("assertion", "cost after increasing a weight >= cost before");
  r.set("violation", moved.cost < base.cost);
  r.set("huang_wong_tree", to_string(base.tree, ce.names));
  r.set("cheaper_tree", to_string(moved.tree, ce.names));
  r.cost("cheaper_tree_cost", extracted);
  r.set("cheaper_than_huang_wong", extracted < base.cost);
  r.set("lemma12", lemma12_check(moved.tree, ce.beta));
  r.print(out, f.json);
  return base.cost == 1763 && moved.cost < base.cost ? exit_code::ok : exit_code::internal;
}

int cmd_export_dot(const Flags& f, std::ostream& out) {
  Instance inst = load_instance(f);
  Tree tree;
  if (!f.tree.empty()) {
    tree = parse_sexpr(read_file(f.tree));
    if (!verify(tree, inst).correct) throw UsageError("tree is not correct for the instance");
  } else {
    tree = solve(inst).tree;
  }
  const std::string dot = export_dot(tree);
  if (!f.dot.empty()) {
    write_file(f.dot, dot);
    Report r;
    describe(r, "export-dot", inst);
    r.set("dot", f.dot);
    r.print(out, f.json);
  } else if (f.json) {
    Report r;
    describe(r, "export-dot", inst);
    r.set("graph", dot);
    r.print(out, true);
  } else {
    out << dot;
  }
  return exit_code::ok;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int cmd_bench(const Flags& f, std::ostream& out) {
  if (f.runs < 1) throw UsageError("--runs must be positive");
  Report r;
  r.set("command", "bench");
  r.set("seed", f.seed);
  r.set("runs", f.runs);
  std::vector<double> med;
  for (int n : {50, 100, 200}) {
    Instance inst = bench_instance(n, f.seed);
    std::vector<double> times;
    for (int i = 0; i < f.runs; ++i) times.push_back(time_solve(inst));
    med.push_back(median(times));
    r.set("seconds_n" + std::to_string(n), fixed(med.back(), 4));
  }
  const double ratio = med[2] / med[1];
  r.set("ratio_100_50", fixed(med[1] / med[0], 2));
  r.set("ratio_200_100", fixed(ratio, 2));
  r.set("within_8_24", ratio >= 8 && ratio <= 24);
  r.print(out, f.json);
  return exit_code::ok;
}

int cmd_gen(const Flags& f, std::ostream& out) {
  if (f.n < 0) throw UsageError("--n must be non-negative");
  RandomSpec spec;
  spec.n = f.n;
  if (f.queries == "standard") spec.queries = QueryMode::Standard;
  else if (f.queries == "keys-only") spec.queries = QueryMode::SuccessfulOnly;
  else if (f.queries == "subset") spec.queries = QueryMode::Subset;
  else if (f.queries == "mixed") spec.queries = QueryMode::Mixed;
  else throw UsageError("unknown query mode '" + f.queries + "'");
  if (!f.ops.empty()) spec.ops = parse_ops(f.ops);
  Rng rng(f.seed);
  out << serialize_instance(random_instance(rng, spec));
  return exit_code::ok;
}

}  // namespace

Instance bench_instance(int n, std::uint64_t seed) {
  Rng rng(seed);
  RandomSpec spec;
  spec.n = n;
  spec.queries = QueryMode::Standard;
  spec.ops = OpSet{Op::Lt, Op::Le, Op::Eq};
  spec.distinct_weights = 20;
  return random_instance(rng, spec);
}

double time_solve(const Instance& instance) {
  const auto t0 = std::chrono::steady_clock::now();
  Solution s = solve(instance);
  const auto t1 = std::chrono::steady_clock::now();
  if (s.tree.arena().empty()) throw InternalError("empty tree");
  return std::chrono::duration<double>(t1 - t0).count();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"two-way comparison search trees"};
  app.require_subcommand(1);
  Flags f;

  auto input = [&](CLI::App* c) { c->add_option("--input", f.input, "instance file")->required(); };
  auto ops = [&](CLI::App* c) { c->add_option("--ops", f.ops, "override operators, e.g. \"< =\""); };
  auto json = [&](CLI::App* c) { c->add_flag("--json", f.json, "JSON report"); };

  auto* solve_cmd = app.add_subcommand("solve", "optimal 2WCST");
  input(solve_cmd);
  ops(solve_cmd);
  solve_cmd->add_option("--dot", f.dot, "write DOT here");
  solve_cmd->add_flag("--no-equality", f.no_equality, "drop '=' and use the alphabetic-tree reduction");
  json(solve_cmd);

  auto* approx_cmd = app.add_subcommand("approx", "additive-3 approximation");
  input(approx_cmd);
  ops(approx_cmd);
  json(approx_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "check a tree against an instance");
  input(verify_cmd);
  ops(verify_cmd);
  verify_cmd->add_option("--tree", f.tree, "tree s-expression file")->required();
  json(verify_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimum");
  input(oracle_cmd);
  ops(oracle_cmd);
  oracle_cmd->add_option("--class", f.klass, "2wcst|split|gbst")
      ->check(CLI::IsMember({"2wcst", "split", "gbst"}));
  json(oracle_cmd);

  auto* ce_cmd = app.add_subcommand("gbst-counterexample", "Huang-Wong counterexample");
  json(ce_cmd);

  auto* dot_cmd = app.add_subcommand("export-dot", "DOT for the optimal (or given) tree");
  input(dot_cmd);
  ops(dot_cmd);
  dot_cmd->add_option("--tree", f.tree, "tree s-expression file");
  dot_cmd->add_option("--dot", f.dot, "output path (default stdout)");
  json(dot_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "dp2wcst timing at n = 50, 100, 200");
  bench_cmd->add_option("--seed", f.seed);
  bench_cmd->add_option("--runs", f.runs, "runs per size, median reported");
  json(bench_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "random instance");
  gen_cmd->add_option("--seed", f.seed);
  gen_cmd->add_option("--n", f.n);
  ops(gen_cmd);
  gen_cmd->add_option("--queries", f.queries, "standard|keys-only|subset|mixed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    if (*solve_cmd) return cmd_solve(f, out);
    if (*approx_cmd) return cmd_approx(f, out);
    if (*verify_cmd) return cmd_verify(f, out);
    if (*oracle_cmd) return cmd_oracle(f, out);
    if (*ce_cmd) return cmd_counterexample(f, out);
    if (*dot_cmd) return cmd_export_dot(f, out);
    if (*bench_cmd) return cmd_bench(f, out);
    if (*gen_cmd) return cmd_gen(f, out);
  } catch (const InfeasibleInstance& e) {
    err << "infeasible: " << e.what() << "\n";
    return exit_code::infeasible;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const InvalidInstance& e) {
    err << "invalid instance: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::internal;
  }
  return exit_code::usage;
}

}  // namespace twcst
