// qcpcp: generate YES instances, reduce them to hypergraphs, color, analyze
// and solve. Every command reads and writes JSON; see README.md for formats.
//
// Exit status: 0 success, 1 an asserted invariant failed, 2 usage error,
// malformed input or a size limit.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcpcp/acceptance.hpp"
#include "qcpcp/fourier.hpp"
#include "qcpcp/hypergraph.hpp"
#include "qcpcp/io.hpp"
#include "qcpcp/label_cover.hpp"
#include "qcpcp/oracle.hpp"
#include "qcpcp/quadratic_code.hpp"
#include "qcpcp/rng.hpp"
#include "qcpcp/verifier.hpp"

namespace fs = std::filesystem;
using namespace qcpcp;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --out wins; otherwise $QCPCP_OUT_DIR/<name>; otherwise stdout.
void emit(const Json& j, const std::string& out, const std::string& default_name) {
  fs::path path;
  if (!out.empty()) {
    path = out;
  } else if (const char* dir = std::getenv("QCPCP_OUT_DIR"); dir && *dir) {
    path = fs::path(dir) / default_name;
  } else {
    std::cout << dump_json(j);
    return;
  }
  write_json_file(path, j);
  std::cerr << "wrote " << path.string() << "\n";
}

struct InstanceInput {
  LoadedInstance loaded;
  std::string hash;
};

InstanceInput load_instance(const std::string& path) {
  const Json j = read_json_file(path);
  return {instance_from_json(j), content_hash(j)};
}

PlantedLabeling labeling_for(const InstanceInput& in, const std::string& labeling_path) {
  if (!labeling_path.empty()) return labeling_from_json(read_json_file(labeling_path), in.loaded.instance);
  if (!in.loaded.planted) throw UsageError("instance has no planted labeling; pass --labeling");
  return *in.loaded.planted;
}

TestMode mode_arg(int mode) {
  try {
    return test_mode_from_int(mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- gen-yes

struct GenArgs {
  YesInstanceParams p;
  std::string out, labeling_out;
};

int cmd_gen_yes(const GenArgs& a) {
  const auto g = generate_yes_instance(a.p);
  const Json inst = instance_to_json(g.instance, &g.planted);
  emit(inst, a.out, "instance_seed" + std::to_string(a.p.seed) + ".json");
  if (!a.labeling_out.empty())
    write_json_file(a.labeling_out, labeling_to_json(g.planted, content_hash(instance_to_json(g.instance))));
  return kOk;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string instance, labeling, out;
};

int cmd_check(const CheckArgs& a) {
  const auto in = load_instance(a.instance);
  const auto& inst = in.loaded.instance;
  const auto lab = labeling_for(in, a.labeling);
  if (lab.x.size() != inst.num_u() || lab.y.size() != inst.num_v())
    throw UsageError("labeling does not match the instance");
  const auto rep = verify_labeling(inst, lab);
  const auto mat = check_matrix_assignment(inst, MatrixAssignment::from_planted(lab), inst.k());

  Json j;
  j["schema"] = "qcpcp.check/1";
  j["instance_hash"] = in.hash;
  j["labeling"] = a.labeling.empty() ? "planted" : a.labeling;
  j["satisfied_edges"] = rep.satisfied_edges;
  j["total_edges"] = rep.total_edges;
  j["fraction"] = rational_to_json(rep.fraction);
  j["last_coordinate_violations"] = rep.last_coordinate_violations;
  j["constraint_violations"] = rep.constraint_violations;
  j["matrix_assignment"] = {{"all_flags", mat.all_flags()},
                            {"satisfied_fraction", rational_to_json(mat.satisfied_fraction)}};
  j["perfect"] = rep.perfect();
  emit(j, a.out, "check.json");
  return rep.perfect() && mat.all_flags() ? kOk : kViolation;
}

// ---------------------------------------------------------------- color

struct ColorArgs {
  std::string instance, labeling, out;
  std::string kind = "honest";
  int mode = 28;
  int color_class = 0;
  std::uint64_t num = 1, den = 2;
  std::uint64_t seed = 0;
};

int cmd_color(const ColorArgs& a) {
  const auto in = load_instance(a.instance);
  const auto spaces = build_folding_spaces(in.loaded.instance);
  const TestMode mode = mode_arg(a.mode);
  Rng rng(a.seed);
  if (a.den == 0 || a.num > a.den) throw UsageError("--density must be num/den with num <= den");

  if (a.kind == "unfolded") {
    // Independent bits on every matrix: almost never constant on cosets.
    if (mode != TestMode::T28) throw UsageError("unfolded tables exist only for mode 28");
    Json j;
    j["schema"] = kColoringSchema;
    j["mode"] = 28;
    j["colors"] = 2;
    for (std::size_t v = 0; v < spaces.size(); ++v) {
      std::vector<int> t(std::size_t{1} << spaces[v].ambient_bits());
      for (auto& x : t) x = rng.bernoulli(a.num, a.den);
      j[std::to_string(v)] = t;
    }
    emit(j, a.out, "coloring_unfolded.json");
    return kOk;
  }

  std::optional<FoldedColoring> col;
  if (a.kind == "honest" || a.kind == "class") {
    col = honest_coloring(spaces, labeling_for(in, a.labeling), domain_of(mode));
    if (a.kind == "class") {
      if (a.color_class < 0 || a.color_class >= col->colors()) throw UsageError("--class out of range");
      col = col->indicator(a.color_class);
    }
  } else if (a.kind == "random") {
    if (mode == TestMode::T28) {
      col = random_folded_coloring(spaces, rng, a.num, a.den);
    } else {
      std::vector<std::vector<std::uint8_t>> tables;
      for (const auto& s : spaces) {
        std::vector<std::uint8_t> t(s.coset_count() * s.coset_count());
        for (auto& x : t) x = static_cast<std::uint8_t>(rng.below(4));
        tables.push_back(std::move(t));
      }
      col.emplace(FoldedColoring::Domain::CosetPairs, 4, std::move(tables));
    }
  } else {
    throw UsageError("unknown --kind '" + a.kind + "' (honest, class, random, unfolded)");
  }
  Json j = coloring_to_json(*col, mode);
  j["instance_hash"] = in.hash;
  j["kind"] = a.kind;
  j["seed"] = a.seed;
  emit(j, a.out, "coloring_" + a.kind + ".json");
  return kOk;
}

// ---------------------------------------------------------------- reduce

struct ReduceArgs {
  std::string instance, out;
  int mode = 28;
  std::uint64_t seed = 0;
  HypergraphLimits limits;
};

int cmd_reduce(const ReduceArgs& a) {
  const auto in = load_instance(a.instance);
  const TestMode mode = mode_arg(a.mode);
  const Reduction red(in.loaded.instance);
  const auto h = build_hypergraph(red, mode, a.limits);
  emit(hypergraph_to_json(h, {in.hash, a.mode, a.seed}), a.out, "hypergraph_t" + std::to_string(a.mode) + ".json");
  std::cerr << "n = " << h.n << ", edges = " << h.edges.size() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string hypergraph, instance, coloring, out;
  std::vector<int> qs{2, 4};
  bool no_mis = false, no_cover = false;
  std::size_t mis_cap = 64;
  int max_t = 3;
  std::uint64_t node_limit = 20'000'000;
};

int cmd_solve(const SolveArgs& a) {
  HypergraphProvenance prov;
  const Json hj = read_json_file(a.hypergraph);
  const auto h = hypergraph_from_json(hj, &prov);

  OracleOptions opt;
  opt.qs = a.qs;
  opt.run_mis = !a.no_mis;
  opt.run_cover = !a.no_cover;
  opt.mis_cap = a.mis_cap;
  opt.max_t = a.max_t;
  opt.node_limit = a.node_limit;
  const auto res = solve(h, opt);

  Json j = oracle_result_to_json(res);
  j["inputs"] = {{"hypergraph_hash", content_hash(hj)}, {"instance_hash", prov.instance_hash}, {"mode", prov.mode}};
  j["n"] = h.n;
  j["edges"] = h.edges.size();
  bool ok = res.witnesses_verified;

  if (!a.coloring.empty()) {
    if (a.instance.empty()) throw UsageError("--coloring needs --instance");
    const auto in = load_instance(a.instance);
    if (!prov.instance_hash.empty() && prov.instance_hash != in.hash)
      throw UsageError("hypergraph was built from a different instance");
    const auto spaces = build_folding_spaces(in.loaded.instance);
    const auto loaded = coloring_from_json(read_json_file(a.coloring), spaces);
    if (loaded.mode && static_cast<int>(*loaded.mode) != prov.mode)
      throw UsageError("coloring mode does not match the hypergraph");
    const auto colors = vertex_colors(h, loaded.folded(spaces));
    const auto mono = count_monochromatic(h, colors);
    j["coloring_check"] = {{"monochromatic_edges", mono}, {"valid", mono == 0}};
    ok &= mono == 0;
  }
  emit(j, a.out, "oracle.json");
  return ok ? kOk : kViolation;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string instance, coloring, out;
  int k = 1;
  int color_class = -1;
  std::uint64_t max_terms = std::uint64_t{1} << 24;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto in = load_instance(a.instance);
  const Json cj = read_json_file(a.coloring);
  const Reduction red(in.loaded.instance);
  const auto loaded = coloring_from_json(cj, red.spaces());
  const Json inputs = {{"instance_hash", in.hash}, {"coloring_hash", content_hash(cj)}};

  if (loaded.unfolded) {
    // Not constant on cosets: only the support check is meaningful.
    Json j;
    j["schema"] = kThetaSchema;
    j["inputs"] = inputs;
    j["folded"] = false;
    Json per = Json::array();
    bool all = true;
    for (std::size_t v = 0; v < red.spaces().size(); ++v) {
      std::vector<std::uint8_t> f(loaded.tables[v].size());
      const int c = a.color_class < 0 ? 1 : a.color_class;
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = loaded.tables[v][i] == c;
      const bool ok = check_folding_support(fourier_transform(f, red.m()), red.space(v));
      per.push_back(ok);
      all &= ok;
    }
    j["checks"] = {{"folding_support", all}, {"folding_support_per_vertex", per}};
    j["all_ok"] = all;
    emit(j, a.out, "theta_report.json");
    return all ? kOk : kViolation;
  }

  const auto col = loaded.folded(red.spaces());
  if (col.domain() != FoldedColoring::Domain::Cosets)
    throw UsageError("analyze needs a mode 28 (coset) coloring");
  int c = a.color_class;
  if (c < 0) {
    if (col.colors() != 2) throw UsageError("pick a color class with --class for a " +
                                            std::to_string(col.colors()) + "-color table");
    c = 1;
  }
  if (c >= col.colors()) throw UsageError("--class out of range");
  const auto ind = col.indicator(c);
  const auto rep = decompose_theta(red, ind, a.k, FourierLimits{a.max_terms});

  Json j = theta_report_to_json(rep);
  j["inputs"] = inputs;
  j["inputs"]["class"] = c;
  j["folded"] = true;
  j["acceptance_probability"] = rational_to_json(acceptance_probability(red, col, TestMode::T28));
  emit(j, a.out, "theta_report.json");
  return rep.all_ok() ? kOk : kViolation;
}

// ---------------------------------------------------------------- params

struct ParamsArgs {
  double log2n = 20;
  double epsilon = 0.01;
  std::string out;
};

int cmd_params(const ParamsArgs& a) {
  Parameters p;
  try {
    p = compute_parameters(a.log2n, a.epsilon);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(parameters_to_json(p), a.out, "parameters.json");
  return kOk;
}

// ---------------------------------------------------------------- run-all

struct RunAllArgs {
  std::uint64_t seed = 1;
  std::vector<int> only;
};

int cmd_run_all(const RunAllArgs& a) {
  AcceptanceOptions opt;
  opt.seed = a.seed;
  AcceptanceSuite suite(opt);
  std::vector<int> ids = a.only;
  if (ids.empty())
    for (int i = 1; i <= AcceptanceSuite::kCriteria; ++i) ids.push_back(i);
  int passed = 0;
  for (int id : ids) {
    if (id < 1 || id > AcceptanceSuite::kCriteria) throw UsageError("criterion ids are 1.." +
                                                                     std::to_string(AcceptanceSuite::kCriteria));
    const auto r = suite.run(id);
    std::cout << format_result(r) << std::endl;
    passed += r.passed;
  }
  std::cout << passed << "/" << ids.size() << " criteria passed\n";
  return passed == static_cast<int>(ids.size()) ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic-code PCP reductions at desk scale"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen-yes", "sample a YES instance with its planted labeling");
  g->add_option("--m", gen.p.m, "matrix dimension m")->capture_default_str();
  g->add_option("--r", gen.p.r, "small side dimension r")->capture_default_str();
  g->add_option("--n-u", gen.p.num_u, "|U|")->capture_default_str();
  g->add_option("--n-v", gen.p.num_v, "|V|")->capture_default_str();
  g->add_option("--degree", gen.p.degree, "neighbours per u")->capture_default_str();
  g->add_option("--constraints", gen.p.num_constraints, "constraints per v")->capture_default_str();
  g->add_option("--k", gen.p.k, "smoothness rank k")->capture_default_str();
  g->add_option("--delta-log2", gen.p.delta_log2, "declared log2 soundness")->capture_default_str();
  g->add_option("--seed", gen.p.seed)->capture_default_str();
  g->add_option("--out", gen.out, "instance file");
  g->add_option("--labeling-out", gen.labeling_out, "also write the labeling on its own");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "verify a labeling against an instance");
  c->add_option("--instance", chk.instance)->required()->check(CLI::ExistingFile);
  c->add_option("--labeling", chk.labeling, "labeling file (default: the planted one)")->check(CLI::ExistingFile);
  c->add_option("--out", chk.out);

  ColorArgs col;
  std::string density = "1/2";
  auto* co = app.add_subcommand("color", "write a coloring file");
  co->add_option("--instance", col.instance)->required()->check(CLI::ExistingFile);
  co->add_option("--labeling", col.labeling)->check(CLI::ExistingFile);
  co->add_option("--kind", col.kind, "honest | class | random | unfolded")->capture_default_str();
  co->add_option("--mode", col.mode, "28 or 44")->capture_default_str();
  co->add_option("--class", col.color_class, "honest color class for --kind class")->capture_default_str();
  co->add_option("--density", density, "probability of a 1 for random and unfolded tables")->capture_default_str();
  co->add_option("--seed", col.seed)->capture_default_str();
  co->add_option("--out", col.out);

  ReduceArgs red;
  auto* r = app.add_subcommand("reduce", "materialize the hypergraph of a test");
  r->add_option("--instance", red.instance)->required()->check(CLI::ExistingFile);
  r->add_option("--mode", red.mode, "28 or 44")->capture_default_str();
  r->add_option("--seed", red.seed, "recorded in the provenance header")->capture_default_str();
  r->add_option("--max-edges", red.limits.max_edges)->capture_default_str();
  r->add_option("--max-m", red.limits.max_m)->capture_default_str();
  r->add_option("--out", red.out);

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "exact oracle answers for a hypergraph");
  s->add_option("--hypergraph", sol.hypergraph)->required()->check(CLI::ExistingFile);
  s->add_option("--instance", sol.instance)->check(CLI::ExistingFile);
  s->add_option("--coloring", sol.coloring, "also check this coloring")->check(CLI::ExistingFile);
  s->add_option("--q", sol.qs, "color counts to try")->delimiter(',')->capture_default_str();
  s->add_flag("--no-mis", sol.no_mis);
  s->add_flag("--no-cover", sol.no_cover);
  s->add_option("--mis-cap", sol.mis_cap)->capture_default_str();
  s->add_option("--max-t", sol.max_t)->capture_default_str();
  s->add_option("--node-limit", sol.node_limit)->capture_default_str();
  s->add_option("--out", sol.out);

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Fourier decomposition of Theta with every bound checked");
  a->add_option("--instance", an.instance)->required()->check(CLI::ExistingFile);
  a->add_option("--coloring", an.coloring)->required()->check(CLI::ExistingFile);
  a->add_option("--k", an.k)->capture_default_str();
  a->add_option("--class", an.color_class, "color whose indicator is analyzed (default 1)");
  a->add_option("--max-terms", an.max_terms)->capture_default_str();
  a->add_option("--out", an.out);

  ParamsArgs pa;
  auto* p = app.add_subcommand("params", "parameter arithmetic in log2 form");
  p->add_option("--log2n", pa.log2n, "log2 N")->capture_default_str();
  p->add_option("--epsilon", pa.epsilon)->capture_default_str();
  p->add_option("--out", pa.out);

  RunAllArgs ra;
  auto* all = app.add_subcommand("run-all", "run the acceptance criteria");
  all->add_option("--seed", ra.seed, "first instance seed")->capture_default_str();
  all->add_option("--only", ra.only, "criterion ids")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_gen_yes(gen);
    if (*c) return cmd_check(chk);
    if (*co) {
      std::istringstream ds(density);
      char slash = 0;
      if (!(ds >> col.num >> slash >> col.den) || slash != '/') throw UsageError("--density must look like 3/8");
      return cmd_color(col);
    }
    if (*r) return cmd_reduce(red);
    if (*s) return cmd_solve(sol);
    if (*a) return cmd_analyze(an);
    if (*p) return cmd_params(pa);
    if (*all) return cmd_run_all(ra);
  } catch (const LimitExceeded& e) {
    std::cerr << "refused: " << e.what() << " (estimate " << e.estimate() << ")\n";
    return kUsage;
  } catch (const SupportTooLarge& e) {
    std::cerr << "refused: " << e.what() << " (estimate " << e.estimate() << ")\n";
    return kUsage;
  } catch (const SearchLimitExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kUsage;
  } catch (const OracleTooLarge& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainTooLarge& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    // UsageError, FormatError and I/O failures.
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
