#include "qcpcp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcpcp {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw FormatError(what);
}

void check_schema(const Json& j, const char* expected) {
  require(j.is_object(), std::string("expected a JSON object with schema ") + expected);
  require(j.contains("schema") && j["schema"] == expected,
          std::string("schema mismatch: expected ") + expected);
}

std::vector<std::vector<int>> matrix_rows(const BitMatrix& M) { return M.to_rows(); }

BitMatrix matrix_from(const Json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  require(j.is_array() && j.size() == rows, what + ": expected " + std::to_string(rows) + " rows");
  BitMatrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols, what + ": row " + std::to_string(i) + " has wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      const int b = j[i][c].get<int>();
      require(b == 0 || b == 1, what + ": entries must be 0 or 1");
      M.set(i, c, b);
    }
  }
  return M;
}

BitVector vector_from(const Json& j, std::size_t len, const std::string& what) {
  require(j.is_array() && j.size() == len, what + ": expected " + std::to_string(len) + " bits");
  BitVector x(len);
  for (std::size_t i = 0; i < len; ++i) {
    const int b = j[i].get<int>();
    require(b == 0 || b == 1, what + ": entries must be 0 or 1");
    x.set(i, b);
  }
  return x;
}

std::size_t get_size(const Json& j, const char* key) {
  require(j.contains(key) && j[key].is_number_unsigned(), std::string("missing or invalid field ") + key);
  return j[key].get<std::size_t>();
}

bool all_digits(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

void labeling_into(Json& j, const PlantedLabeling& lab) {
  j["x"] = Json::array();
  j["y"] = Json::array();
  for (const auto& x : lab.x) j["x"].push_back(x.to_bits());
  for (const auto& y : lab.y) j["y"].push_back(y.to_bits());
}

PlantedLabeling labeling_fields(const Json& p, const LabelCoverInstance& inst) {
  require(p.contains("x") && p["x"].is_array() && p["x"].size() == inst.num_u(),
          "labeling: x must have one entry per u");
  require(p.contains("y") && p["y"].is_array() && p["y"].size() == inst.num_v(),
          "labeling: y must have one entry per v");
  PlantedLabeling lab;
  for (const auto& x : p["x"]) lab.x.push_back(vector_from(x, inst.r(), "labeling x"));
  for (const auto& y : p["y"]) lab.y.push_back(vector_from(y, inst.m(), "labeling y"));
  return lab;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_json(j);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string content_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------- instances

Json instance_to_json(const LabelCoverInstance& inst, const PlantedLabeling* planted) {
  Json j;
  j["schema"] = kInstanceSchema;
  j["coset_ranking"] =
      "Coloring tables are indexed by coset of H_v. The representative of a coset is its reduction by the "
      "reduced row-echelon basis of H_v (pivot at the lowest row-major position); the index is the integer "
      "formed by the representative's non-pivot bits, lowest position first. Pair tables use a*count+b.";
  j["m"] = inst.m();
  j["r"] = inst.r();
  j["U"] = inst.num_u();
  j["V"] = inst.num_v();
  Json edges = Json::array();
  for (const auto& e : inst.edges()) {
    Json je;
    je["u"] = e.u;
    je["v"] = e.v;
    if (e.pi.form() == MatrixSpaceMap::Form::Conjugation)
      je["rho"] = matrix_rows(e.pi.rho());
    else
      je["matrix"] = matrix_rows(e.pi.matrix());
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  Json cons = Json::object();
  for (std::size_t v = 0; v < inst.num_v(); ++v) {
    Json list = Json::array();
    for (const auto& c : inst.constraints(v)) list.push_back(c.flatten().to_bits());
    cons[std::to_string(v)] = std::move(list);
  }
  j["constraints"] = std::move(cons);
  j["k"] = inst.k();
  j["delta_log2"] = inst.delta_log2();
  if (planted) {
    Json p;
    labeling_into(p, *planted);
    j["planted"] = std::move(p);
  }
  return j;
}

LoadedInstance instance_from_json(const Json& j) {
  check_schema(j, kInstanceSchema);
  const std::size_t m = get_size(j, "m"), r = get_size(j, "r");
  const std::size_t nu = get_size(j, "U"), nv = get_size(j, "V");
  require(m >= 1 && m <= 8 && r >= 1 && r <= m, "instance: need 1 <= r <= m <= 8");

  std::vector<LabelCoverEdge> edges;
  require(j.contains("edges") && j["edges"].is_array(), "instance: missing edges");
  for (const auto& je : j["edges"]) {
    LabelCoverEdge e;
    e.u = get_size(je, "u");
    e.v = get_size(je, "v");
    if (je.contains("rho")) {
      e.pi = MatrixSpaceMap::conjugation(matrix_from(je["rho"], r, m, "edge rho"));
    } else {
      require(je.contains("matrix"), "instance: edge needs rho or matrix");
      e.pi = MatrixSpaceMap::general(m, r, matrix_from(je["matrix"], r * r, m * m, "edge matrix"));
    }
    edges.push_back(std::move(e));
  }

  std::vector<std::vector<BitMatrix>> constraints(nv);
  if (j.contains("constraints")) {
    const auto& jc = j["constraints"];
    require(jc.is_object(), "instance: constraints must be an object keyed by v");
    for (const auto& [key, list] : jc.items()) {
      require(all_digits(key), "instance: constraint key '" + key + "' is not a vertex id");
      const std::size_t v = std::stoul(key);
      require(v < nv, "instance: constraint vertex out of range");
      require(list.is_array(), "instance: constraint list must be an array");
      for (const auto& c : list)
        constraints[v].push_back(BitMatrix::unflatten(vector_from(c, m * m, "constraint"), m, m));
    }
  }

  require(j.contains("k") && j["k"].is_number_integer(), "instance: missing k");
  const double delta = j.contains("delta_log2") ? j["delta_log2"].get<double>() : 0.0;

  std::optional<LabelCoverInstance> inst;
  try {
    inst.emplace(m, r, nu, nv, std::move(edges), std::move(constraints), j["k"].get<int>(), delta);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("instance: ") + e.what());
  }

  std::optional<PlantedLabeling> planted;
  if (j.contains("planted")) planted = labeling_fields(j["planted"], *inst);
  return {std::move(*inst), std::move(planted)};
}

Json labeling_to_json(const PlantedLabeling& lab, const std::string& instance_hash) {
  Json j;
  j["schema"] = kLabelingSchema;
  j["instance_hash"] = instance_hash;
  labeling_into(j, lab);
  return j;
}

PlantedLabeling labeling_from_json(const Json& j, const LabelCoverInstance& inst) {
  check_schema(j, kLabelingSchema);
  return labeling_fields(j, inst);
}

// ---------------------------------------------------------------- colorings

Json coloring_to_json(const FoldedColoring& col, TestMode mode) {
  Json j;
  j["schema"] = kColoringSchema;
  j["mode"] = static_cast<int>(mode);
  j["colors"] = col.colors();
  for (std::size_t v = 0; v < col.num_vertices(); ++v) {
    Json t = Json::array();
    for (auto c : col.table(v)) t.push_back(static_cast<int>(c));
    j[std::to_string(v)] = std::move(t);
  }
  return j;
}

LoadedColoring coloring_from_json(const Json& j, const std::vector<FoldingSpace>& spaces) {
  check_schema(j, kColoringSchema);
  LoadedColoring out;
  if (j.contains("mode")) {
    try {
      out.mode = test_mode_from_int(j["mode"].get<int>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("coloring: ") + e.what());
    }
  }
  if (j.contains("colors")) out.colors = j["colors"].get<int>();
  require(out.colors >= 1 && out.colors <= 255, "coloring: colors out of range");

  out.tables.assign(spaces.size(), {});
  std::vector<char> seen(spaces.size(), 0);
  for (const auto& [key, t] : j.items()) {
    if (!all_digits(key)) continue;
    const std::size_t v = std::stoul(key);
    require(v < spaces.size(), "coloring: vertex " + key + " not in the instance");
    require(t.is_array(), "coloring: table of " + key + " must be an array");
    seen[v] = 1;
    for (const auto& c : t) {
      const int x = c.get<int>();
      require(x >= 0 && x < out.colors, "coloring: color out of range at vertex " + key);
      out.tables[v].push_back(static_cast<std::uint8_t>(x));
    }
  }
  for (std::size_t v = 0; v < spaces.size(); ++v)
    require(seen[v], "coloring: no table for vertex " + std::to_string(v));

  const bool pairs = out.mode == TestMode::T44;
  bool all_folded = true, all_full = true;
  for (std::size_t v = 0; v < spaces.size(); ++v) {
    const std::uint64_t cc = spaces[v].coset_count();
    const std::uint64_t folded_len = pairs ? cc * cc : cc;
    const std::uint64_t full_len = std::uint64_t{1} << spaces[v].ambient_bits();
    all_folded &= out.tables[v].size() == folded_len;
    all_full &= out.tables[v].size() == full_len;
  }
  require(all_folded || all_full, "coloring: table lengths match neither the coset blocks nor the full matrix space");
  out.unfolded = !all_folded;
  require(!(out.unfolded && pairs), "coloring: full-space tables are only meaningful for mode 28");
  return out;
}

FoldedColoring LoadedColoring::folded(const std::vector<FoldingSpace>& spaces) const {
  require(!unfolded, "coloring is not folded: tables cover all matrices, not cosets");
  const auto domain = mode == TestMode::T44 ? FoldedColoring::Domain::CosetPairs : FoldedColoring::Domain::Cosets;
  FoldedColoring col(domain, colors, tables);
  try {
    col.validate(spaces);
  } catch (const std::exception& e) {
    throw FormatError(std::string("coloring: ") + e.what());
  }
  return col;
}

// ---------------------------------------------------------------- hypergraphs

Json hypergraph_to_json(const Hypergraph& h, const HypergraphProvenance& prov) {
  Json j;
  j["schema"] = kHypergraphSchema;
  j["provenance"] = {{"instance_hash", prov.instance_hash}, {"mode", prov.mode}, {"seed", prov.seed}};
  j["n"] = h.n;
  j["uniformity"] = h.uniformity;
  Json verts = Json::array();
  for (const auto& x : h.vertices) verts.push_back({{"v", x.v}, {"coset", x.coset}});
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (const auto e : h.edges) edges.push_back(std::vector<std::uint32_t>(e.begin(), e.end()));
  j["edges"] = std::move(edges);
  j["collapsed"] = h.collapsed;
  return j;
}

Hypergraph hypergraph_from_json(const Json& j, HypergraphProvenance* prov) {
  check_schema(j, kHypergraphSchema);
  Hypergraph h;
  h.n = get_size(j, "n");
  h.uniformity = j.at("uniformity").get<int>();
  h.collapsed = j.contains("collapsed") ? j["collapsed"].get<std::uint64_t>() : 0;
  require(j.contains("vertices") && j["vertices"].size() == h.n, "hypergraph: vertex list must have n entries");
  std::size_t last_v = 0;
  for (std::size_t i = 0; i < h.n; ++i) {
    const auto& x = j["vertices"][i];
    Hypergraph::Vertex vx{get_size(x, "v"), x.at("coset").get<std::uint64_t>()};
    if (i == 0 || vx.v != last_v) {
      require(vx.v == h.offsets.size() && vx.coset == 0, "hypergraph: vertices must be listed block by block");
      h.offsets.push_back(i);
      last_v = vx.v;
    } else {
      require(vx.coset == h.vertices.back().coset + 1, "hypergraph: cosets must be consecutive within a block");
    }
    h.vertices.push_back(vx);
  }
  for (const auto& e : j.at("edges")) {
    auto ids = e.get<std::vector<std::uint32_t>>();
    for (auto x : ids) require(x < h.n, "hypergraph: edge references a missing vertex");
    h.edges.push_back(ids);
  }
  if (prov && j.contains("provenance")) {
    const auto& p = j["provenance"];
    prov->instance_hash = p.value("instance_hash", "");
    prov->mode = p.value("mode", 28);
    prov->seed = p.value("seed", std::uint64_t{0});
  }
  return h;
}

// ---------------------------------------------------------------- reports

Json rational_to_json(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  Json j;
  j["num"] = num.str();
  j["den"] = den.str();
  const std::size_t lsb = boost::multiprecision::lsb(den);
  if (den == (BigInt(1) << lsb))
    j["den_log2"] = lsb;
  else
    j["den_log2"] = nullptr;
  j["value"] = to_double(q);
  return j;
}

Rational rational_from_json(const Json& j) {
  require(j.contains("num") && j.contains("den"), "rational: need num and den");
  const BigInt den(j["den"].get<std::string>());
  require(den > 0, "rational: den must be positive");
  return Rational(BigInt(j["num"].get<std::string>()), den);
}

Json theta_report_to_json(const ThetaReport& rep) {
  Json j;
  j["schema"] = kThetaSchema;
  j["k"] = rep.k;
  j["theta"] = rational_to_json(rep.theta);
  j["theta_direct"] = rational_to_json(rep.theta_direct);
  j["theta0"] = rational_to_json(rep.theta0);
  j["theta1"] = rational_to_json(rep.theta1);
  j["theta2"] = rational_to_json(rep.theta2);
  j["s"] = rational_to_json(rep.s);
  j["s8"] = rational_to_json(rep.s8);
  j["theta1_mass"] = rational_to_json(rep.theta1_mass);
  j["decoding"] = {{"success_probability", rational_to_json(rep.decoding.success_probability)},
                   {"unrestricted_success", rational_to_json(rep.decoding.unrestricted_success)},
                   {"homogeneous", rep.decoding.homogeneous}};
  j["theta2_max_probability"] = rational_to_json(rep.theta2_max_probability);
  j["theta2_bound"] = pow2_neg_half_k_plus_one(rep.k);
  j["delta_log2"] = rep.delta_log2;
  j["checks"] = {{"identity", rep.identity_ok},
                 {"theta0_nonnegative", rep.theta0_nonnegative},
                 {"theta0_ge_s8", rep.theta0_ge_s8},
                 {"mass_matches_decoding", rep.mass_matches_decoding},
                 {"theta1_le_decoding", rep.theta1_le_decoding},
                 {"theta2_le_rank_bound", rep.theta2_le_rankbound},
                 {"theta2_rank_split", rep.theta2_rank_split_ok},
                 {"parseval", rep.parseval_ok},
                 {"folding_support", rep.folding_ok},
                 {"homogeneity", rep.homogeneity_ok},
                 {"soundness_applicable", rep.soundness_applicable},
                 {"soundness_chain", rep.soundness_chain_ok},
                 {"theta1_le_declared_delta", rep.theta1_le_declared_delta}};
  j["all_ok"] = rep.all_ok();
  return j;
}

Json oracle_result_to_json(const OracleResult& res) {
  Json j;
  j["schema"] = kOracleSchema;
  if (res.mis)
    j["max_independent_set"] = {{"size", res.mis->size}, {"witness", res.mis->witness}, {"nodes", res.mis->nodes}};
  else
    j["max_independent_set"] = nullptr;
  Json cols = Json::array();
  for (const auto& q : res.colorability) {
    Json c = {{"q", q.q}, {"colorable", q.result.colorable}, {"nodes", q.result.nodes}};
    c["witness"] = q.result.colorable ? Json(q.result.witness) : Json(nullptr);
    cols.push_back(std::move(c));
  }
  j["colorability"] = std::move(cols);
  if (res.cover)
    j["covering_number"] = {
        {"feasible", res.cover->feasible}, {"t", res.cover->t}, {"assignments", res.cover->assignments}};
  else
    j["covering_number"] = nullptr;
  j["witnesses_verified"] = res.witnesses_verified;
  return j;
}

Json parameters_to_json(const Parameters& p) {
  Json j;
  j["schema"] = kParamsSchema;
  j["log2_N"] = p.log2_n_vertices_outer;
  j["epsilon"] = p.epsilon;
  j["k"] = p.k;
  j["log2_delta"] = p.log2_delta;
  j["m_bound"] = p.m_bound;
  j["log2_n_bound"] = p.log2_n_bound;
  j["log2_s_bound"] = p.log2_s_bound;
  j["log2_soundness_rhs"] = p.log2_soundness_rhs();
  j["soundness_consistent"] = p.soundness_consistent();
  j["outer_delta_ok"] = p.outer_delta_ok();
  j["outer_k_ok"] = p.outer_k_ok();
  return j;
}

}  // namespace qcpcp
