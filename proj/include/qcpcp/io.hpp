#pragma once

// JSON files for instances, colorings, hypergraphs and reports. Every file
// carries a "schema" string; readers reject anything else.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcpcp/exact.hpp"
#include "qcpcp/fourier.hpp"
#include "qcpcp/hypergraph.hpp"
#include "qcpcp/label_cover.hpp"
#include "qcpcp/oracle.hpp"
#include "qcpcp/quadratic_code.hpp"
#include "qcpcp/verifier.hpp"

namespace qcpcp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kInstanceSchema = "qcpcp.instance/1";
inline constexpr const char* kLabelingSchema = "qcpcp.labeling/1";
inline constexpr const char* kColoringSchema = "qcpcp.coloring/1";
inline constexpr const char* kHypergraphSchema = "qcpcp.hypergraph/1";
inline constexpr const char* kThetaSchema = "qcpcp.theta-report/1";
inline constexpr const char* kOracleSchema = "qcpcp.oracle-result/1";
inline constexpr const char* kParamsSchema = "qcpcp.parameters/1";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed, trailing newline; same value gives the same bytes.
void write_json_file(const std::filesystem::path& path, const Json& j);
std::string dump_json(const Json& j);

/// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string content_hash(const Json& j);

// ---- instances ----

Json instance_to_json(const LabelCoverInstance& inst, const PlantedLabeling* planted = nullptr);

struct LoadedInstance {
  LabelCoverInstance instance;
  std::optional<PlantedLabeling> planted;
};
LoadedInstance instance_from_json(const Json& j);

/// A vector labeling on its own, tied to an instance by content hash.
Json labeling_to_json(const PlantedLabeling& lab, const std::string& instance_hash);
PlantedLabeling labeling_from_json(const Json& j, const LabelCoverInstance& inst);

// ---- colorings ----

Json coloring_to_json(const FoldedColoring& col, TestMode mode);

/// A coloring file as read. Tables whose length is 2^{m*m} are taken as
/// functions on all matrices (no folding); they cannot be run through the
/// tests but can be Fourier-analysed.
struct LoadedColoring {
  std::optional<TestMode> mode;
  int colors = 2;
  std::vector<std::vector<std::uint8_t>> tables;
  bool unfolded = false;
  /// Throws FormatError if the tables do not match the folding spaces.
  FoldedColoring folded(const std::vector<FoldingSpace>& spaces) const;
};
LoadedColoring coloring_from_json(const Json& j, const std::vector<FoldingSpace>& spaces);

// ---- hypergraphs ----

struct HypergraphProvenance {
  std::string instance_hash;
  int mode = 28;
  std::uint64_t seed = 0;
};
Json hypergraph_to_json(const Hypergraph& h, const HypergraphProvenance& prov);
Hypergraph hypergraph_from_json(const Json& j, HypergraphProvenance* prov = nullptr);

// ---- reports ----

/// {"num", "den", "den_log2" (null unless den is a power of two), "value"}.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json theta_report_to_json(const ThetaReport& rep);
Json oracle_result_to_json(const OracleResult& res);
Json parameters_to_json(const Parameters& p);

}  // namespace qcpcp
