#pragma once

// Serialization and output helpers for the qpsl command-line tool.

#include "qpsl/kam.hpp"
#include "qpsl/label_set.hpp"
#include "qpsl/moser_poschel.hpp"
#include "qpsl/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <string>
#include <vector>

namespace qpsl::cli {

using nlohmann::json;

// CLI11 config reader/writer for flat JSON objects: keys are long option
// names, values are scalars or arrays.  Writing produces the RunConfig echo.
// The file is read by the root app; every key is routed to the subcommand
// selected on the command line.  An optional "command" key must name it.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* root = nullptr) : root_(root) {}
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

private:
    const CLI::App* root_;
};

// The effective configuration of a subcommand (every option, defaults
// included; output paths and the config path itself are left out).
json run_config(const CLI::App* app);
// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits.
std::string config_hash(const json& config);

// Document skeleton shared by every JSON artifact.
json document(const std::string& schema, const json& config);
// "# schema" / "# config-hash" / "# config" header lines followed by the column row.
std::string csv_header(const std::string& schema, const json& config, const std::vector<std::string>& columns);

// Writes to the path, or to stdout for "" and "-".
void write_output(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string fmt(double x);  // round-trip decimal

json to_json(const IVec& n);
IVec ivec_from_json(const json& j);
json to_json(const Mat2& A);
json to_json(const RMat2& A);
// [n_1..n_d, re, im, …] rows; "key_units" is "half" for series on 2𝕋^d.
json to_json(const MatrixSeries& S);

MatrixSeries matrix_series_from_json(const json& j);
// Lattice vector as "n1:n2:…" (a single integer for d = 1).
std::string label_text(const IVec& n);
json to_json(const LabelSet& ks, int digits);
// Rebuilds the set (schedule recomputed from M, s, depth; entries read back).
LabelSet label_set_from_json(const json& j);

json to_json(const LabelSetReport& r);
json to_json(const StepReport& r);
json to_json(const ReducibilityResult& r, bool with_steps);
json to_json(const ProbeResult& r);
json to_json(const PolyBoundsReport& r);

// "1..5", "-2,1,3" (d = 1) or "1,0;0,1" (vectors separated by ';').
std::vector<IVec> parse_labels(const std::string& spec, std::size_t d);
IVec parse_vector(const std::string& spec);

} // namespace qpsl::cli
