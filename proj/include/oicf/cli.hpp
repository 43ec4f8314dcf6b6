#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "oicf/analysis.hpp"

namespace oicf {

enum class OutputFormat : std::uint8_t { Csv, Svg, Text };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;

struct ReportRequest {
    std::string command;  // analyze, sweep, compare-attention, compare-moe, agent-profile, roofline-plot
    // Preset names or file paths. compare-moe takes a comma-separated model list and
    // agent-profile a comma-separated workload list.
    std::string model;
    std::string hardware;
    std::string workload;
    std::string phase = "both";  // prefill, decode, both
    std::string batch;           // value list, e.g. "1|16" or "1..64:log"
    std::string context;
    std::string grid;  // "B=1..64:log,L=1k..1m:log"
    std::filesystem::path out_dir = ".";
    std::set<OutputFormat> formats{OutputFormat::Text};
    std::filesystem::path catalog_dir;
    bool strict = false;              // CapacityExceeded rows make the run exit 3
    bool allow_unknown_keys = false;  // relax config schema checking
    AnalysisOptions analysis;
    std::uint64_t kv_heads = 8;
    std::uint64_t d_latent = 512;
    std::uint64_t d_rope = 64;
};

std::set<OutputFormat> parse_formats(const std::string& text);

// Writes <out_dir>/<command>.{csv,svg,txt} for the requested formats; text is also
// echoed to `out`. Returns one of the kExit* codes; diagnostics go to `err`.
int run(const ReportRequest& request, std::ostream& out, std::ostream& err);

// Catalog location baked in at build time.
std::filesystem::path default_catalog_dir();

}  // namespace oicf
