#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "oicf/analysis.hpp"
#include "oicf/hardware.hpp"
#include "oicf/model_arch.hpp"

namespace oicf {

// Full round-trip precision, used in CSV.
std::string format_full(double v);
// Six significant digits, used in text and SVG.
std::string format_sig(double v);

// "4096", "8k" (x1e3), "1m" (x1e6), "1.5k".
std::uint64_t parse_count(std::string_view text);
// "4096", "1|16|64", "1..8" (step 1), "1k..1m:log" (doubling, hi appended).
std::vector<std::uint64_t> parse_values(std::string_view text);
// "B=1..64:log,L=1k..1m:log"; an omitted axis falls back to the given defaults.
Grid parse_grid(std::string_view text, std::vector<Phase> phases,
                std::vector<std::uint64_t> default_batches = {1},
                std::vector<std::uint64_t> default_contexts = {4096});

const char* bound_color(BoundClass bound);

// Sweep CSV: one row per PhaseAnalysis, header first, columns documented in
// docs/schemas.md.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_summary_csv(std::ostream& out, const std::vector<AgentSummary>& summaries);
std::string sweep_text(const SweepResult& result);

// MHA / GQA / MLA variants of one base architecture, all other fields equal.
struct AttentionComparison {
    std::vector<ModelSpec> variants;
    std::vector<std::uint64_t> contexts;
    std::uint64_t batch = 1;
    // [variant][context]
    std::vector<std::vector<double>> cf;
    std::vector<std::vector<double>> kv_bytes;
};

std::vector<ModelSpec> attention_variants(const ModelSpec& base, std::uint64_t kv_heads,
                                          std::uint64_t d_latent, std::uint64_t d_rope);
AttentionComparison compare_attention(const ModelSpec& base, std::vector<std::uint64_t> contexts,
                                      std::uint64_t batch, std::uint64_t kv_heads = 8,
                                      std::uint64_t d_latent = 512, std::uint64_t d_rope = 64);
void write_attention_csv(std::ostream& out, const AttentionComparison& cmp);
std::string attention_svg(const AttentionComparison& cmp, const HardwareSpec* hw);

struct MoERow {
    std::string model;
    bool moe = false;
    std::uint64_t batch = 1;
    std::uint64_t context = 1;
    std::uint64_t total_params = 0;
    std::uint64_t activated_params = 0;
    double weight_share = 0.0;  // weight_bytes / batch
    double kv_bytes = 0.0;      // kv_bytes_per_token * context
    double cf = 0.0;
    double decode_oi = 0.0;
};

std::vector<MoERow> compare_moe(const std::vector<ModelSpec>& specs,
                                const std::vector<std::uint64_t>& batches, std::uint64_t context);
void write_moe_csv(std::ostream& out, const std::vector<MoERow>& rows);
std::string moe_svg(const std::vector<MoERow>& rows);

std::string agent_profile_svg(const std::vector<AgentSummary>& summaries, const HardwareSpec& hw,
                              const ModelSpec& spec);

// Both roofline arms, the ridge, and every row as a point coloured by class.
std::string roofline_svg(const SweepResult& result, const ModelSpec& spec, const HardwareSpec& hw);

}  // namespace oicf
