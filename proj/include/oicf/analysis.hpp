#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oicf/hardware.hpp"
#include "oicf/metrics.hpp"
#include "oicf/model_arch.hpp"
#include "oicf/workload.hpp"

namespace oicf {

// Capacity-extended roofline regions.
//   ComputeBound      OI at the point reaches the ridge.
//   BandwidthBound    below the ridge, but some feasible larger batch reaches it.
//   CapacityLimited   below the ridge and no batch that fits in memory reaches it.
//   CapacityExceeded  a single request does not fit in aggregate memory.
enum class BoundClass : std::uint8_t { ComputeBound, BandwidthBound, CapacityLimited, CapacityExceeded };

const char* to_string(BoundClass bound);

enum class WeightPlacement : std::uint8_t {
    Shared,      // one copy of the weights across all devices (lower bound)
    Replicated,  // a full copy on every device (upper bound)
};

struct AnalysisOptions {
    WeightPlacement placement = WeightPlacement::Shared;
    MetricsOptions metrics;
};

struct PhaseAnalysis {
    OperatingPoint point;
    PhaseMetrics metrics;
    BoundClass bound = BoundClass::CapacityExceeded;
    double ridge = 0.0;
    // Per-device roofline rate at the effective batch; zero when capacity is exceeded.
    double attainable_flops = 0.0;
    // Aggregate over all devices.
    double attainable_tokens_per_s = 0.0;
    double mfu_est = 0.0;
    double mbu_est = 0.0;
    std::uint64_t max_feasible_batch = 0;
    // nullopt when no device count can hold the point (replicated weights larger
    // than one device).
    std::optional<std::uint64_t> min_devices;
    // Whether point.batch_size itself fits; ComputeBound only checks a single request.
    bool batch_fits = false;
    // Batch the utilization estimates refer to: the point's own batch, or
    // max_feasible_batch for CapacityLimited.
    std::uint64_t effective_batch = 0;
};

// Bits one request keeps resident at the point (KV cache plus optional activations).
std::uint64_t request_footprint_bits(const ModelSpec& spec, const OperatingPoint& point,
                                     const MetricsOptions& opts = {});

// Largest batch whose footprint fits in hw's aggregate memory; 0 if not even one
// request fits. point.batch_size is ignored.
std::uint64_t max_feasible_batch(const ModelSpec& spec, const HardwareSpec& hw,
                                 const OperatingPoint& point, const AnalysisOptions& opts = {});

// Decode-context shorthand.
std::uint64_t max_feasible_batch(const ModelSpec& spec, const HardwareSpec& hw,
                                 std::uint64_t context_len, const AnalysisOptions& opts = {});

// Smallest device count (hw.num_devices ignored) that holds point.batch_size requests.
std::optional<std::uint64_t> min_devices(const ModelSpec& spec, const HardwareSpec& hw,
                                         const OperatingPoint& point,
                                         const AnalysisOptions& opts = {});

PhaseAnalysis classify(const ModelSpec& spec, const HardwareSpec& hw, const OperatingPoint& point,
                       const AnalysisOptions& opts = {});

struct Grid {
    std::vector<Phase> phases;
    std::vector<std::uint64_t> batches;
    std::vector<std::uint64_t> contexts;

    std::size_t size() const { return phases.size() * batches.size() * contexts.size(); }
};

struct SweepRow {
    std::string label;
    PhaseAnalysis analysis;
};

// Whole-trace aggregates for one agent workload.
struct AgentSummary {
    std::string workload;
    TokenTotals tokens;
    std::uint64_t turns = 0;
    std::uint64_t final_context = 0;
    // Total FLOPs over total bytes across every token of the phase.
    double prefill_oi = 0.0;
    double decode_oi = 0.0;
    // CF at the final context and the workload batch.
    double peak_cf = 0.0;
    // Classification of the last decode step (or last prefill if nothing is decoded).
    BoundClass final_bound = BoundClass::CapacityExceeded;
};

struct SweepResult {
    std::string model;
    std::string hardware;
    std::vector<SweepRow> rows;
    std::optional<AgentSummary> summary;
};

// Rows ordered by phase, then batch, then context, following the grid's own order.
SweepResult sweep(const ModelSpec& spec, const HardwareSpec& hw, const Grid& grid,
                  const AnalysisOptions& opts = {});

// Per turn: one prefill row (with the carried prefix) and one decode row at the
// turn's last decode context; plus the whole-trace summary.
SweepResult sweep(const ModelSpec& spec, const HardwareSpec& hw, const TurnTrace& trace,
                  const AnalysisOptions& opts = {});

AgentSummary summarize(const ModelSpec& spec, const HardwareSpec& hw, const TurnTrace& trace,
                       const AnalysisOptions& opts = {});

}  // namespace oicf
