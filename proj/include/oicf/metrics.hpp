#pragma once

#include <cstdint>

#include "oicf/model_arch.hpp"

namespace oicf {

struct OperatingPoint {
    // Decode: current context length. Prefill: number of prompt tokens ingested.
    std::uint64_t context_len = 1;
    std::uint64_t batch_size = 1;
    Phase phase = Phase::Decode;
    // Prefill only: tokens already cached ahead of the prompt (earlier agent turns).
    std::uint64_t cached_prefix = 0;

    bool operator==(const OperatingPoint&) const = default;
};

void validate(const OperatingPoint& point);

// Tokens whose KV state a request holds once the point has been processed.
std::uint64_t resident_context(const OperatingPoint& point);

struct MetricsOptions {
    // Adds a per-request activation buffer (input and output of one layer, for every
    // token in flight) to CF. Off by default: activations are assumed on-chip.
    bool include_activations = false;
};

struct PhaseMetrics {
    double oi = 0.0;               // FLOPs per byte moved from off-chip memory
    double cf = 0.0;               // bytes resident per request
    double flops_per_token = 0.0;
    double bytes_per_token = 0.0;
};

// Generic Y = W X with W: m x d, X: d x L, counting every element of W, X and Y
// as one transfer. Result is in FLOPs per element.
double oi_matmul(std::uint64_t m, std::uint64_t d, std::uint64_t L);
double oi_matmul_bytes(std::uint64_t m, std::uint64_t d, std::uint64_t L, double element_bytes);

double activation_bytes_per_request(const ModelSpec& spec, const OperatingPoint& point);

// kv_bytes_per_token * resident_context + weight_bytes / batch (+ activations).
double cf_request(const ModelSpec& spec, const OperatingPoint& point, const MetricsOptions& opts = {});

PhaseMetrics decode_metrics(const ModelSpec& spec, const OperatingPoint& point,
                            const MetricsOptions& opts = {});
PhaseMetrics prefill_metrics(const ModelSpec& spec, const OperatingPoint& point,
                             const MetricsOptions& opts = {});

// Dispatches on point.phase.
PhaseMetrics phase_metrics(const ModelSpec& spec, const OperatingPoint& point,
                           const MetricsOptions& opts = {});

}  // namespace oicf
