#include "oicf/analysis.hpp"

#include <limits>
#include <stdexcept>

namespace oicf {

namespace {

using wide = unsigned __int128;

constexpr std::uint64_t kMaxCount = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturate(wide v) { return v > wide{kMaxCount} ? kMaxCount : static_cast<std::uint64_t>(v); }

wide ceil_div(wide num, wide den) { return (num + den - 1) / den; }

}  // namespace

const char* to_string(BoundClass bound) {
    switch (bound) {
        case BoundClass::ComputeBound: return "compute-bound";
        case BoundClass::BandwidthBound: return "bandwidth-bound";
        case BoundClass::CapacityLimited: return "capacity-limited";
        case BoundClass::CapacityExceeded: return "capacity-exceeded";
    }
    return "unknown";
}

std::uint64_t request_footprint_bits(const ModelSpec& spec, const OperatingPoint& point,
                                     const MetricsOptions& opts) {
    std::uint64_t bits = kv_cache_bits_per_token(spec) * resident_context(point);
    if (opts.include_activations) {
        const std::uint64_t in_flight = point.phase == Phase::Prefill ? point.context_len : 1;
        bits += 2 * spec.d_model * in_flight * spec.weight_bits;
    }
    return bits;
}

std::uint64_t max_feasible_batch(const ModelSpec& spec, const HardwareSpec& hw,
                                 const OperatingPoint& point, const AnalysisOptions& opts) {
    const wide capacity = wide{hw.mem_capacity} * hw.num_devices * 8;
    const wide weights = opts.placement == WeightPlacement::Shared
                             ? wide{weight_storage_bits(spec)}
                             : wide{weight_storage_bits(spec)} * hw.num_devices;
    if (weights >= capacity) return 0;
    const wide per_request = request_footprint_bits(spec, point, opts.metrics);
    return saturate((capacity - weights) / per_request);
}

std::uint64_t max_feasible_batch(const ModelSpec& spec, const HardwareSpec& hw,
                                 std::uint64_t context_len, const AnalysisOptions& opts) {
    return max_feasible_batch(spec, hw, OperatingPoint{context_len, 1, Phase::Decode, 0}, opts);
}

std::optional<std::uint64_t> min_devices(const ModelSpec& spec, const HardwareSpec& hw,
                                         const OperatingPoint& point, const AnalysisOptions& opts) {
    validate(point);
    const wide device_bits = wide{hw.mem_capacity} * 8;
    const wide weights = weight_storage_bits(spec);
    const wide requests = wide{request_footprint_bits(spec, point, opts.metrics)} * point.batch_size;
    wide k = 0;
    if (opts.placement == WeightPlacement::Shared) {
        k = ceil_div(weights + requests, device_bits);
    } else {
        if (weights >= device_bits) return std::nullopt;
        k = ceil_div(requests, device_bits - weights);
    }
    return k < 1 ? std::uint64_t{1} : saturate(k);
}

PhaseAnalysis classify(const ModelSpec& spec, const HardwareSpec& hw, const OperatingPoint& point,
                       const AnalysisOptions& opts) {
    const unsigned bits = spec.effective_compute_bits();
    PhaseAnalysis out;
    out.point = point;
    out.ridge = ridge_point(hw, bits);
    out.metrics = phase_metrics(spec, point, opts.metrics);
    out.max_feasible_batch = max_feasible_batch(spec, hw, point, opts);
    out.min_devices = min_devices(spec, hw, point, opts);
    out.batch_fits = point.batch_size <= out.max_feasible_batch;

    const double peak = hw.peak(bits);
    if (out.max_feasible_batch == 0) {
        out.bound = BoundClass::CapacityExceeded;
        return out;
    }
    if (out.metrics.oi >= out.ridge) {
        out.bound = BoundClass::ComputeBound;
        out.effective_batch = point.batch_size;
        out.mfu_est = 1.0;
        out.mbu_est = out.ridge / out.metrics.oi;
        out.attainable_flops = peak;
    } else {
        OperatingPoint widest = point;
        widest.batch_size = out.max_feasible_batch;
        const double ceiling_oi = phase_metrics(spec, widest, opts.metrics).oi;
        if (ceiling_oi >= out.ridge) {
            out.bound = BoundClass::BandwidthBound;
            out.effective_batch = point.batch_size;
            out.mfu_est = out.metrics.oi / out.ridge;
            out.attainable_flops = attainable_flops(hw, bits, out.metrics.oi);
        } else {
            out.bound = BoundClass::CapacityLimited;
            out.effective_batch = out.max_feasible_batch;
            out.mfu_est = ceiling_oi / out.ridge;
            out.attainable_flops = attainable_flops(hw, bits, ceiling_oi);
        }
        out.mbu_est = 1.0;
    }
    out.attainable_tokens_per_s = out.attainable_flops / out.metrics.flops_per_token *
                                  static_cast<double>(hw.num_devices);
    return out;
}

SweepResult sweep(const ModelSpec& spec, const HardwareSpec& hw, const Grid& grid,
                  const AnalysisOptions& opts) {
    if (grid.size() == 0) throw std::invalid_argument("sweep grid is empty");
    SweepResult result{spec.name, hw.name, {}, std::nullopt};
    result.rows.reserve(grid.size());
    for (Phase phase : grid.phases) {
        for (std::uint64_t batch : grid.batches) {
            for (std::uint64_t context : grid.contexts) {
                const OperatingPoint point{context, batch, phase, 0};
                result.rows.push_back({"grid", classify(spec, hw, point, opts)});
            }
        }
    }
    return result;
}

AgentSummary summarize(const ModelSpec& spec, const HardwareSpec& hw, const TurnTrace& trace,
                       const AnalysisOptions& opts) {
    if (trace.turns.empty()) throw std::invalid_argument("workload trace is empty");
    AgentSummary s;
    s.workload = trace.workload;
    s.tokens = total_tokens(trace);
    s.turns = trace.turns.size();
    s.final_context = trace.final_context();

    const double batch = static_cast<double>(trace.batch_size);
    const double kv = kv_bytes_per_token(spec);
    const double linear = static_cast<double>(linear_flops_per_token(spec));
    const double attn = static_cast<double>(attention_flops_per_context_token(spec));
    const double weights_per_step = weight_bytes(spec) / batch;

    double prefill_flops = 0.0, prefill_bytes = 0.0, decode_flops = 0.0, decode_bytes = 0.0;
    std::optional<OperatingPoint> last;
    for (const auto& t : trace.turns) {
        if (t.prefill_tokens > 0) {
            const OperatingPoint p{t.prefill_tokens, trace.batch_size, Phase::Prefill,
                                   t.prefill_start_context};
            const auto m = prefill_metrics(spec, p, opts.metrics);
            const auto n = static_cast<double>(t.prefill_tokens);
            prefill_flops += m.flops_per_token * n;
            prefill_bytes += m.bytes_per_token * n;
            last = p;
        }
        if (t.decode_tokens > 0) {
            // sum of the consecutive decode contexts in closed form
            const auto n = static_cast<double>(t.decode_tokens);
            const double ctx_sum = n * static_cast<double>(t.decode_first_context) + n * (n - 1) / 2;
            decode_flops += n * linear + attn * ctx_sum;
            decode_bytes += n * (weights_per_step + kv) + kv * ctx_sum;
            last = OperatingPoint{t.decode_last_context(), trace.batch_size, Phase::Decode, 0};
        }
    }
    if (prefill_bytes > 0) s.prefill_oi = prefill_flops / prefill_bytes;
    if (decode_bytes > 0) s.decode_oi = decode_flops / decode_bytes;
    if (last) {
        s.peak_cf = cf_request(spec, *last, opts.metrics);
        s.final_bound = classify(spec, hw, *last, opts).bound;
    }
    return s;
}

SweepResult sweep(const ModelSpec& spec, const HardwareSpec& hw, const TurnTrace& trace,
                  const AnalysisOptions& opts) {
    SweepResult result{spec.name, hw.name, {}, std::nullopt};
    for (const auto& t : trace.turns) {
        const std::string prefix = "turn" + std::to_string(t.turn_index + 1);
        if (t.prefill_tokens > 0) {
            const OperatingPoint p{t.prefill_tokens, trace.batch_size, Phase::Prefill,
                                   t.prefill_start_context};
            result.rows.push_back({prefix, classify(spec, hw, p, opts)});
        }
        if (t.decode_tokens > 0) {
            const OperatingPoint p{t.decode_last_context(), trace.batch_size, Phase::Decode, 0};
            result.rows.push_back({prefix, classify(spec, hw, p, opts)});
        }
    }
    result.summary = summarize(spec, hw, trace, opts);
    return result;
}

}  // namespace oicf
