#include "oicf/metrics.hpp"

#include <stdexcept>

namespace oicf {

void validate(const OperatingPoint& point) {
    if (point.context_len < 1) throw std::invalid_argument("context_len must be at least 1");
    if (point.batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
    if (point.phase == Phase::Decode && point.cached_prefix != 0)
        throw std::invalid_argument("cached_prefix applies to prefill points only");
}

std::uint64_t resident_context(const OperatingPoint& point) {
    return point.phase == Phase::Prefill ? point.cached_prefix + point.context_len : point.context_len;
}

double oi_matmul(std::uint64_t m, std::uint64_t d, std::uint64_t L) {
    if (m < 1 || d < 1 || L < 1) throw std::invalid_argument("matmul dimensions must be positive");
    using wide = unsigned __int128;
    const wide ops = wide{2} * m * d * L;
    const wide transfers = wide{m} * d + wide{d} * L + wide{m} * L;
    return static_cast<double>(static_cast<long double>(ops) / static_cast<long double>(transfers));
}

double oi_matmul_bytes(std::uint64_t m, std::uint64_t d, std::uint64_t L, double element_bytes) {
    if (!(element_bytes > 0.0)) throw std::invalid_argument("element_bytes must be positive");
    return oi_matmul(m, d, L) / element_bytes;
}

double activation_bytes_per_request(const ModelSpec& spec, const OperatingPoint& point) {
    const std::uint64_t in_flight = point.phase == Phase::Prefill ? point.context_len : 1;
    return static_cast<double>(2 * spec.d_model * in_flight * spec.weight_bits) / 8.0;
}

double cf_request(const ModelSpec& spec, const OperatingPoint& point, const MetricsOptions& opts) {
    validate(point);
    double cf = kv_bytes_per_token(spec) * static_cast<double>(resident_context(point)) +
                weight_bytes(spec) / static_cast<double>(point.batch_size);
    if (opts.include_activations) cf += activation_bytes_per_request(spec, point);
    return cf;
}

PhaseMetrics decode_metrics(const ModelSpec& spec, const OperatingPoint& point,
                            const MetricsOptions& opts) {
    validate(point);
    if (point.phase != Phase::Decode) throw std::invalid_argument("decode_metrics needs a decode point");
    const double kv = kv_bytes_per_token(spec);
    const auto L = static_cast<double>(point.context_len);
    PhaseMetrics out;
    out.flops_per_token = flops_per_token(spec, Phase::Decode, point.context_len);
    // weights amortized over the batch, full KV read, one KV write
    out.bytes_per_token = weight_bytes(spec) / static_cast<double>(point.batch_size) + kv * L + kv;
    out.oi = out.flops_per_token / out.bytes_per_token;
    out.cf = cf_request(spec, point, opts);
    return out;
}

PhaseMetrics prefill_metrics(const ModelSpec& spec, const OperatingPoint& point,
                             const MetricsOptions& opts) {
    validate(point);
    if (point.phase != Phase::Prefill)
        throw std::invalid_argument("prefill_metrics needs a prefill point");
    const double kv = kv_bytes_per_token(spec);
    const std::uint64_t L = point.context_len;
    const std::uint64_t prefix = point.cached_prefix;

    PhaseMetrics out;
    // Mean over prompt positions prefix+1 .. prefix+L of the per-position attention
    // term: 4c(prefix + (L+1)/2) = 2c(2·prefix + L + 1), exact in integers.
    const std::uint64_t attn_half = attention_flops_per_context_token(spec) / 2;
    out.flops_per_token = static_cast<double>(linear_flops_per_token(spec)) +
                          static_cast<double>(attn_half) * static_cast<double>(2 * prefix + L + 1);
    out.bytes_per_token =
        weight_bytes(spec) / (static_cast<double>(point.batch_size) * static_cast<double>(L)) + kv;
    if (prefix > 0)
        out.bytes_per_token += kv * static_cast<double>(prefix) / static_cast<double>(L);
    out.oi = out.flops_per_token / out.bytes_per_token;
    out.cf = cf_request(spec, point, opts);
    return out;
}

PhaseMetrics phase_metrics(const ModelSpec& spec, const OperatingPoint& point,
                           const MetricsOptions& opts) {
    return point.phase == Phase::Prefill ? prefill_metrics(spec, point, opts)
                                         : decode_metrics(spec, point, opts);
}

}  // namespace oicf
