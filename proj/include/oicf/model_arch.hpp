#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace oicf {

// Raised when a descriptor violates one of its structural invariants.
class InvalidSpec : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

enum class Phase : std::uint8_t { Prefill, Decode };

const char* to_string(Phase phase);

struct MultiHead {
    bool operator==(const MultiHead&) const = default;
};

struct GroupedQuery {
    std::uint64_t num_kv_heads = 1;
    bool operator==(const GroupedQuery&) const = default;
};

// Compressed latent KV (one joint latent vector plus a decoupled rope key per token).
struct LatentKV {
    std::uint64_t d_latent = 512;
    std::uint64_t d_rope = 64;
    bool operator==(const LatentKV&) const = default;
};

using AttentionKind = std::variant<MultiHead, GroupedQuery, LatentKV>;

const char* attention_name(const AttentionKind& kind);

struct MoESpec {
    std::uint64_t num_experts = 0;
    std::uint64_t top_k = 1;
    std::uint64_t num_shared_experts = 0;
    std::uint64_t d_ff_expert = 0;
    bool operator==(const MoESpec&) const = default;
};

struct ModelSpec {
    std::string name;
    std::uint64_t num_layers = 1;
    std::uint64_t d_model = 1;
    std::uint64_t num_heads = 1;
    std::uint64_t head_dim = 1;
    AttentionKind attention = MultiHead{};
    std::uint64_t d_ff = 1;
    bool ffn_gated = false;
    std::optional<MoESpec> moe;
    std::uint64_t vocab_size = 0;
    unsigned weight_bits = 16;
    unsigned kv_bits = 16;
    // Precision whose peak rate applies on the roofline; weight_bits when unset.
    std::optional<unsigned> compute_bits;

    unsigned effective_compute_bits() const { return compute_bits.value_or(weight_bits); }
    bool is_moe() const { return moe.has_value(); }

    bool operator==(const ModelSpec&) const = default;
};

bool is_supported_bit_width(unsigned bits);

// Throws InvalidSpec naming the offending field(s).
void validate(const ModelSpec& spec);

// Parameter accounting. Layer norms and biases are not counted.
std::uint64_t embedding_params(const ModelSpec& spec);
std::uint64_t attention_params_per_layer(const ModelSpec& spec);
std::uint64_t ffn_params_per_layer(const ModelSpec& spec);
std::uint64_t active_ffn_params_per_layer(const ModelSpec& spec);
std::uint64_t total_params(const ModelSpec& spec);
std::uint64_t activated_params(const ModelSpec& spec);

// Width of one token's cached KV state in elements, per layer.
std::uint64_t kv_elements_per_token_per_layer(const ModelSpec& spec);

// Exact storage in bits; the byte views below divide these by 8 once.
std::uint64_t weight_storage_bits(const ModelSpec& spec);
std::uint64_t kv_cache_bits_per_token(const ModelSpec& spec);

double weight_bytes(const ModelSpec& spec);
double kv_bytes_per_token(const ModelSpec& spec);

// 2 FLOPs per multiply-accumulate over the activated linear layers (embedding
// lookup excluded) plus 4·layers·heads·head_dim·context for QK^T and PV.
// Throws std::invalid_argument when context_len is 0.
double flops_per_token(const ModelSpec& spec, Phase phase, std::uint64_t context_len);

// Linear-layer part of flops_per_token; independent of context.
std::uint64_t linear_flops_per_token(const ModelSpec& spec);
// Attention-score FLOPs per unit of context: 4·layers·heads·head_dim.
std::uint64_t attention_flops_per_context_token(const ModelSpec& spec);

}  // namespace oicf
