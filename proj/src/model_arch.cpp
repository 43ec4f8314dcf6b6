#include "oicf/model_arch.hpp"

#include <string>

namespace oicf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t ffn_matrix_count(const ModelSpec& spec) { return spec.ffn_gated ? 3 : 2; }

// K and V projection widths combined, in output columns.
std::uint64_t kv_projection_columns(const ModelSpec& spec) {
    return std::visit(overloaded{
                          [&](const MultiHead&) { return 2 * spec.num_heads * spec.head_dim; },
                          [&](const GroupedQuery& g) { return 2 * g.num_kv_heads * spec.head_dim; },
                          // single joint down-projection; up-projections fold into Q/O
                          [&](const LatentKV& l) { return l.d_latent + l.d_rope; },
                      },
                      spec.attention);
}

std::uint64_t router_params_per_layer(const ModelSpec& spec) {
    return spec.moe ? spec.d_model * spec.moe->num_experts : 0;
}

}  // namespace

const char* to_string(Phase phase) { return phase == Phase::Prefill ? "prefill" : "decode"; }

const char* attention_name(const AttentionKind& kind) {
    return std::visit(overloaded{
                          [](const MultiHead&) { return "mha"; },
                          [](const GroupedQuery&) { return "gqa"; },
                          [](const LatentKV&) { return "mla"; },
                      },
                      kind);
}

bool is_supported_bit_width(unsigned bits) {
    return bits == 2 || bits == 4 || bits == 8 || bits == 16 || bits == 32;
}

void validate(const ModelSpec& spec) {
    auto require_positive = [](std::uint64_t v, const char* field) {
        if (v == 0) throw InvalidSpec(std::string(field) + " must be positive");
    };
    require_positive(spec.num_layers, "num_layers");
    require_positive(spec.d_model, "d_model");
    require_positive(spec.num_heads, "num_heads");
    require_positive(spec.head_dim, "head_dim");
    require_positive(spec.d_ff, "d_ff");
    if (!is_supported_bit_width(spec.weight_bits))
        throw InvalidSpec("weight_bits must be one of 2,4,8,16,32 (got " +
                          std::to_string(spec.weight_bits) + ")");
    if (!is_supported_bit_width(spec.kv_bits))
        throw InvalidSpec("kv_bits must be one of 2,4,8,16,32 (got " + std::to_string(spec.kv_bits) +
                          ")");
    if (spec.compute_bits && !is_supported_bit_width(*spec.compute_bits))
        throw InvalidSpec("compute_bits must be one of 2,4,8,16,32 (got " +
                          std::to_string(*spec.compute_bits) + ")");

    if (const auto* g = std::get_if<GroupedQuery>(&spec.attention)) {
        if (g->num_kv_heads < 1 || g->num_kv_heads > spec.num_heads)
            throw InvalidSpec("attention.num_kv_heads must be in [1, num_heads]");
        if (spec.num_heads % g->num_kv_heads != 0)
            throw InvalidSpec("num_heads must be divisible by attention.num_kv_heads");
    }
    if (const auto* l = std::get_if<LatentKV>(&spec.attention)) {
        if (l->d_latent == 0) throw InvalidSpec("attention.d_latent must be positive");
    }

    if (spec.moe) {
        const auto& m = *spec.moe;
        if (m.num_experts == 0) throw InvalidSpec("moe.num_experts must be positive");
        if (m.top_k < 1) throw InvalidSpec("moe.top_k must be at least 1");
        if (m.top_k > m.num_experts)
            throw InvalidSpec("moe.top_k (" + std::to_string(m.top_k) +
                              ") must not exceed moe.num_experts (" +
                              std::to_string(m.num_experts) + ")");
        if (m.d_ff_expert == 0) throw InvalidSpec("moe.d_ff_expert must be positive");
    }
}

std::uint64_t embedding_params(const ModelSpec& spec) { return spec.vocab_size * spec.d_model; }

std::uint64_t attention_params_per_layer(const ModelSpec& spec) {
    const std::uint64_t q_width = spec.num_heads * spec.head_dim;
    return spec.d_model * q_width + spec.d_model * kv_projection_columns(spec) +
           q_width * spec.d_model;
}

std::uint64_t ffn_params_per_layer(const ModelSpec& spec) {
    const std::uint64_t per_matrix_group = ffn_matrix_count(spec) * spec.d_model;
    if (!spec.moe) return per_matrix_group * spec.d_ff;
    const auto& m = *spec.moe;
    return (m.num_experts + m.num_shared_experts) * per_matrix_group * m.d_ff_expert +
           router_params_per_layer(spec);
}

std::uint64_t active_ffn_params_per_layer(const ModelSpec& spec) {
    if (!spec.moe) return ffn_params_per_layer(spec);
    const auto& m = *spec.moe;
    return (m.top_k + m.num_shared_experts) * ffn_matrix_count(spec) * spec.d_model *
               m.d_ff_expert +
           router_params_per_layer(spec);
}

std::uint64_t total_params(const ModelSpec& spec) {
    // input embedding + output head, untied
    return 2 * embedding_params(spec) +
           spec.num_layers * (attention_params_per_layer(spec) + ffn_params_per_layer(spec));
}

std::uint64_t activated_params(const ModelSpec& spec) {
    return 2 * embedding_params(spec) +
           spec.num_layers * (attention_params_per_layer(spec) + active_ffn_params_per_layer(spec));
}

std::uint64_t kv_elements_per_token_per_layer(const ModelSpec& spec) {
    return kv_projection_columns(spec);
}

std::uint64_t weight_storage_bits(const ModelSpec& spec) {
    return total_params(spec) * spec.weight_bits;
}

std::uint64_t kv_cache_bits_per_token(const ModelSpec& spec) {
    return spec.num_layers * kv_elements_per_token_per_layer(spec) * spec.kv_bits;
}

double weight_bytes(const ModelSpec& spec) {
    return static_cast<double>(weight_storage_bits(spec)) / 8.0;
}

double kv_bytes_per_token(const ModelSpec& spec) {
    return static_cast<double>(kv_cache_bits_per_token(spec)) / 8.0;
}

std::uint64_t linear_flops_per_token(const ModelSpec& spec) {
    return 2 * (activated_params(spec) - embedding_params(spec));
}

std::uint64_t attention_flops_per_context_token(const ModelSpec& spec) {
    return 4 * spec.num_layers * spec.num_heads * spec.head_dim;
}

double flops_per_token(const ModelSpec& spec, Phase /*phase*/, std::uint64_t context_len) {
    if (context_len == 0) throw std::invalid_argument("context_len must be at least 1");
    // Both phases evaluate at the token's own running context; prefill callers
    // integrate over positions.
    return static_cast<double>(linear_flops_per_token(spec)) +
           static_cast<double>(attention_flops_per_context_token(spec)) *
               static_cast<double>(context_len);
}

}  // namespace oicf
