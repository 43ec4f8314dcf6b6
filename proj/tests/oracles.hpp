#pragma once

// Reference computations that share no code with the library. They enumerate
// matrices, loop over layers and heads, and tally operations one unit at a time.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oicf/model_arch.hpp"

namespace oracle {

struct Matrix {
    std::string name;
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    bool active = true;      // touched by every token
    bool multiplied = true;  // a real matmul (false for the embedding gather)
};

inline std::vector<Matrix> enumerate_matrices(const oicf::ModelSpec& s) {
    std::vector<Matrix> out;
    const std::uint64_t d = s.d_model;
    const std::uint64_t q = s.num_heads * s.head_dim;
    out.push_back({"embed", s.vocab_size, d, true, false});
    const std::uint64_t ffn_mats = s.ffn_gated ? 3 : 2;
    for (std::uint64_t layer = 0; layer < s.num_layers; ++layer) {
        out.push_back({"wq", d, q});
        if (std::holds_alternative<oicf::MultiHead>(s.attention)) {
            for (std::uint64_t h = 0; h < s.num_heads; ++h) {
                out.push_back({"wk", d, s.head_dim});
                out.push_back({"wv", d, s.head_dim});
            }
        } else if (const auto* g = std::get_if<oicf::GroupedQuery>(&s.attention)) {
            for (std::uint64_t h = 0; h < g->num_kv_heads; ++h) {
                out.push_back({"wk", d, s.head_dim});
                out.push_back({"wv", d, s.head_dim});
            }
        } else {
            const auto& m = std::get<oicf::LatentKV>(s.attention);
            out.push_back({"wkv_down", d, m.d_latent + m.d_rope});
        }
        out.push_back({"wo", q, d});
        if (!s.moe) {
            for (std::uint64_t i = 0; i < ffn_mats; ++i) out.push_back({"ffn", d, s.d_ff});
            continue;
        }
        const auto& e = *s.moe;
        for (std::uint64_t x = 0; x < e.num_experts; ++x) {
            const bool routed = x < e.top_k;
            for (std::uint64_t i = 0; i < ffn_mats; ++i) out.push_back({"expert", d, e.d_ff_expert, routed, routed});
        }
        for (std::uint64_t x = 0; x < e.num_shared_experts; ++x) {
            for (std::uint64_t i = 0; i < ffn_mats; ++i) out.push_back({"shared", d, e.d_ff_expert});
        }
        out.push_back({"router", d, e.num_experts});
    }
    out.push_back({"head", d, s.vocab_size});
    return out;
}

inline std::uint64_t total_params(const oicf::ModelSpec& s) {
    std::uint64_t n = 0;
    for (const auto& m : enumerate_matrices(s)) n += m.rows * m.cols;
    return n;
}

inline std::uint64_t activated_params(const oicf::ModelSpec& s) {
    std::uint64_t n = 0;
    for (const auto& m : enumerate_matrices(s))
        if (m.active) n += m.rows * m.cols;
    return n;
}

// Per-token FLOPs by explicit loops: every activated matmul contributes one
// multiply and one add per weight; each head does QK^T and PV over the context.
inline std::uint64_t flops_per_token(const oicf::ModelSpec& s, std::uint64_t context) {
    std::uint64_t f = 0;
    for (const auto& m : enumerate_matrices(s)) {
        if (!m.active || !m.multiplied) continue;
        for (std::uint64_t r = 0; r < m.rows; ++r) f += 2 * m.cols;
    }
    for (std::uint64_t layer = 0; layer < s.num_layers; ++layer) {
        for (std::uint64_t h = 0; h < s.num_heads; ++h) {
            for (std::uint64_t t = 0; t < context; ++t) {
                f += 2 * s.head_dim;  // q . k_t
                f += 2 * s.head_dim;  // p_t * v_t
            }
        }
    }
    return f;
}

// KV bytes per token, summed layer by layer and head by head.
inline std::uint64_t kv_bits_per_token(const oicf::ModelSpec& s) {
    std::uint64_t bits = 0;
    for (std::uint64_t layer = 0; layer < s.num_layers; ++layer) {
        if (const auto* m = std::get_if<oicf::LatentKV>(&s.attention)) {
            bits += (m->d_latent + m->d_rope) * s.kv_bits;
            continue;
        }
        std::uint64_t kv_heads = s.num_heads;
        if (const auto* g = std::get_if<oicf::GroupedQuery>(&s.attention)) kv_heads = g->num_kv_heads;
        for (std::uint64_t h = 0; h < kv_heads; ++h) {
            bits += s.head_dim * s.kv_bits;  // K
            bits += s.head_dim * s.kv_bits;  // V
        }
    }
    return bits;
}

// Y = W X, W: m x d, X: d x L. Operations are tallied per output row and
// transfers per operand row or column.
struct Tally {
    std::uint64_t ops = 0;
    std::uint64_t transfers = 0;
};

inline Tally matmul_tally(std::uint64_t m, std::uint64_t d, std::uint64_t L) {
    Tally t;
    for (std::uint64_t i = 0; i < m; ++i) t.ops += 2 * d * L;  // L outputs, d MACs each
    for (std::uint64_t i = 0; i < m; ++i) t.transfers += d;    // W row
    for (std::uint64_t j = 0; j < L; ++j) t.transfers += d;    // X column
    for (std::uint64_t i = 0; i < m; ++i) t.transfers += L;    // Y row
    return t;
}

inline oicf::ModelSpec random_spec(std::mt19937_64& rng) {
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    };
    static constexpr unsigned kBits[] = {4, 8, 16, 32};
    oicf::ModelSpec s;
    s.name = "random";
    s.num_layers = pick(1, 6);
    s.d_model = pick(1, 64);
    s.num_heads = pick(1, 8);
    s.head_dim = pick(1, 16);
    switch (pick(0, 2)) {
        case 0: s.attention = oicf::MultiHead{}; break;
        case 1: {
            std::vector<std::uint64_t> divisors;
            for (std::uint64_t k = 1; k <= s.num_heads; ++k)
                if (s.num_heads % k == 0) divisors.push_back(k);
            s.attention = oicf::GroupedQuery{divisors[pick(0, divisors.size() - 1)]};
            break;
        }
        default: s.attention = oicf::LatentKV{pick(1, 32), pick(0, 8)};
    }
    s.d_ff = pick(1, 128);
    s.ffn_gated = pick(0, 1) == 1;
    if (pick(0, 2) == 0) {
        oicf::MoESpec e;
        e.num_experts = pick(1, 8);
        e.top_k = pick(1, e.num_experts);
        e.num_shared_experts = pick(0, 2);
        e.d_ff_expert = pick(1, 64);
        s.moe = e;
    }
    s.vocab_size = pick(0, 100);
    s.weight_bits = kBits[pick(0, 3)];
    s.kv_bits = kBits[pick(0, 3)];
    return s;
}

}  // namespace oracle
