#include <random>

#include "doctest.h"
#include "oicf/model_arch.hpp"
#include "oracles.hpp"

using namespace oicf;

namespace {

ModelSpec toy() {
    ModelSpec s;
    s.name = "toy";
    s.num_layers = 2;
    s.d_model = 4;
    s.num_heads = 2;
    s.head_dim = 2;
    s.d_ff = 8;
    return s;
}

ModelSpec attn48(AttentionKind attention) {
    ModelSpec s;
    s.name = "attn48";
    s.num_layers = 48;
    s.d_model = 2048;
    s.num_heads = 32;
    s.head_dim = 64;
    s.attention = attention;
    s.d_ff = 8192;
    s.ffn_gated = true;
    s.vocab_size = 32000;
    return s;
}

}  // namespace

TEST_CASE("toy spec parameter counts") {
    auto s = toy();
    // attention 4*4*4 = 64, ffn 2*4*8 = 64, two layers, no vocabulary
    CHECK(attention_params_per_layer(s) == 64);
    CHECK(ffn_params_per_layer(s) == 64);
    CHECK(total_params(s) == 256);
    CHECK(activated_params(s) == 256);
    CHECK(total_params(s) == oracle::total_params(s));
    s.vocab_size = 7;
    CHECK(embedding_params(s) == 28);
    CHECK(total_params(s) == 256 + 2 * 28);
}

TEST_CASE("frozen parameter totals") {
    CHECK(total_params(attn48(MultiHead{})) == 3352297472ULL);
    CHECK(oracle::total_params(attn48(MultiHead{})) == 3352297472ULL);
    CHECK(weight_bytes(attn48(MultiHead{})) == 6704594944.0);

    ModelSpec ds;
    ds.num_layers = 2;
    ds.d_model = 8;
    ds.num_heads = 2;
    ds.head_dim = 4;
    ds.d_ff = 16;
    ds.ffn_gated = true;
    ds.moe = MoESpec{4, 1, 1, 6};
    ds.vocab_size = 10;
    CHECK(total_params(ds) == 2176);
    CHECK(activated_params(ds) == 1312);
}

TEST_CASE("parameter accounting matches matrix enumeration on random specs") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        const auto s = oracle::random_spec(rng);
        REQUIRE_NOTHROW(validate(s));
        CHECK(total_params(s) == oracle::total_params(s));
        CHECK(activated_params(s) == oracle::activated_params(s));
        CHECK(kv_cache_bits_per_token(s) == oracle::kv_bits_per_token(s));
        CHECK(activated_params(s) <= total_params(s));
    }
}

TEST_CASE("flops per token matches the loop oracle") {
    auto s = toy();
    CHECK(flops_per_token(s, Phase::Decode, 5) == 672.0);
    CHECK(oracle::flops_per_token(s, 5) == 672);
    s.vocab_size = 7;  // the output head counts, the embedding gather does not
    CHECK(flops_per_token(s, Phase::Decode, 5) == 728.0);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto r = oracle::random_spec(rng);
        const std::uint64_t ctx = 1 + rng() % 300;
        CHECK(flops_per_token(r, Phase::Decode, ctx) == static_cast<double>(oracle::flops_per_token(r, ctx)));
        CHECK(flops_per_token(r, Phase::Prefill, ctx) == flops_per_token(r, Phase::Decode, ctx));
    }
}

TEST_CASE("flops per token rejects an empty context") {
    CHECK_THROWS_AS(flops_per_token(toy(), Phase::Decode, 0), std::invalid_argument);
}

TEST_CASE("KV cache per token") {
    CHECK(kv_bytes_per_token(attn48(MultiHead{})) == 393216.0);
    CHECK(kv_bytes_per_token(attn48(GroupedQuery{8})) == 98304.0);
    CHECK(kv_bytes_per_token(attn48(LatentKV{512, 64})) == 55296.0);
    CHECK(kv_bytes_per_token(attn48(MultiHead{})) / kv_bytes_per_token(attn48(GroupedQuery{8})) == 4.0);
}

TEST_CASE("GQA with one group per head is MHA") {
    const auto mha = attn48(MultiHead{});
    const auto gqa = attn48(GroupedQuery{32});
    CHECK(total_params(mha) == total_params(gqa));
    CHECK(kv_cache_bits_per_token(mha) == kv_cache_bits_per_token(gqa));
    CHECK(flops_per_token(mha, Phase::Decode, 1000) == flops_per_token(gqa, Phase::Decode, 1000));
}

TEST_CASE("MoE activated share shrinks with top_k") {
    auto s = attn48(GroupedQuery{8});
    s.moe = MoESpec{8, 2, 0, 8192};
    const auto two = activated_params(s);
    s.moe->top_k = 1;
    const auto one = activated_params(s);
    CHECK(one < two);
    CHECK(two - one == s.num_layers * 3 * s.d_model * 8192);
    s.moe->top_k = 8;
    CHECK(activated_params(s) == total_params(s));
}

TEST_CASE("quantized storage is exact") {
    auto s = attn48(MultiHead{});
    s.weight_bits = 4;
    s.kv_bits = 8;
    CHECK(weight_storage_bits(s) == total_params(s) * 4);
    CHECK(kv_bytes_per_token(s) == 196608.0);
}

TEST_CASE("validation errors name the field") {
    auto bad = toy();
    bad.d_model = 0;
    CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("d_model"), InvalidSpec);

    bad = toy();
    bad.attention = GroupedQuery{3};
    CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("num_kv_heads"), InvalidSpec);

    bad = toy();
    bad.moe = MoESpec{4, 8, 0, 16};
    CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("top_k"), InvalidSpec);

    bad = toy();
    bad.weight_bits = 12;
    CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("weight_bits"), InvalidSpec);

    bad = toy();
    bad.attention = LatentKV{0, 64};
    CHECK_THROWS_AS(validate(bad), InvalidSpec);
}

TEST_CASE("names") {
    CHECK(std::string(attention_name(MultiHead{})) == "mha");
    CHECK(std::string(attention_name(GroupedQuery{2})) == "gqa");
    CHECK(std::string(attention_name(LatentKV{})) == "mla");
    CHECK(std::string(to_string(Phase::Prefill)) == "prefill");
}
