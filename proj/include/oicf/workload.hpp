#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oicf {

// A multi-turn agent usage profile with constant per-turn token counts.
struct WorkloadSpec {
    std::string name;
    std::uint64_t turns = 1;
    std::uint64_t prefill_tokens_per_turn = 0;
    std::uint64_t decode_tokens_per_turn = 0;
    // When set, every turn's prompt and generated tokens stay cached as context for
    // the following turns (no re-prefill of earlier output).
    bool carry_context = true;
    std::uint64_t batch_size = 1;

    bool operator==(const WorkloadSpec&) const = default;
};

void validate(const WorkloadSpec& spec);

struct TurnRecord {
    std::uint64_t turn_index = 0;
    std::uint64_t prefill_start_context = 0;
    std::uint64_t prefill_tokens = 0;
    // Decode contexts are the consecutive integers
    // [decode_first_context, decode_first_context + decode_tokens).
    std::uint64_t decode_first_context = 0;
    std::uint64_t decode_tokens = 0;
    std::uint64_t cumulative_context = 0;

    std::uint64_t decode_last_context() const { return decode_first_context + decode_tokens - 1; }
    bool operator==(const TurnRecord&) const = default;
};

struct TurnTrace {
    std::string workload;
    std::uint64_t batch_size = 1;
    std::vector<TurnRecord> turns;

    std::uint64_t final_context() const { return turns.empty() ? 0 : turns.back().cumulative_context; }
    bool operator==(const TurnTrace&) const = default;
};

TurnTrace expand(const WorkloadSpec& spec);

struct TokenTotals {
    std::uint64_t prefill = 0;
    std::uint64_t decode = 0;
    bool operator==(const TokenTotals&) const = default;
};

TokenTotals total_tokens(const TurnTrace& trace);

}  // namespace oicf
