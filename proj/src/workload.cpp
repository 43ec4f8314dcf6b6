#include "oicf/workload.hpp"

#include "oicf/model_arch.hpp"

namespace oicf {

void validate(const WorkloadSpec& spec) {
    if (spec.turns < 1) throw InvalidSpec("turns must be at least 1");
    if (spec.batch_size < 1) throw InvalidSpec("batch_size must be at least 1");
}

TurnTrace expand(const WorkloadSpec& spec) {
    validate(spec);
    TurnTrace trace{spec.name, spec.batch_size, {}};
    trace.turns.reserve(spec.turns);
    std::uint64_t carried = 0;
    for (std::uint64_t t = 0; t < spec.turns; ++t) {
        TurnRecord rec;
        rec.turn_index = t;
        rec.prefill_start_context = spec.carry_context ? carried : 0;
        rec.prefill_tokens = spec.prefill_tokens_per_turn;
        rec.decode_first_context = rec.prefill_start_context + rec.prefill_tokens + 1;
        rec.decode_tokens = spec.decode_tokens_per_turn;
        rec.cumulative_context = rec.prefill_start_context + rec.prefill_tokens + rec.decode_tokens;
        carried = rec.cumulative_context;
        trace.turns.push_back(rec);
    }
    return trace;
}

TokenTotals total_tokens(const TurnTrace& trace) {
    TokenTotals totals;
    for (const auto& t : trace.turns) {
        totals.prefill += t.prefill_tokens;
        totals.decode += t.decode_tokens;
    }
    return totals;
}

}  // namespace oicf
