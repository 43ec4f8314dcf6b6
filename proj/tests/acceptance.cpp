// Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. An optional argument names the oicf executable used
// for the determinism check; without it the check runs the CLI in-process.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oicf/analysis.hpp"
#include "oicf/cli.hpp"
#include "oicf/config.hpp"
#include "oicf/report.hpp"
#include "oracles.hpp"

using namespace oicf;
namespace fs = std::filesystem;

namespace {

const fs::path kCatalog = OICF_TEST_CATALOG;

ModelSpec model(const char* name) { return load_model(resolve_config(name, ConfigKind::Model, kCatalog)); }
HardwareSpec hardware(const char* name) { return load_hardware(resolve_config(name, ConfigKind::Hardware, kCatalog)); }
WorkloadSpec workload(const char* name) { return load_workload(resolve_config(name, ConfigKind::Workload, kCatalog)); }

std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

// 1. Matmul OI against the operation/transfer tally, plus symmetry.
Outcome oi_oracle() {
    std::mt19937_64 rng(20240601);
    long double worst = 0;
    int asymmetric = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto m = uniform(rng, 1, 4096), d = uniform(rng, 1, 4096), L = uniform(rng, 1, 4096);
        const auto t = oracle::matmul_tally(m, d, L);
        const long double expected = static_cast<long double>(t.ops) / static_cast<long double>(t.transfers);
        worst = std::max(worst, std::abs(static_cast<long double>(oi_matmul(m, d, L)) - expected) / expected);
        if (oi_matmul(m, d, L) != oi_matmul(L, d, m)) ++asymmetric;
    }
    std::ostringstream s;
    s << "1000 triples, max relative error " << static_cast<double>(worst) << ", asymmetric " << asymmetric;
    return {worst <= 1e-12L && asymmetric == 0, s.str()};
}

// 2. CF identity on random specs and its single-matrix specialization.
Outcome cf_identity() {
    std::mt19937_64 rng(7);
    int mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        const auto s = oracle::random_spec(rng);
        const OperatingPoint p{uniform(rng, 1, 1000000), uniform(rng, 1, 4096), Phase::Decode, 0};
        const double expected = kv_bytes_per_token(s) * static_cast<double>(p.context_len) +
                                weight_bytes(s) / static_cast<double>(p.batch_size);
        if (cf_request(s, p) != expected) ++mismatches;
    }
    // One layer whose cached state per token is a single d-vector at 16 bits (2d bytes).
    // Viewing the weights as one m x d byte matrix, CF must equal 2dL + md/B.
    int single = 0;
    for (int i = 0; i < 500; ++i) {
        ModelSpec s;
        s.name = "single";
        s.d_model = uniform(rng, 1, 8192);
        s.attention = LatentKV{s.d_model, 0};
        s.d_ff = uniform(rng, 1, 4096);
        s.kv_bits = 16;
        const double d = static_cast<double>(s.d_model);
        const double m = weight_bytes(s) / d;
        const std::uint64_t L = uniform(rng, 1, 1000000), B = uniform(rng, 1, 1024);
        if (std::floor(m) != m) ++single;
        else if (cf_request(s, {L, B, Phase::Decode, 0}) != 2 * d * static_cast<double>(L) + m * d / static_cast<double>(B))
            ++single;
    }
    std::ostringstream s;
    s << "500 random specs with " << mismatches << " mismatches, 500 single-matrix cases with " << single
      << " mismatches";
    return {mismatches == 0 && single == 0, s.str()};
}

// 3. Attention variants of the 48-layer configuration.
Outcome attention_order() {
    const auto base = model("attn48-mha");
    const auto v = attention_variants(base, 8, 512, 64);
    const auto &mha = v[0], &gqa = v[1], &mla = v[2];
    // CF(L) = kv*L + W; both coefficients ordered implies the order for every L >= 1.
    const bool coeffs = kv_bytes_per_token(mla) < kv_bytes_per_token(gqa) &&
                        kv_bytes_per_token(gqa) < kv_bytes_per_token(mha) && weight_bytes(mla) <= weight_bytes(gqa) &&
                        weight_bytes(gqa) <= weight_bytes(mha);
    bool sampled = true;
    std::vector<std::uint64_t> contexts;
    for (std::uint64_t L = 1; L <= (1ULL << 24); L *= 2) contexts.push_back(L);
    for (std::uint64_t L = 1; L <= 4096; ++L) contexts.push_back(L);
    const auto cmp = compare_attention(base, contexts, 1);
    for (std::size_t i = 0; i < contexts.size(); ++i) sampled = sampled && cmp.cf[2][i] < cmp.cf[1][i] && cmp.cf[1][i] < cmp.cf[0][i];
    const double ratio = kv_bytes_per_token(mha) / kv_bytes_per_token(gqa);
    const bool oracle_kv = oracle::kv_bits_per_token(mha) == 393216ULL * 8;
    const double kv = kv_bytes_per_token(mha);
    std::ostringstream s;
    s << "MHA KV " << static_cast<std::uint64_t>(kv) << " B/token, MHA/GQA ratio " << ratio
      << ", order holds on coefficients " << (coeffs ? "yes" : "no") << " and on " << contexts.size() << " contexts "
      << (sampled ? "yes" : "no");
    return {coeffs && sampled && ratio == 4.0 && kv == 393216.0 && oracle_kv, s.str()};
}

// 4. Coding agent anchors.
Outcome coding_agent() {
    const auto w = workload("coding");
    const auto trace = expand(w);
    const auto spec = model("dense-70b");
    const auto hw = hardware("b200");
    const double ridge = ridge_point(hw, spec.effective_compute_bits());
    auto one = trace;
    one.batch_size = 1;
    const auto sum = summarize(spec, hw, one);
    const auto last = decode_metrics(spec, {trace.final_context(), 1, Phase::Decode, 0});
    const bool turns = w.turns >= 20 && w.turns <= 30;
    const bool context = trace.final_context() >= 300000;
    const bool oi = sum.decode_oi < 0.05 * ridge && last.oi < 0.05 * ridge;
    const bool cf = sum.peak_cf > static_cast<double>(hw.mem_capacity);
    std::ostringstream s;
    s << w.turns << " turns, final context " << trace.final_context() << ", decode OI " << format_sig(sum.decode_oi)
      << " vs 5% of ridge " << format_sig(0.05 * ridge) << ", CF " << format_sig(sum.peak_cf) << " B vs capacity "
      << format_sig(static_cast<double>(hw.mem_capacity)) << " B";
    return {turns && context && oi && cf, s.str()};
}

// 5. MoE direction and CF decomposition.
Outcome moe_direction() {
    const auto dense = model("dense-70b");
    const auto moe = model("moe-8x22b");
    const bool shape = moe.moe && total_params(moe) >= total_params(dense) && moe.moe->top_k * 4 <= moe.moe->num_experts;
    const OperatingPoint p{4096, 1, Phase::Decode, 0};
    const double moe_oi = decode_metrics(moe, p).oi, dense_oi = decode_metrics(dense, p).oi;
    bool decomposed = true;
    for (const auto& r : compare_moe({dense, moe}, {1, 4, 16, 64}, 4096))
        decomposed = decomposed && r.cf == r.weight_share + r.kv_bytes &&
                     r.weight_share == weight_bytes(r.moe ? moe : dense) / static_cast<double>(r.batch);
    std::ostringstream s;
    s << "decode OI " << format_sig(moe_oi) << " (MoE) vs " << format_sig(dense_oi) << " (dense), total params "
      << total_params(moe) << " vs " << total_params(dense) << ", CF = weights + KV "
      << (decomposed ? "exact" : "inexact");
    return {shape && moe_oi < dense_oi && decomposed, s.str()};
}

// 6. Classification soundness on random instances.
struct Instance {
    ModelSpec spec;
    HardwareSpec hw;
    OperatingPoint point;
};

Instance random_instance(std::mt19937_64& rng) {
    Instance x;
    x.spec = oracle::random_spec(rng);
    const bool prefill = uniform(rng, 0, 1) == 1;
    x.point = {uniform(rng, 1, 4096), uniform(rng, 1, 64), prefill ? Phase::Prefill : Phase::Decode,
               prefill ? uniform(rng, 0, 2048) : 0};
    const double weight = weight_bytes(x.spec);
    const double request = kv_bytes_per_token(x.spec) * static_cast<double>(resident_context(x.point));
    // capacity between a fraction of the weights and many requests' worth
    const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-0.5, 3.0)(rng));
    x.hw.name = "random";
    x.hw.mem_capacity = std::max<std::uint64_t>(1, static_cast<std::uint64_t>((weight + request) * scale));
    x.hw.mem_bandwidth = static_cast<double>(uniform(rng, 1, 1000));
    x.hw.num_devices = uniform(rng, 1, 4);
    const double oi = phase_metrics(x.spec, x.point).oi;
    double ridge = oi * std::pow(10.0, std::uniform_real_distribution<double>(-1.0, 1.5)(rng));
    // a third of the instances put the ridge between oi(B) and oi(Bmax) when that gap exists
    const std::uint64_t bmax = max_feasible_batch(x.spec, x.hw, x.point);
    if (uniform(rng, 0, 2) == 0 && bmax > x.point.batch_size) {
        OperatingPoint widest = x.point;
        widest.batch_size = bmax;
        const double top = phase_metrics(x.spec, widest).oi;
        if (top > oi) ridge = oi + (top - oi) * std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    }
    x.hw.peak_flops[x.spec.effective_compute_bits()] = ridge * x.hw.mem_bandwidth;
    return x;
}

// Bmax from first principles, in bits: floor((N*cap*8 - W) / R), 0 if the weights fill memory.
std::uint64_t oracle_bmax(const Instance& x) {
    using wide = unsigned __int128;
    const wide cap = wide{x.hw.mem_capacity} * x.hw.num_devices * 8;
    const wide weights = oracle::total_params(x.spec) * x.spec.weight_bits;
    const wide per_request = wide{oracle::kv_bits_per_token(x.spec)} * resident_context(x.point);
    if (weights >= cap) return 0;
    const wide b = (cap - weights) / per_request;
    return b > ~std::uint64_t{0} ? ~std::uint64_t{0} : static_cast<std::uint64_t>(b);
}

Outcome classification_soundness() {
    std::mt19937_64 rng(500);
    int exclusive = 0, compute_iff = 0, monotone = 0, dual = 0, oi_invariant = 0, class_invariant = 0;
    int flips_exceeded = 0, flips_limited = 0, flips_other = 0;
    int seen[4] = {0, 0, 0, 0};
    const int n = 500;
    for (int i = 0; i < n; ++i) {
        const auto x = random_instance(rng);
        const auto a = classify(x.spec, x.hw, x.point);
        ++seen[static_cast<int>(a.bound)];

        // Exactly one of the four defining predicates holds, and it is the reported class.
        const auto bmax = oracle_bmax(x);
        const bool fits = bmax >= 1;
        const double oi = phase_metrics(x.spec, x.point).oi;
        const double ridge = ridge_point(x.hw, x.spec.effective_compute_bits());
        bool reaches = false;
        if (fits) {
            OperatingPoint widest = x.point;
            widest.batch_size = bmax;
            reaches = phase_metrics(x.spec, widest).oi >= ridge;
        }
        const bool preds[4] = {fits && oi >= ridge, fits && oi < ridge && reaches, fits && oi < ridge && !reaches, !fits};
        const int true_count = static_cast<int>(std::count(std::begin(preds), std::end(preds), true));
        if (true_count == 1 && preds[static_cast<int>(a.bound)] && a.max_feasible_batch == bmax) ++exclusive;

        if (!fits || ((a.bound == BoundClass::ComputeBound) == (oi >= ridge))) ++compute_iff;

        // More memory never moves a point from a roof class into a capacity class.
        auto bigger = x;
        bigger.hw.mem_capacity *= uniform(rng, 2, 16);
        const auto b = classify(bigger.spec, bigger.hw, bigger.point).bound;
        const bool roof = a.bound == BoundClass::ComputeBound || a.bound == BoundClass::BandwidthBound;
        if (!roof || b == BoundClass::ComputeBound || b == BoundClass::BandwidthBound) ++monotone;

        // min_devices(B) is the smallest k with max_feasible_batch(k devices) >= B.
        bool ok = true;
        for (auto placement : {WeightPlacement::Shared, WeightPlacement::Replicated}) {
            const AnalysisOptions opts{placement, {}};
            const auto k = min_devices(x.spec, x.hw, x.point, opts);
            auto hw = x.hw;
            if (!k) {
                hw.num_devices = 1024;
                ok = ok && max_feasible_batch(x.spec, hw, x.point, opts) == 0;
                continue;
            }
            hw.num_devices = *k;
            ok = ok && max_feasible_batch(x.spec, hw, x.point, opts) >= x.point.batch_size;
            if (*k > 1) {
                hw.num_devices = *k - 1;
                ok = ok && max_feasible_batch(x.spec, hw, x.point, opts) < x.point.batch_size;
            }
        }
        if (ok) ++dual;

        // Scaling the device count at fixed B.
        bool same_oi = true, same_class = true;
        for (std::uint64_t devices : {1, 2, 4, 8, 64}) {
            auto scaled = x;
            scaled.hw.num_devices = devices;
            const auto c = classify(scaled.spec, scaled.hw, scaled.point);
            same_oi = same_oi && c.metrics.oi == a.metrics.oi && c.ridge == a.ridge;
            if (c.bound != a.bound && same_class) {
                same_class = false;
                if (a.bound == BoundClass::CapacityExceeded || c.bound == BoundClass::CapacityExceeded) ++flips_exceeded;
                else if (a.bound == BoundClass::CapacityLimited || c.bound == BoundClass::CapacityLimited) ++flips_limited;
                else ++flips_other;
            }
        }
        if (same_oi) ++oi_invariant;
        if (same_class) ++class_invariant;
    }
    std::ostringstream s;
    s << n << " instances (compute " << seen[0] << ", bandwidth " << seen[1] << ", capacity-limited " << seen[2]
      << ", capacity-exceeded " << seen[3] << "); exclusive " << exclusive << "/" << n << ", compute iff oi>=ridge "
      << compute_iff << "/" << n << ", capacity monotone " << monotone << "/" << n << ", duality " << dual << "/" << n
      << ", per-device OI invariant " << oi_invariant << "/" << n << ", class invariant under num_devices "
      << class_invariant << "/" << n;
    if (class_invariant != n)
        s << " (changes: " << flips_exceeded << " involve capacity-exceeded, " << flips_limited
          << " capacity-limited vs bandwidth-bound, " << flips_other << " other)";
    const bool all = exclusive == n && compute_iff == n && monotone == n && dual == n && oi_invariant == n &&
                     class_invariant == n;
    return {all, s.str()};
}

// 7. Halving a bit width halves exactly its own CF term.
Outcome quantization() {
    std::mt19937_64 rng(77);
    int bad = 0;
    for (int i = 0; i < 500; ++i) {
        auto s = oracle::random_spec(rng);
        static constexpr unsigned kFrom[] = {4, 8, 16, 32};
        s.weight_bits = kFrom[uniform(rng, 0, 3)];
        s.kv_bits = kFrom[uniform(rng, 0, 3)];
        const OperatingPoint p{uniform(rng, 1, 1000000), uniform(rng, 1, 1024), Phase::Decode, 0};
        const double L = static_cast<double>(p.context_len), B = static_cast<double>(p.batch_size);
        const double w_term = weight_bytes(s) / B, kv_term = kv_bytes_per_token(s) * L;
        auto hw = s;
        hw.weight_bits /= 2;
        auto hk = s;
        hk.kv_bits /= 2;
        if (weight_bytes(hw) / B != w_term / 2 || kv_bytes_per_token(hw) * L != kv_term) ++bad;
        if (kv_bytes_per_token(hk) * L != kv_term / 2 || weight_bytes(hk) / B != w_term) ++bad;
        if (cf_request(hw, p) != kv_term + w_term / 2 || cf_request(hk, p) != kv_term / 2 + w_term) ++bad;
    }
    return {bad == 0, "500 random specs, " + std::to_string(bad) + " inexact halvings"};
}

// 8. Two identical CLI invocations produce byte-identical CSV.
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

struct Invocation {
    std::string command;
    std::vector<std::pair<std::string, std::string>> flags;
};

int invoke(const std::string& exe, const Invocation& inv, const fs::path& out) {
    if (!exe.empty()) {
        std::string cmd = "\"" + exe + "\" " + inv.command;
        for (const auto& [k, v] : inv.flags) cmd += " " + k + " \"" + v + "\"";
        cmd += " --format csv --catalog \"" + kCatalog.string() + "\" --out \"" + out.string() + "\" > /dev/null";
        return std::system(cmd.c_str());
    }
    ReportRequest r;
    r.command = inv.command;
    r.catalog_dir = kCatalog;
    r.out_dir = out;
    r.formats = {OutputFormat::Csv};
    for (const auto& [k, v] : inv.flags) {
        if (k == "--model") r.model = v;
        else if (k == "--hardware") r.hardware = v;
        else if (k == "--workload") r.workload = v;
        else if (k == "--grid") r.grid = v;
    }
    std::ostringstream sink;
    return run(r, sink, sink);
}

Outcome determinism(const std::string& exe) {
    const std::vector<Invocation> runs = {
        {"sweep", {{"--model", "dense-70b"}, {"--hardware", "b200"}, {"--grid", "B=1..64:log,L=1k..1m:log"}}},
        {"sweep", {{"--model", "attn48-gqa8"}, {"--hardware", "h100-sxm"}, {"--workload", "coding"}}},
        {"compare-attention", {{"--model", "attn48-mha"}}},
        {"compare-moe", {{"--model", "dense-70b,moe-8x22b"}}},
        {"agent-profile", {{"--model", "dense-70b"}, {"--hardware", "b200"}}},
    };
    const auto root = fs::temp_directory_path() / "oicf_acceptance_determinism";
    int identical = 0, files = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto a = root / ("a" + std::to_string(i)), b = root / ("b" + std::to_string(i));
        fs::remove_all(a);
        fs::remove_all(b);
        if (invoke(exe, runs[i], a) != 0 || invoke(exe, runs[i], b) != 0) continue;
        for (const auto& entry : fs::directory_iterator(a)) {
            if (entry.path().extension() != ".csv") continue;
            ++files;
            const auto left = slurp(entry.path());
            if (!left.empty() && left == slurp(b / entry.path().filename())) ++identical;
        }
    }
    std::ostringstream s;
    s << (exe.empty() ? "in-process" : "CLI") << " runs, " << identical << "/" << files << " CSV files identical";
    return {files >= static_cast<int>(runs.size()) && identical == files, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string exe = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"matmul OI oracle", oi_oracle},
        {"CF identity", cf_identity},
        {"attention CF ordering", attention_order},
        {"coding agent anchors", coding_agent},
        {"MoE decode OI direction", moe_direction},
        {"classification soundness", classification_soundness},
        {"quantization linearity", quantization},
        {"CSV determinism", [&] { return determinism(exe); }},
    };
    int passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (o.pass) ++passed;
        std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    std::printf("%d/%zu acceptance criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
