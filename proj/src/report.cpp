#include "oicf/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "oicf/svg.hpp"

namespace oicf {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

std::pair<double, double> min_max(const std::vector<double>& values) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        if (v > 0 && std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo <= hi)) return {1.0, 10.0};
    return {lo, hi};
}

// Power-of-ten bounds enclosing [lo, hi].
svg::Axis log_axis(double lo, double hi, std::string title) {
    double a = std::pow(10.0, std::floor(std::log10(lo)));
    double b = std::pow(10.0, std::ceil(std::log10(hi)));
    if (!(b > a)) b = a * 10.0;
    return {a, b, true, std::move(title)};
}

const char* variant_color(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    return colors[i % 6];
}

std::string variant_label(const ModelSpec& s) {
    std::string out = attention_name(s.attention);
    if (const auto* g = std::get_if<GroupedQuery>(&s.attention)) out += "(" + std::to_string(g->num_kv_heads) + ")";
    return out;
}

}  // namespace

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_sig(double v) { return svg::label(v); }

std::uint64_t parse_count(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw std::invalid_argument("empty count");
    double scale = 1.0;
    const char last = text.back();
    if (last == 'k' || last == 'K') scale = 1e3;
    if (last == 'm' || last == 'M') scale = 1e6;
    if (scale != 1.0) text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("not a count: '" + std::string(text) + "'");
    const double scaled = std::round(value * scale);
    if (!(scaled >= 1.0) || std::abs(scaled - value * scale) > 1e-6 || scaled > 1e18)
        throw std::invalid_argument("count must be a positive integer: '" + std::string(text) + "'");
    return static_cast<std::uint64_t>(scaled);
}

std::vector<std::uint64_t> parse_values(std::string_view text) {
    text = trim(text);
    std::vector<std::uint64_t> out;
    if (text.find('|') != std::string_view::npos) {
        for (auto part : split(text, '|')) out.push_back(parse_count(part));
        return out;
    }
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) return {parse_count(text)};

    std::string_view hi_text = text.substr(dots + 2);
    bool log_steps = false;
    if (const auto colon = hi_text.find(':'); colon != std::string_view::npos) {
        const auto mode = trim(hi_text.substr(colon + 1));
        if (mode == "log") log_steps = true;
        else if (mode != "lin") throw std::invalid_argument("range mode must be log or lin: '" + std::string(mode) + "'");
        hi_text = hi_text.substr(0, colon);
    }
    const std::uint64_t lo = parse_count(text.substr(0, dots));
    const std::uint64_t hi = parse_count(hi_text);
    if (hi < lo) throw std::invalid_argument("range upper bound below lower bound");
    if (log_steps) {
        for (std::uint64_t v = lo; v < hi; v *= 2) out.push_back(v);
        out.push_back(hi);
    } else {
        if (hi - lo >= 100000) throw std::invalid_argument("linear range too large; use :log");
        for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
    return out;
}

Grid parse_grid(std::string_view text, std::vector<Phase> phases, std::vector<std::uint64_t> default_batches,
                std::vector<std::uint64_t> default_contexts) {
    Grid grid{std::move(phases), std::move(default_batches), std::move(default_contexts)};
    if (trim(text).empty()) return grid;
    for (auto axis : split(text, ',')) {
        const auto eq = axis.find('=');
        if (eq == std::string_view::npos) throw std::invalid_argument("grid axis needs NAME=VALUES: '" + std::string(axis) + "'");
        const auto name = trim(axis.substr(0, eq));
        auto values = parse_values(axis.substr(eq + 1));
        if (name == "B" || name == "b") grid.batches = std::move(values);
        else if (name == "L" || name == "l") grid.contexts = std::move(values);
        else throw std::invalid_argument("unknown grid axis '" + std::string(name) + "' (expected B or L)");
    }
    return grid;
}

const char* bound_color(BoundClass bound) {
    switch (bound) {
        case BoundClass::ComputeBound: return "#1f77b4";
        case BoundClass::BandwidthBound: return "#f2b701";
        case BoundClass::CapacityLimited: return "#9467bd";
        case BoundClass::CapacityExceeded: return "#d62728";
    }
    return "#000000";
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "model,hardware,label,phase,batch,context,cached_prefix,flops_per_token,bytes_per_token,oi,cf_bytes,"
           "ridge,bound,attainable_flops,attainable_tokens_per_s,mfu_est,mbu_est,max_feasible_batch,min_devices,"
           "batch_fits,effective_batch\n";
    for (const auto& row : result.rows) {
        const auto& a = row.analysis;
        out << result.model << ',' << result.hardware << ',' << row.label << ',' << to_string(a.point.phase) << ','
            << a.point.batch_size << ',' << a.point.context_len << ',' << a.point.cached_prefix << ','
            << format_full(a.metrics.flops_per_token) << ',' << format_full(a.metrics.bytes_per_token) << ','
            << format_full(a.metrics.oi) << ',' << format_full(a.metrics.cf) << ',' << format_full(a.ridge) << ','
            << to_string(a.bound) << ',' << format_full(a.attainable_flops) << ','
            << format_full(a.attainable_tokens_per_s) << ',' << format_full(a.mfu_est) << ','
            << format_full(a.mbu_est) << ',' << a.max_feasible_batch << ','
            << (a.min_devices ? std::to_string(*a.min_devices) : std::string("none")) << ','
            << (a.batch_fits ? "true" : "false") << ',' << a.effective_batch << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<AgentSummary>& summaries) {
    out << "workload,turns,prefill_tokens,decode_tokens,final_context,prefill_oi,decode_oi,peak_cf_bytes,final_bound\n";
    for (const auto& s : summaries) {
        out << s.workload << ',' << s.turns << ',' << s.tokens.prefill << ',' << s.tokens.decode << ','
            << s.final_context << ',' << format_full(s.prefill_oi) << ',' << format_full(s.decode_oi) << ','
            << format_full(s.peak_cf) << ',' << to_string(s.final_bound) << '\n';
    }
}

std::string sweep_text(const SweepResult& result) {
    std::ostringstream s;
    s << "model: " << result.model << "  hardware: " << result.hardware << '\n';
    char line[320];
    std::snprintf(line, sizeof(line), "%-8s %-7s %8s %10s %8s %13s %13s %13s %-17s %8s %8s %10s %8s\n", "label",
                  "phase", "batch", "context", "prefix", "OI", "CF_bytes", "tokens/s", "class", "MFU", "MBU",
                  "max_batch", "devices");
    s << line;
    for (const auto& row : result.rows) {
        const auto& a = row.analysis;
        std::snprintf(line, sizeof(line), "%-8s %-7s %8llu %10llu %8llu %13s %13s %13s %-17s %8s %8s %10llu %8s\n",
                      row.label.c_str(), to_string(a.point.phase),
                      static_cast<unsigned long long>(a.point.batch_size),
                      static_cast<unsigned long long>(a.point.context_len),
                      static_cast<unsigned long long>(a.point.cached_prefix), format_sig(a.metrics.oi).c_str(),
                      format_sig(a.metrics.cf).c_str(), format_sig(a.attainable_tokens_per_s).c_str(),
                      to_string(a.bound), format_sig(a.mfu_est).c_str(), format_sig(a.mbu_est).c_str(),
                      static_cast<unsigned long long>(a.max_feasible_batch),
                      a.min_devices ? std::to_string(*a.min_devices).c_str() : "none");
        s << line;
    }
    if (result.summary) {
        const auto& m = *result.summary;
        s << "workload " << m.workload << ": " << m.turns << " turns, prefill " << m.tokens.prefill << " tokens, decode "
          << m.tokens.decode << " tokens, final context " << m.final_context << "\n  prefill OI "
          << format_sig(m.prefill_oi) << ", decode OI " << format_sig(m.decode_oi) << ", peak CF "
          << format_sig(m.peak_cf) << " bytes, final step " << to_string(m.final_bound) << '\n';
    }
    return s.str();
}

std::vector<ModelSpec> attention_variants(const ModelSpec& base, std::uint64_t kv_heads, std::uint64_t d_latent,
                                          std::uint64_t d_rope) {
    ModelSpec mha = base, gqa = base, mla = base;
    mha.attention = MultiHead{};
    gqa.attention = GroupedQuery{kv_heads};
    mla.attention = LatentKV{d_latent, d_rope};
    mha.name = base.name + "/mha";
    gqa.name = base.name + "/gqa" + std::to_string(kv_heads);
    mla.name = base.name + "/mla";
    for (const auto* s : {&mha, &gqa, &mla}) validate(*s);
    return {mha, gqa, mla};
}

AttentionComparison compare_attention(const ModelSpec& base, std::vector<std::uint64_t> contexts, std::uint64_t batch,
                                      std::uint64_t kv_heads, std::uint64_t d_latent, std::uint64_t d_rope) {
    AttentionComparison cmp;
    cmp.variants = attention_variants(base, kv_heads, d_latent, d_rope);
    cmp.contexts = std::move(contexts);
    cmp.batch = batch;
    for (const auto& v : cmp.variants) {
        std::vector<double> cf, kv;
        for (std::uint64_t L : cmp.contexts) {
            cf.push_back(cf_request(v, OperatingPoint{L, batch, Phase::Decode, 0}));
            kv.push_back(kv_bytes_per_token(v) * static_cast<double>(L));
        }
        cmp.cf.push_back(std::move(cf));
        cmp.kv_bytes.push_back(std::move(kv));
    }
    return cmp;
}

void write_attention_csv(std::ostream& out, const AttentionComparison& cmp) {
    out << "context,batch";
    for (const auto& v : cmp.variants) out << ',' << variant_label(v) << "_cf_bytes";
    for (const auto& v : cmp.variants) out << ',' << variant_label(v) << "_kv_bytes";
    out << '\n';
    for (std::size_t i = 0; i < cmp.contexts.size(); ++i) {
        out << cmp.contexts[i] << ',' << cmp.batch;
        for (const auto& col : cmp.cf) out << ',' << format_full(col[i]);
        for (const auto& col : cmp.kv_bytes) out << ',' << format_full(col[i]);
        out << '\n';
    }
}

std::string attention_svg(const AttentionComparison& cmp, const HardwareSpec* hw) {
    std::vector<double> ys;
    for (const auto& col : cmp.cf) ys.insert(ys.end(), col.begin(), col.end());
    if (hw) ys.push_back(static_cast<double>(hw->mem_capacity));
    const auto [ylo, yhi] = min_max(ys);
    std::vector<double> xs(cmp.contexts.begin(), cmp.contexts.end());
    const auto [xlo, xhi] = min_max(xs);
    svg::Plot plot("Capacity footprint per request (B=" + std::to_string(cmp.batch) + ")",
                   log_axis(xlo, xhi, "context length (tokens)"), log_axis(ylo, yhi, "CF (bytes)"));
    for (std::size_t v = 0; v < cmp.variants.size(); ++v) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < cmp.contexts.size(); ++i)
            pts.emplace_back(static_cast<double>(cmp.contexts[i]), cmp.cf[v][i]);
        plot.add_line(std::move(pts), variant_color(v), variant_label(cmp.variants[v]));
    }
    if (hw) plot.add_hline(static_cast<double>(hw->mem_capacity), "#7f7f7f", hw->name + " capacity");
    svg::Document doc(640, 420, "attention variants");
    doc.add(plot, 0, 0, 640, 420);
    return doc.render();
}

std::vector<MoERow> compare_moe(const std::vector<ModelSpec>& specs, const std::vector<std::uint64_t>& batches,
                                std::uint64_t context) {
    std::vector<MoERow> rows;
    for (const auto& s : specs) {
        for (std::uint64_t b : batches) {
            const OperatingPoint p{context, b, Phase::Decode, 0};
            MoERow r;
            r.model = s.name;
            r.moe = s.is_moe();
            r.batch = b;
            r.context = context;
            r.total_params = total_params(s);
            r.activated_params = activated_params(s);
            r.weight_share = weight_bytes(s) / static_cast<double>(b);
            r.kv_bytes = kv_bytes_per_token(s) * static_cast<double>(context);
            r.cf = cf_request(s, p);
            r.decode_oi = decode_metrics(s, p).oi;
            rows.push_back(r);
        }
    }
    return rows;
}

void write_moe_csv(std::ostream& out, const std::vector<MoERow>& rows) {
    out << "model,moe,batch,context,total_params,activated_params,weight_bytes_per_request,kv_bytes,cf_bytes,"
           "decode_oi\n";
    for (const auto& r : rows) {
        out << r.model << ',' << (r.moe ? "true" : "false") << ',' << r.batch << ',' << r.context << ','
            << r.total_params << ',' << r.activated_params << ',' << format_full(r.weight_share) << ','
            << format_full(r.kv_bytes) << ',' << format_full(r.cf) << ',' << format_full(r.decode_oi) << '\n';
    }
}

std::string moe_svg(const std::vector<MoERow>& rows) {
    std::vector<std::string> cats;
    std::vector<double> weights, kv, oi, tops;
    for (const auto& r : rows) {
        cats.push_back(r.model + " B=" + std::to_string(r.batch));
        weights.push_back(r.weight_share);
        kv.push_back(r.kv_bytes);
        oi.push_back(r.decode_oi);
        tops.push_back(r.cf);
    }
    const double cf_max = *std::max_element(tops.begin(), tops.end());
    svg::Plot cf_plot = svg::Plot::categorical("Capacity footprint per request", cats,
                                               svg::Axis{0.0, cf_max * 1.15, false, "CF (bytes)"});
    cf_plot.add_bars(weights, "#7f7f7f", "model weights", 0, {}, 0.45);
    cf_plot.add_bars(kv, "#1f77b4", "KV cache", 0, weights);

    const auto [olo, ohi] = min_max(oi);
    svg::Plot oi_plot = svg::Plot::categorical("Decode OI", cats, log_axis(olo, ohi, "FLOPs / byte"));
    oi_plot.add_bars(oi, "#ff7f0e", "decode OI", 0);

    const double width = std::max(640.0, 120.0 * static_cast<double>(cats.size()));
    svg::Document doc(width, 800, "dense vs MoE");
    doc.add(cf_plot, 0, 0, width, 400);
    doc.add(oi_plot, 0, 400, width, 400);
    return doc.render();
}

std::string agent_profile_svg(const std::vector<AgentSummary>& summaries, const HardwareSpec& hw,
                              const ModelSpec& spec) {
    std::vector<std::string> cats;
    std::vector<double> prefill, decode, cf, poi, doi;
    for (const auto& s : summaries) {
        cats.push_back(s.workload);
        prefill.push_back(static_cast<double>(s.tokens.prefill));
        decode.push_back(static_cast<double>(s.tokens.decode));
        cf.push_back(s.peak_cf);
        poi.push_back(s.prefill_oi);
        doi.push_back(s.decode_oi);
    }
    std::vector<double> tok = prefill;
    tok.insert(tok.end(), decode.begin(), decode.end());
    const auto [tlo, thi] = min_max(tok);
    svg::Plot tokens = svg::Plot::categorical("Token usage", cats, log_axis(tlo, thi, "tokens"));
    tokens.add_bars(prefill, "#1f77b4", "prefill", 0);
    tokens.add_bars(decode, "#ff7f0e", "decode", 1);

    const double cap = static_cast<double>(hw.mem_capacity);
    const double cf_max = std::max(*std::max_element(cf.begin(), cf.end()), cap);
    svg::Plot capacity = svg::Plot::categorical("Capacity footprint (final context)", cats,
                                                svg::Axis{0.0, cf_max * 1.15, false, "CF (bytes)"});
    capacity.add_band(0.0, cap, "#9a9a9a", hw.name + " capacity");
    capacity.add_bars(cf, "#2ca02c", "CF", 0);

    const double ridge = ridge_point(hw, spec.effective_compute_bits());
    std::vector<double> ois = poi;
    ois.insert(ois.end(), doi.begin(), doi.end());
    ois.push_back(ridge);
    const auto [olo, ohi] = min_max(ois);
    svg::Plot intensity = svg::Plot::categorical("Operational intensity", cats, log_axis(olo, ohi, "FLOPs / byte"));
    intensity.add_bars(poi, "#1f77b4", "prefill", 0);
    intensity.add_bars(doi, "#ff7f0e", "decode", 1);
    intensity.add_hline(ridge, "#d62728", "ridge point");

    const double panel = std::max(360.0, 100.0 * static_cast<double>(cats.size()));
    svg::Document doc(panel * 3, 420, "agent profile: " + spec.name + " on " + hw.name);
    doc.add(tokens, 0, 0, panel, 420);
    doc.add(capacity, panel, 0, panel, 420);
    doc.add(intensity, panel * 2, 0, panel, 420);
    return doc.render();
}

std::string roofline_svg(const SweepResult& result, const ModelSpec& spec, const HardwareSpec& hw) {
    const unsigned bits = spec.effective_compute_bits();
    const double peak = hw.peak(bits);
    const double ridge = ridge_point(hw, bits);
    std::vector<double> ois{ridge};
    for (const auto& r : result.rows) ois.push_back(r.analysis.metrics.oi);
    auto [olo, ohi] = min_max(ois);
    const svg::Axis x = log_axis(olo / 2, ohi * 2, "operational intensity (FLOPs / byte)");
    const svg::Axis y = log_axis(x.lo * hw.mem_bandwidth, peak * 2, "attainable FLOP/s per device");
    svg::Plot plot("Capacity-extended roofline: " + result.model + " on " + result.hardware, x, y);
    plot.add_line({{x.lo, x.lo * hw.mem_bandwidth}, {ridge, peak}, {x.hi, peak}}, "#333333", "roofline");
    plot.add_vline(ridge, "#7f7f7f", "ridge " + format_sig(ridge));
    for (BoundClass b : {BoundClass::ComputeBound, BoundClass::BandwidthBound, BoundClass::CapacityLimited,
                         BoundClass::CapacityExceeded})
        plot.add_legend_entry(bound_color(b), to_string(b));
    for (const auto& r : result.rows) {
        const auto& a = r.analysis;
        const double on_roof = std::min(peak, a.metrics.oi * hw.mem_bandwidth);
        plot.add_point(a.metrics.oi, on_roof, bound_color(a.bound),
                       r.label + " " + to_string(a.point.phase) + " B=" + std::to_string(a.point.batch_size) +
                           " L=" + std::to_string(a.point.context_len) + ": " + to_string(a.bound));
    }
    svg::Document doc(720, 480, "roofline");
    doc.add(plot, 0, 0, 720, 480);
    return doc.render();
}

}  // namespace oicf
