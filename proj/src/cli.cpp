#include "oicf/cli.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oicf/config.hpp"
#include "oicf/report.hpp"

#ifndef OICF_CATALOG_DIR
#define OICF_CATALOG_DIR "catalog"
#endif

namespace oicf {

namespace {

// Raised for unusable flag values; maps to the config-error exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Phase> parse_phases(const std::string& text) {
    if (text == "prefill") return {Phase::Prefill};
    if (text == "decode") return {Phase::Decode};
    if (text == "both") return {Phase::Prefill, Phase::Decode};
    throw UsageError("--phase must be prefill, decode or both (got '" + text + "')");
}

class Job {
 public:
    Job(const ReportRequest& req, std::ostream& out) : req_(req), out_(out) {
        catalog_ = req.catalog_dir.empty() ? default_catalog_dir() : req.catalog_dir;
        load_.strict = !req.allow_unknown_keys;
    }

    int execute() {
        const auto& c = req_.command;
        if (c == "analyze") return analyze();
        if (c == "sweep" || c == "roofline-plot") return sweep_command();
        if (c == "compare-attention") return compare_attention_command();
        if (c == "compare-moe") return compare_moe_command();
        if (c == "agent-profile") return agent_profile();
        throw UsageError("unknown command '" + c + "'");
    }

 private:
    const std::string& require(const std::string& value, const char* flag) const {
        if (value.empty()) throw UsageError(std::string("missing ") + flag + " for " + req_.command);
        return value;
    }

    ModelSpec model(const std::string& ref) const {
        return load_model(resolve_config(ref, ConfigKind::Model, catalog_), load_);
    }
    HardwareSpec hardware(const std::string& ref) const {
        return load_hardware(resolve_config(ref, ConfigKind::Hardware, catalog_), load_);
    }
    WorkloadSpec workload(const std::string& ref) const {
        return load_workload(resolve_config(ref, ConfigKind::Workload, catalog_), load_);
    }

    bool wants(OutputFormat f) const { return req_.formats.count(f) > 0; }

    void emit(const std::string& suffix, const std::string& content) {
        std::filesystem::create_directories(req_.out_dir);
        const auto path = req_.out_dir / (req_.command + suffix);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << content;
    }

    void emit_text(const std::string& text) {
        out_ << text;
        emit(".txt", text);
    }

    std::vector<std::uint64_t> values_or(const std::string& text, std::vector<std::uint64_t> fallback) const {
        return text.empty() ? fallback : parse_values(text);
    }

    Grid grid(std::vector<std::uint64_t> default_batches, std::vector<std::uint64_t> default_contexts) const {
        Grid g{parse_phases(req_.phase), values_or(req_.batch, std::move(default_batches)),
               values_or(req_.context, std::move(default_contexts))};
        if (!req_.grid.empty()) g = parse_grid(req_.grid, g.phases, g.batches, g.contexts);
        return g;
    }

    int finish_rows(const SweepResult& result) const {
        if (!req_.strict) return kExitOk;
        for (const auto& row : result.rows) {
            if (row.analysis.bound == BoundClass::CapacityExceeded) return kExitInfeasible;
        }
        return kExitOk;
    }

    void emit_sweep(const SweepResult& result, const ModelSpec& spec, const HardwareSpec& hw) {
        if (wants(OutputFormat::Csv)) {
            std::ostringstream csv;
            write_sweep_csv(csv, result);
            emit(".csv", csv.str());
            if (result.summary) {
                std::ostringstream summary;
                write_summary_csv(summary, {*result.summary});
                emit("_summary.csv", summary.str());
            }
        }
        if (wants(OutputFormat::Svg)) emit(".svg", roofline_svg(result, spec, hw));
        if (wants(OutputFormat::Text)) emit_text(sweep_text(result));
    }

    int analyze() {
        const auto spec = model(require(req_.model, "--model"));
        const auto hw = hardware(require(req_.hardware, "--hardware"));
        const auto result = sweep(spec, hw, grid({1}, {4096}), req_.analysis);
        emit_sweep(result, spec, hw);
        return finish_rows(result);
    }

    int sweep_command() {
        const auto spec = model(require(req_.model, "--model"));
        const auto hw = hardware(require(req_.hardware, "--hardware"));
        SweepResult result;
        if (!req_.workload.empty()) {
            auto trace = expand(workload(req_.workload));
            if (!req_.batch.empty()) trace.batch_size = parse_values(req_.batch).front();
            result = sweep(spec, hw, trace, req_.analysis);
            const auto phases = parse_phases(req_.phase);
            if (phases.size() == 1) {
                std::erase_if(result.rows, [&](const SweepRow& r) { return r.analysis.point.phase != phases.front(); });
            }
        } else {
            result = sweep(spec, hw, grid(parse_values("1..64:log"), parse_values("1k..1m:log")), req_.analysis);
        }
        emit_sweep(result, spec, hw);
        return finish_rows(result);
    }

    int compare_attention_command() {
        const auto base = model(require(req_.model, "--model"));
        std::vector<std::uint64_t> contexts = values_or(req_.context, parse_values("1k..1m:log"));
        std::uint64_t batch = req_.batch.empty() ? 1 : parse_values(req_.batch).front();
        if (!req_.grid.empty()) {
            const auto g = parse_grid(req_.grid, {Phase::Decode}, {batch}, contexts);
            contexts = g.contexts;
            batch = g.batches.front();
        }
        std::optional<HardwareSpec> hw;
        if (!req_.hardware.empty()) hw = hardware(req_.hardware);
        const auto cmp = compare_attention(base, contexts, batch, req_.kv_heads, req_.d_latent, req_.d_rope);
        if (wants(OutputFormat::Csv)) {
            std::ostringstream csv;
            write_attention_csv(csv, cmp);
            emit(".csv", csv.str());
        }
        if (wants(OutputFormat::Svg)) emit(".svg", attention_svg(cmp, hw ? &*hw : nullptr));
        if (wants(OutputFormat::Text)) {
            std::ostringstream s;
            s << "attention variants of " << base.name << " (B=" << cmp.batch << ")\n";
            for (const auto& v : cmp.variants)
                s << "  " << v.name << ": KV " << format_sig(kv_bytes_per_token(v)) << " bytes/token, weights "
                  << format_sig(weight_bytes(v)) << " bytes\n";
            s << "context";
            for (const auto& v : cmp.variants) s << "  " << attention_name(v.attention) << "_cf";
            s << '\n';
            for (std::size_t i = 0; i < cmp.contexts.size(); ++i) {
                s << cmp.contexts[i];
                for (const auto& col : cmp.cf) s << "  " << format_sig(col[i]);
                s << '\n';
            }
            emit_text(s.str());
        }
        return kExitOk;
    }

    int compare_moe_command() {
        std::vector<ModelSpec> specs;
        for (const auto& ref : split_list(require(req_.model, "--model"))) specs.push_back(model(ref));
        const auto batches = values_or(req_.batch, {1, 16});
        const auto contexts = values_or(req_.context, {4096});
        const auto rows = compare_moe(specs, batches, contexts.front());
        if (wants(OutputFormat::Csv)) {
            std::ostringstream csv;
            write_moe_csv(csv, rows);
            emit(".csv", csv.str());
        }
        if (wants(OutputFormat::Svg)) emit(".svg", moe_svg(rows));
        if (wants(OutputFormat::Text)) {
            std::ostringstream s;
            s << "dense vs MoE at context " << contexts.front() << '\n';
            for (const auto& r : rows) {
                s << "  " << r.model << " B=" << r.batch << ": total params " << r.total_params << ", activated "
                  << r.activated_params << ", CF " << format_sig(r.cf) << " bytes (weights "
                  << format_sig(r.weight_share) << " + KV " << format_sig(r.kv_bytes) << "), decode OI "
                  << format_sig(r.decode_oi) << '\n';
            }
            emit_text(s.str());
        }
        return kExitOk;
    }

    int agent_profile() {
        const auto spec = model(require(req_.model, "--model"));
        const auto hw = hardware(require(req_.hardware, "--hardware"));
        const std::string list = req_.workload.empty() ? "chatbot,coding,web-use,computer-use" : req_.workload;
        std::vector<AgentSummary> summaries;
        for (const auto& ref : split_list(list)) {
            auto trace = expand(workload(ref));
            if (!req_.batch.empty()) trace.batch_size = parse_values(req_.batch).front();
            summaries.push_back(summarize(spec, hw, trace, req_.analysis));
        }
        if (wants(OutputFormat::Csv)) {
            std::ostringstream csv;
            write_summary_csv(csv, summaries);
            emit(".csv", csv.str());
        }
        if (wants(OutputFormat::Svg)) emit(".svg", agent_profile_svg(summaries, hw, spec));
        if (wants(OutputFormat::Text)) {
            std::ostringstream s;
            s << "agent profiles: " << spec.name << " on " << hw.name << " (ridge "
              << format_sig(ridge_point(hw, spec.effective_compute_bits())) << ", capacity "
              << format_sig(static_cast<double>(hw.aggregate_capacity())) << " bytes)\n";
            for (const auto& m : summaries) {
                s << "  " << m.workload << ": " << m.turns << " turns, prefill " << m.tokens.prefill << ", decode "
                  << m.tokens.decode << ", final context " << m.final_context << ", peak CF " << format_sig(m.peak_cf)
                  << " bytes, prefill OI " << format_sig(m.prefill_oi) << ", decode OI " << format_sig(m.decode_oi)
                  << ", final step " << to_string(m.final_bound) << '\n';
            }
            emit_text(s.str());
        }
        if (req_.strict) {
            for (const auto& m : summaries) {
                if (m.final_bound == BoundClass::CapacityExceeded) return kExitInfeasible;
            }
        }
        return kExitOk;
    }

    const ReportRequest& req_;
    std::ostream& out_;
    std::filesystem::path catalog_;
    LoadOptions load_;
};

}  // namespace

std::filesystem::path default_catalog_dir() { return OICF_CATALOG_DIR; }

std::set<OutputFormat> parse_formats(const std::string& text) {
    std::set<OutputFormat> out;
    for (const auto& f : split_list(text)) {
        if (f == "csv") out.insert(OutputFormat::Csv);
        else if (f == "svg") out.insert(OutputFormat::Svg);
        else if (f == "text") out.insert(OutputFormat::Text);
        else throw std::invalid_argument("unknown format '" + f + "' (expected csv, svg, text)");
    }
    if (out.empty()) throw std::invalid_argument("--format needs at least one of csv, svg, text");
    return out;
}

int run(const ReportRequest& request, std::ostream& out, std::ostream& err) {
    try {
        return Job(request, out).execute();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const InvalidSpec& e) {
        err << "invalid spec: " << e.what() << '\n';
    } catch (const UnknownPrecision& e) {
        err << "hardware mismatch: " << e.what() << '\n';
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
    }
    return kExitConfigError;
}

}  // namespace oicf
