#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "oicf/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"oicf: operational intensity and capacity footprint analysis for LLM agent inference"};
    app.require_subcommand(1);

    oicf::ReportRequest req;
    std::string formats = "text";
    std::string out_dir = ".";
    std::string catalog;
    std::string weights = "shared";
    bool activations = false;

    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "classify one or more operating points"},
        {"sweep", "grid or workload-trace sweep over batch and context"},
        {"compare-attention", "CF vs context for MHA, GQA and MLA variants of a model"},
        {"compare-moe", "CF (weights + KV) and decode OI for dense and MoE models"},
        {"agent-profile", "token usage, CF and phase OI per agent workload"},
        {"roofline-plot", "capacity-extended roofline with classified points"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--model", req.model, "model preset name or config path");
        sub->add_option("--hardware", req.hardware, "hardware preset name or config path");
        sub->add_option("--workload", req.workload, "workload preset name or config path");
        sub->add_option("--phase", req.phase, "prefill, decode or both")
            ->check(CLI::IsMember({"prefill", "decode", "both"}));
        sub->add_option("--batch", req.batch, "batch size(s): 8, 1|16, 1..64:log");
        sub->add_option("--context", req.context, "context length(s): 4096, 8k, 1k..1m:log");
        sub->add_option("--grid", req.grid, "sweep grid, e.g. \"B=1..64:log,L=1k..1m:log\"");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", formats, "comma list of csv, svg, text");
        sub->add_option("--catalog", catalog, "preset catalog directory");
        sub->add_flag("--strict", req.strict, "exit 3 when a point exceeds memory capacity");
        sub->add_flag("--allow-unknown-keys", req.allow_unknown_keys, "accept config keys outside the schema");
        sub->add_option("--weights", weights, "weight placement across devices")
            ->check(CLI::IsMember({"shared", "replicated"}));
        sub->add_flag("--activations", activations, "add per-request activation buffers to CF");
        sub->add_option("--kv-heads", req.kv_heads, "KV heads for the GQA variant (compare-attention)");
        sub->add_option("--d-latent", req.d_latent, "latent width for the MLA variant (compare-attention)");
        sub->add_option("--d-rope", req.d_rope, "rope key width for the MLA variant (compare-attention)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    req.command = app.get_subcommands().front()->get_name();
    req.out_dir = out_dir;
    req.catalog_dir = catalog;
    req.analysis.placement =
        weights == "replicated" ? oicf::WeightPlacement::Replicated : oicf::WeightPlacement::Shared;
    req.analysis.metrics.include_activations = activations;
    try {
        req.formats = oicf::parse_formats(formats);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return oicf::kExitConfigError;
    }
    return oicf::run(req, std::cout, std::cerr);
}
