#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "oicf/analysis.hpp"
#include "oicf/cli.hpp"
#include "oicf/config.hpp"
#include "oicf/report.hpp"

namespace py = pybind11;
using namespace oicf;

namespace {

void bind_model(py::module_& m) {
    py::enum_<Phase>(m, "Phase").value("Prefill", Phase::Prefill).value("Decode", Phase::Decode);

    py::class_<MultiHead>(m, "MultiHead").def(py::init<>()).def("__repr__", [](const MultiHead&) {
        return "MultiHead()";
    });
    py::class_<GroupedQuery>(m, "GroupedQuery")
        .def(py::init<std::uint64_t>(), py::arg("num_kv_heads"))
        .def_readwrite("num_kv_heads", &GroupedQuery::num_kv_heads)
        .def("__repr__", [](const GroupedQuery& g) {
            return "GroupedQuery(num_kv_heads=" + std::to_string(g.num_kv_heads) + ")";
        });
    py::class_<LatentKV>(m, "LatentKV")
        .def(py::init([](std::uint64_t d_latent, std::uint64_t d_rope) { return LatentKV{d_latent, d_rope}; }),
             py::arg("d_latent") = 512, py::arg("d_rope") = 64)
        .def_readwrite("d_latent", &LatentKV::d_latent)
        .def_readwrite("d_rope", &LatentKV::d_rope)
        .def("__repr__", [](const LatentKV& l) {
            return "LatentKV(d_latent=" + std::to_string(l.d_latent) + ", d_rope=" + std::to_string(l.d_rope) + ")";
        });

    py::class_<MoESpec>(m, "MoESpec")
        .def(py::init([](std::uint64_t n, std::uint64_t k, std::uint64_t shared, std::uint64_t d_ff_expert) {
                 return MoESpec{n, k, shared, d_ff_expert};
             }),
             py::arg("num_experts"), py::arg("top_k"), py::arg("num_shared_experts") = 0, py::arg("d_ff_expert"))
        .def_readwrite("num_experts", &MoESpec::num_experts)
        .def_readwrite("top_k", &MoESpec::top_k)
        .def_readwrite("num_shared_experts", &MoESpec::num_shared_experts)
        .def_readwrite("d_ff_expert", &MoESpec::d_ff_expert);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("name", &ModelSpec::name)
        .def_readwrite("num_layers", &ModelSpec::num_layers)
        .def_readwrite("d_model", &ModelSpec::d_model)
        .def_readwrite("num_heads", &ModelSpec::num_heads)
        .def_readwrite("head_dim", &ModelSpec::head_dim)
        .def_readwrite("attention", &ModelSpec::attention)
        .def_readwrite("d_ff", &ModelSpec::d_ff)
        .def_readwrite("ffn_gated", &ModelSpec::ffn_gated)
        .def_readwrite("moe", &ModelSpec::moe)
        .def_readwrite("vocab_size", &ModelSpec::vocab_size)
        .def_readwrite("weight_bits", &ModelSpec::weight_bits)
        .def_readwrite("kv_bits", &ModelSpec::kv_bits)
        .def_readwrite("compute_bits", &ModelSpec::compute_bits)
        .def("validate", [](const ModelSpec& s) { validate(s); })
        .def("to_json", [](const ModelSpec& s) { return to_json(s).dump(2); })
        .def(py::self == py::self)
        .def("__repr__", [](const ModelSpec& s) { return "ModelSpec(" + s.name + ")"; });

    m.def("total_params", &total_params);
    m.def("activated_params", &activated_params);
    m.def("weight_bytes", &weight_bytes);
    m.def("kv_bytes_per_token", &kv_bytes_per_token);
    m.def("flops_per_token", &flops_per_token, py::arg("spec"), py::arg("phase"), py::arg("context_len"));
}

void bind_workload(py::module_& m) {
    py::class_<WorkloadSpec>(m, "WorkloadSpec")
        .def(py::init<>())
        .def_readwrite("name", &WorkloadSpec::name)
        .def_readwrite("turns", &WorkloadSpec::turns)
        .def_readwrite("prefill_tokens_per_turn", &WorkloadSpec::prefill_tokens_per_turn)
        .def_readwrite("decode_tokens_per_turn", &WorkloadSpec::decode_tokens_per_turn)
        .def_readwrite("carry_context", &WorkloadSpec::carry_context)
        .def_readwrite("batch_size", &WorkloadSpec::batch_size);
    py::class_<TurnRecord>(m, "TurnRecord")
        .def_readonly("turn_index", &TurnRecord::turn_index)
        .def_readonly("prefill_start_context", &TurnRecord::prefill_start_context)
        .def_readonly("prefill_tokens", &TurnRecord::prefill_tokens)
        .def_readonly("decode_first_context", &TurnRecord::decode_first_context)
        .def_readonly("decode_tokens", &TurnRecord::decode_tokens)
        .def_readonly("cumulative_context", &TurnRecord::cumulative_context);
    py::class_<TurnTrace>(m, "TurnTrace")
        .def_readonly("workload", &TurnTrace::workload)
        .def_readwrite("batch_size", &TurnTrace::batch_size)
        .def_readonly("turns", &TurnTrace::turns)
        .def("final_context", &TurnTrace::final_context);
    py::class_<TokenTotals>(m, "TokenTotals")
        .def_readonly("prefill", &TokenTotals::prefill)
        .def_readonly("decode", &TokenTotals::decode);
    m.def("expand", &expand);
    m.def("total_tokens", &total_tokens);
}

void bind_hardware(py::module_& m) {
    py::class_<HardwareSpec>(m, "HardwareSpec")
        .def(py::init<>())
        .def_readwrite("name", &HardwareSpec::name)
        .def_readwrite("peak_flops", &HardwareSpec::peak_flops)
        .def_readwrite("mem_bandwidth", &HardwareSpec::mem_bandwidth)
        .def_readwrite("mem_capacity", &HardwareSpec::mem_capacity)
        .def_readwrite("num_devices", &HardwareSpec::num_devices);
    m.def("ridge_point", &ridge_point);
    m.def("attainable_flops", &attainable_flops, py::arg("hw"), py::arg("bits"), py::arg("oi"));
}

void bind_metrics(py::module_& m) {
    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def(py::init([](std::uint64_t L, std::uint64_t B, Phase phase, std::uint64_t prefix) {
                 return OperatingPoint{L, B, phase, prefix};
             }),
             py::arg("context_len"), py::arg("batch_size") = 1, py::arg("phase") = Phase::Decode,
             py::arg("cached_prefix") = 0)
        .def_readwrite("context_len", &OperatingPoint::context_len)
        .def_readwrite("batch_size", &OperatingPoint::batch_size)
        .def_readwrite("phase", &OperatingPoint::phase)
        .def_readwrite("cached_prefix", &OperatingPoint::cached_prefix);
    py::class_<MetricsOptions>(m, "MetricsOptions")
        .def(py::init<>())
        .def_readwrite("include_activations", &MetricsOptions::include_activations);
    py::class_<PhaseMetrics>(m, "PhaseMetrics")
        .def_readonly("oi", &PhaseMetrics::oi)
        .def_readonly("cf", &PhaseMetrics::cf)
        .def_readonly("flops_per_token", &PhaseMetrics::flops_per_token)
        .def_readonly("bytes_per_token", &PhaseMetrics::bytes_per_token);
    m.def("oi_matmul", &oi_matmul, py::arg("m"), py::arg("d"), py::arg("L"));
    m.def("cf_request", &cf_request, py::arg("spec"), py::arg("point"), py::arg("opts") = MetricsOptions{});
    m.def("decode_metrics", &decode_metrics, py::arg("spec"), py::arg("point"), py::arg("opts") = MetricsOptions{});
    m.def("prefill_metrics", &prefill_metrics, py::arg("spec"), py::arg("point"), py::arg("opts") = MetricsOptions{});
}

void bind_analysis(py::module_& m) {
    py::enum_<BoundClass>(m, "BoundClass")
        .value("ComputeBound", BoundClass::ComputeBound)
        .value("BandwidthBound", BoundClass::BandwidthBound)
        .value("CapacityLimited", BoundClass::CapacityLimited)
        .value("CapacityExceeded", BoundClass::CapacityExceeded);
    py::enum_<WeightPlacement>(m, "WeightPlacement")
        .value("Shared", WeightPlacement::Shared)
        .value("Replicated", WeightPlacement::Replicated);
    py::class_<AnalysisOptions>(m, "AnalysisOptions")
        .def(py::init<>())
        .def_readwrite("placement", &AnalysisOptions::placement)
        .def_readwrite("metrics", &AnalysisOptions::metrics);
    py::class_<PhaseAnalysis>(m, "PhaseAnalysis")
        .def_readonly("point", &PhaseAnalysis::point)
        .def_readonly("metrics", &PhaseAnalysis::metrics)
        .def_readonly("bound", &PhaseAnalysis::bound)
        .def_readonly("ridge", &PhaseAnalysis::ridge)
        .def_readonly("attainable_flops", &PhaseAnalysis::attainable_flops)
        .def_readonly("attainable_tokens_per_s", &PhaseAnalysis::attainable_tokens_per_s)
        .def_readonly("mfu_est", &PhaseAnalysis::mfu_est)
        .def_readonly("mbu_est", &PhaseAnalysis::mbu_est)
        .def_readonly("max_feasible_batch", &PhaseAnalysis::max_feasible_batch)
        .def_readonly("min_devices", &PhaseAnalysis::min_devices)
        .def_readonly("batch_fits", &PhaseAnalysis::batch_fits)
        .def_readonly("effective_batch", &PhaseAnalysis::effective_batch);
    py::class_<Grid>(m, "Grid")
        .def(py::init([](std::vector<Phase> p, std::vector<std::uint64_t> b, std::vector<std::uint64_t> l) {
                 return Grid{std::move(p), std::move(b), std::move(l)};
             }),
             py::arg("phases"), py::arg("batches"), py::arg("contexts"));
    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("label", &SweepRow::label)
        .def_readonly("analysis", &SweepRow::analysis);
    py::class_<AgentSummary>(m, "AgentSummary")
        .def_readonly("workload", &AgentSummary::workload)
        .def_readonly("tokens", &AgentSummary::tokens)
        .def_readonly("turns", &AgentSummary::turns)
        .def_readonly("final_context", &AgentSummary::final_context)
        .def_readonly("prefill_oi", &AgentSummary::prefill_oi)
        .def_readonly("decode_oi", &AgentSummary::decode_oi)
        .def_readonly("peak_cf", &AgentSummary::peak_cf)
        .def_readonly("final_bound", &AgentSummary::final_bound);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("model", &SweepResult::model)
        .def_readonly("hardware", &SweepResult::hardware)
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("summary", &SweepResult::summary)
        .def("to_csv", [](const SweepResult& r) {
            std::ostringstream s;
            write_sweep_csv(s, r);
            return s.str();
        });

    const AnalysisOptions defaults{};
    m.def("max_feasible_batch",
          py::overload_cast<const ModelSpec&, const HardwareSpec&, std::uint64_t, const AnalysisOptions&>(
              &max_feasible_batch),
          py::arg("spec"), py::arg("hw"), py::arg("context_len"), py::arg("opts") = defaults);
    m.def("min_devices", &min_devices, py::arg("spec"), py::arg("hw"), py::arg("point"), py::arg("opts") = defaults);
    m.def("classify", &classify, py::arg("spec"), py::arg("hw"), py::arg("point"), py::arg("opts") = defaults);
    m.def("sweep",
          py::overload_cast<const ModelSpec&, const HardwareSpec&, const Grid&, const AnalysisOptions&>(&sweep),
          py::arg("spec"), py::arg("hw"), py::arg("grid"), py::arg("opts") = defaults);
    m.def("sweep",
          py::overload_cast<const ModelSpec&, const HardwareSpec&, const TurnTrace&, const AnalysisOptions&>(&sweep),
          py::arg("spec"), py::arg("hw"), py::arg("trace"), py::arg("opts") = defaults);
    m.def("summarize", &summarize, py::arg("spec"), py::arg("hw"), py::arg("trace"), py::arg("opts") = defaults);
    m.def("parse_grid", [](const std::string& text, std::vector<Phase> phases) { return parse_grid(text, phases); });
}

void bind_config(py::module_& m) {
    py::class_<LoadOptions>(m, "LoadOptions").def(py::init<>()).def_readwrite("strict", &LoadOptions::strict);
    const LoadOptions strict{};
    m.def("load_model", &load_model, py::arg("path"), py::arg("opts") = strict);
    m.def("load_hardware", &load_hardware, py::arg("path"), py::arg("opts") = strict);
    m.def("load_workload", &load_workload, py::arg("path"), py::arg("opts") = strict);

    py::class_<ReportRequest>(m, "ReportRequest")
        .def(py::init<>())
        .def_readwrite("command", &ReportRequest::command)
        .def_readwrite("model", &ReportRequest::model)
        .def_readwrite("hardware", &ReportRequest::hardware)
        .def_readwrite("workload", &ReportRequest::workload)
        .def_readwrite("phase", &ReportRequest::phase)
        .def_readwrite("batch", &ReportRequest::batch)
        .def_readwrite("context", &ReportRequest::context)
        .def_readwrite("grid", &ReportRequest::grid)
        .def_readwrite("out_dir", &ReportRequest::out_dir)
        .def_readwrite("catalog_dir", &ReportRequest::catalog_dir)
        .def_readwrite("strict", &ReportRequest::strict)
        .def_readwrite("allow_unknown_keys", &ReportRequest::allow_unknown_keys)
        .def_readwrite("analysis", &ReportRequest::analysis)
        .def_property(
            "format", [](const ReportRequest&) { return std::string(); },
            [](ReportRequest& r, const std::string& text) { r.formats = parse_formats(text); });
    m.def("run", [](const ReportRequest& req) {
        std::ostringstream out, err;
        const int code = run(req, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}

}  // namespace

PYBIND11_MODULE(_oicf, m) {
    m.doc() = "Operational intensity and capacity footprint analysis for LLM agent inference";
    m.attr("__version__") = "0.1.0";
    m.def("_build_catalog_dir", [] { return default_catalog_dir().string(); });

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<UnknownPrecision>(m, "UnknownPrecision", PyExc_KeyError);

    bind_model(m);
    bind_workload(m);
    bind_hardware(m);
    bind_metrics(m);
    bind_analysis(m);
    bind_config(m);
}
