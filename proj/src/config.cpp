#include "oicf/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <vector>

namespace oicf {

namespace {

bool is_metadata_key(const std::string& key) {
    return key == "kind" || key == "name" || key == "note" || key == "provenance";
}

struct Field {
    std::string name;
    bool required;
    std::function<void(const Json&)> apply;
};

class ObjectReader {
 public:
    ObjectReader(const Json& obj, std::string source, std::string prefix, const LoadOptions& opts)
        : obj_(obj), source_(std::move(source)), prefix_(std::move(prefix)), opts_(opts) {
        if (!obj_.is_object()) fail("", "expected a JSON object");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        const std::string full = key.empty() ? prefix_ : qualify(key);
        throw ConfigError(source_, full, full.empty() ? what : full + ": " + what);
    }

    std::string qualify(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

    std::uint64_t count(const std::string& key, const Json& v) const {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer()) {
            if (v.get<std::int64_t>() < 0) fail(key, "must be a non-negative integer");
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        }
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0 && d == std::floor(d) && d < 18446744073709551616.0)
                return static_cast<std::uint64_t>(d);
        }
        fail(key, "must be a non-negative integer");
    }

    unsigned bit_width(const std::string& key, const Json& v) const {
        const auto b = count(key, v);
        if (!is_supported_bit_width(static_cast<unsigned>(b)) || b > 32)
            fail(key, "must be one of 2, 4, 8, 16, 32");
        return static_cast<unsigned>(b);
    }

    double positive_number(const std::string& key, const Json& v) const {
        if (!v.is_number()) fail(key, "must be a number");
        const double d = v.get<double>();
        if (!(d > 0.0) || !std::isfinite(d)) fail(key, "must be positive");
        return d;
    }

    bool boolean(const std::string& key, const Json& v) const {
        if (!v.is_boolean()) fail(key, "must be true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const Json& v) const {
        if (!v.is_string()) fail(key, "must be a string");
        return v.get<std::string>();
    }

    // Applies fields in file order, so the first offending key is the one reported.
    void read(const std::vector<Field>& fields) const {
        std::vector<bool> seen(fields.size(), false);
        for (const auto& [key, value] : obj_.items()) {
            bool matched = false;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i].name == key) {
                    fields[i].apply(value);
                    seen[i] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched && !is_metadata_key(key) && opts_.strict) fail(key, "unknown key");
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i].required && !seen[i]) fail(fields[i].name, "missing required key");
        }
    }

    const Json& object() const { return obj_; }
    const std::string& source() const { return source_; }

 private:
    const Json& obj_;
    std::string source_;
    std::string prefix_;
    const LoadOptions& opts_;
};

void check_kind(const Json& j, const char* expected, const std::string& source) {
    if (!j.is_object()) throw ConfigError(source, "", "expected a JSON object");
    if (auto it = j.find("kind"); it != j.end()) {
        if (!it->is_string() || it->get<std::string>() != expected)
            throw ConfigError(source, "kind", std::string("kind: expected \"") + expected + "\"");
    }
}

std::string name_of(const Json& j, const std::string& source) {
    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw ConfigError(source, "name", "name: must be a string");
        return it->get<std::string>();
    }
    return std::filesystem::path(source).stem().string();
}

template <class Fn>
void rethrow_invalid(const std::string& source, Fn&& fn) {
    try {
        fn();
    } catch (const InvalidSpec& e) {
        std::string msg = e.what();
        throw ConfigError(source, msg.substr(0, msg.find(' ')), msg);
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "", "cannot open config file: " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string(), "", std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

ConfigError::ConfigError(std::string source, std::string key, const std::string& what)
    : std::runtime_error(source.empty() ? what : source + ": " + what),
      source_(std::move(source)),
      key_(std::move(key)) {}

const char* to_string(ConfigKind kind) {
    switch (kind) {
        case ConfigKind::Model: return "model";
        case ConfigKind::Hardware: return "hardware";
        case ConfigKind::Workload: return "workload";
    }
    return "unknown";
}

ModelSpec model_from_json(const Json& j, const LoadOptions& opts, std::string_view source_view) {
    const std::string source(source_view);
    check_kind(j, "model", source);
    ModelSpec spec;
    spec.name = name_of(j, source);
    bool head_dim_given = false;
    ObjectReader r(j, source, "", opts);

    auto read_attention = [&](const Json& v) {
        ObjectReader a(v, source, "attention", opts);
        std::string type;
        std::uint64_t kv_heads = 0, latent = 0, rope = 0;
        bool has_kv = false, has_latent = false, has_rope = false;
        a.read({
            {"type", true, [&](const Json& x) { type = a.string("type", x); }},
            {"num_kv_heads", false, [&](const Json& x) { kv_heads = a.count("num_kv_heads", x); has_kv = true; }},
            {"d_latent", false, [&](const Json& x) { latent = a.count("d_latent", x); has_latent = true; }},
            {"d_rope", false, [&](const Json& x) { rope = a.count("d_rope", x); has_rope = true; }},
        });
        if (type == "mha") {
            if (has_kv || has_latent || has_rope) a.fail("type", "mha takes no extra fields");
            spec.attention = MultiHead{};
        } else if (type == "gqa") {
            if (!has_kv) a.fail("num_kv_heads", "missing required key");
            if (has_latent || has_rope) a.fail("type", "gqa takes only num_kv_heads");
            spec.attention = GroupedQuery{kv_heads};
        } else if (type == "mla") {
            if (!has_latent) a.fail("d_latent", "missing required key");
            if (has_kv) a.fail("num_kv_heads", "not valid for mla");
            spec.attention = LatentKV{latent, has_rope ? rope : 0};
        } else {
            a.fail("type", "must be one of mha, gqa, mla");
        }
    };

    auto read_moe = [&](const Json& v) {
        if (v.is_null()) {
            spec.moe.reset();
            return;
        }
        ObjectReader m(v, source, "moe", opts);
        MoESpec moe;
        m.read({
            {"num_experts", true, [&](const Json& x) { moe.num_experts = m.count("num_experts", x); }},
            {"top_k", true, [&](const Json& x) { moe.top_k = m.count("top_k", x); }},
            {"num_shared_experts", false, [&](const Json& x) { moe.num_shared_experts = m.count("num_shared_experts", x); }},
            {"d_ff_expert", true, [&](const Json& x) { moe.d_ff_expert = m.count("d_ff_expert", x); }},
        });
        spec.moe = moe;
    };

    r.read({
        {"num_layers", true, [&](const Json& v) { spec.num_layers = r.count("num_layers", v); }},
        {"d_model", true, [&](const Json& v) { spec.d_model = r.count("d_model", v); }},
        {"num_heads", true, [&](const Json& v) { spec.num_heads = r.count("num_heads", v); }},
        {"head_dim", false, [&](const Json& v) { spec.head_dim = r.count("head_dim", v); head_dim_given = true; }},
        {"attention", false, read_attention},
        {"d_ff", true, [&](const Json& v) { spec.d_ff = r.count("d_ff", v); }},
        {"ffn_gated", false, [&](const Json& v) { spec.ffn_gated = r.boolean("ffn_gated", v); }},
        {"moe", false, read_moe},
        {"vocab_size", false, [&](const Json& v) { spec.vocab_size = r.count("vocab_size", v); }},
        {"weight_bits", false, [&](const Json& v) { spec.weight_bits = r.bit_width("weight_bits", v); }},
        {"kv_bits", false, [&](const Json& v) { spec.kv_bits = r.bit_width("kv_bits", v); }},
        {"compute_bits", false, [&](const Json& v) { spec.compute_bits = r.bit_width("compute_bits", v); }},
    });
    if (!head_dim_given) {
        if (spec.num_heads == 0) r.fail("num_heads", "must be positive");
        spec.head_dim = spec.d_model / spec.num_heads;
        if (spec.head_dim == 0) r.fail("head_dim", "d_model / num_heads is zero; set head_dim");
    }
    rethrow_invalid(source, [&] { validate(spec); });
    return spec;
}

HardwareSpec hardware_from_json(const Json& j, const LoadOptions& opts, std::string_view source_view) {
    const std::string source(source_view);
    check_kind(j, "hardware", source);
    HardwareSpec hw;
    hw.name = name_of(j, source);
    ObjectReader r(j, source, "", opts);
    auto read_peaks = [&](const Json& v) {
        if (!v.is_object()) r.fail("peak_flops", "must map precision bits to FLOP/s");
        for (const auto& [key, rate] : v.items()) {
            const std::string field = "peak_flops." + key;
            unsigned bits = 0;
            try {
                std::size_t used = 0;
                bits = static_cast<unsigned>(std::stoul(key, &used));
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                r.fail(field, "precision keys must be bit widths");
            }
            if (!is_supported_bit_width(bits)) r.fail(field, "precision must be one of 2, 4, 8, 16, 32");
            hw.peak_flops[bits] = r.positive_number(field, rate);
        }
    };
    r.read({
        {"peak_flops", true, read_peaks},
        {"mem_bandwidth", true, [&](const Json& v) { hw.mem_bandwidth = r.positive_number("mem_bandwidth", v); }},
        {"mem_capacity", true, [&](const Json& v) { hw.mem_capacity = r.count("mem_capacity", v); }},
        {"num_devices", false, [&](const Json& v) { hw.num_devices = r.count("num_devices", v); }},
    });
    rethrow_invalid(source, [&] { validate(hw); });
    return hw;
}

WorkloadSpec workload_from_json(const Json& j, const LoadOptions& opts, std::string_view source_view) {
    const std::string source(source_view);
    check_kind(j, "workload", source);
    WorkloadSpec wl;
    wl.name = name_of(j, source);
    ObjectReader r(j, source, "", opts);
    r.read({
        {"turns", true, [&](const Json& v) { wl.turns = r.count("turns", v); }},
        {"prefill_tokens_per_turn", true, [&](const Json& v) { wl.prefill_tokens_per_turn = r.count("prefill_tokens_per_turn", v); }},
        {"decode_tokens_per_turn", true, [&](const Json& v) { wl.decode_tokens_per_turn = r.count("decode_tokens_per_turn", v); }},
        {"carry_context", false, [&](const Json& v) { wl.carry_context = r.boolean("carry_context", v); }},
        {"batch_size", false, [&](const Json& v) { wl.batch_size = r.count("batch_size", v); }},
    });
    rethrow_invalid(source, [&] { validate(wl); });
    return wl;
}

Json to_json(const ModelSpec& spec) {
    Json j;
    j["kind"] = "model";
    j["name"] = spec.name;
    j["num_layers"] = spec.num_layers;
    j["d_model"] = spec.d_model;
    j["num_heads"] = spec.num_heads;
    j["head_dim"] = spec.head_dim;
    Json attn;
    attn["type"] = attention_name(spec.attention);
    if (const auto* g = std::get_if<GroupedQuery>(&spec.attention)) attn["num_kv_heads"] = g->num_kv_heads;
    if (const auto* l = std::get_if<LatentKV>(&spec.attention)) {
        attn["d_latent"] = l->d_latent;
        attn["d_rope"] = l->d_rope;
    }
    j["attention"] = attn;
    j["d_ff"] = spec.d_ff;
    j["ffn_gated"] = spec.ffn_gated;
    if (spec.moe) {
        j["moe"] = Json{{"num_experts", spec.moe->num_experts},
                        {"top_k", spec.moe->top_k},
                        {"num_shared_experts", spec.moe->num_shared_experts},
                        {"d_ff_expert", spec.moe->d_ff_expert}};
    }
    j["vocab_size"] = spec.vocab_size;
    j["weight_bits"] = spec.weight_bits;
    j["kv_bits"] = spec.kv_bits;
    if (spec.compute_bits) j["compute_bits"] = *spec.compute_bits;
    return j;
}

Json to_json(const HardwareSpec& hw) {
    Json j;
    j["kind"] = "hardware";
    j["name"] = hw.name;
    Json peaks = Json::object();
    for (const auto& [bits, rate] : hw.peak_flops) peaks[std::to_string(bits)] = rate;
    j["peak_flops"] = peaks;
    j["mem_bandwidth"] = hw.mem_bandwidth;
    j["mem_capacity"] = hw.mem_capacity;
    j["num_devices"] = hw.num_devices;
    return j;
}

Json to_json(const WorkloadSpec& wl) {
    Json j;
    j["kind"] = "workload";
    j["name"] = wl.name;
    j["turns"] = wl.turns;
    j["prefill_tokens_per_turn"] = wl.prefill_tokens_per_turn;
    j["decode_tokens_per_turn"] = wl.decode_tokens_per_turn;
    j["carry_context"] = wl.carry_context;
    j["batch_size"] = wl.batch_size;
    return j;
}

AnyConfig load_config(const std::filesystem::path& path, const LoadOptions& opts) {
    const Json j = read_json_file(path);
    const std::string source = path.string();
    if (!j.is_object()) throw ConfigError(source, "", "expected a JSON object");
    auto it = j.find("kind");
    if (it == j.end() || !it->is_string())
        throw ConfigError(source, "kind", "kind: missing; expected model, hardware or workload");
    const auto kind = it->get<std::string>();
    if (kind == "model") return model_from_json(j, opts, source);
    if (kind == "hardware") return hardware_from_json(j, opts, source);
    if (kind == "workload") return workload_from_json(j, opts, source);
    throw ConfigError(source, "kind", "kind: expected model, hardware or workload");
}

ModelSpec load_model(const std::filesystem::path& path, const LoadOptions& opts) {
    return model_from_json(read_json_file(path), opts, path.string());
}

HardwareSpec load_hardware(const std::filesystem::path& path, const LoadOptions& opts) {
    return hardware_from_json(read_json_file(path), opts, path.string());
}

WorkloadSpec load_workload(const std::filesystem::path& path, const LoadOptions& opts) {
    return workload_from_json(read_json_file(path), opts, path.string());
}

void save_config(const std::filesystem::path& path, const AnyConfig& config) {
    std::ofstream out(path);
    if (!out) throw ConfigError(path.string(), "", "cannot write " + path.string());
    out << std::visit([](const auto& c) { return to_json(c); }, config).dump(2) << '\n';
}

std::filesystem::path resolve_config(std::string_view ref, ConfigKind kind,
                                     const std::filesystem::path& catalog_dir) {
    const std::filesystem::path as_path(ref);
    if (std::filesystem::is_regular_file(as_path)) return as_path;
    const char* subdir = kind == ConfigKind::Model      ? "models"
                         : kind == ConfigKind::Hardware ? "hardware"
                                                        : "workloads";
    const auto preset = catalog_dir / subdir / (std::string(ref) + ".json");
    if (std::filesystem::is_regular_file(preset)) return preset;
    throw ConfigError(std::string(ref), "",
                      std::string("no ") + to_string(kind) + " config at '" + std::string(ref) +
                          "' or '" + preset.string() + "'");
}

}  // namespace oicf
