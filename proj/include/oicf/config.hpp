#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "oicf/hardware.hpp"
#include "oicf/model_arch.hpp"
#include "oicf/workload.hpp"

namespace oicf {

using Json = nlohmann::ordered_json;

// A config file that is missing, unreadable, malformed, or fails validation.
// key() names the first offending field when there is one.
class ConfigError : public std::runtime_error {
 public:
    ConfigError(std::string source, std::string key, const std::string& what);

    const std::string& source() const { return source_; }
    const std::string& key() const { return key_; }

 private:
    std::string source_;
    std::string key_;
};

struct LoadOptions {
    // Reject keys outside the schema.
    bool strict = true;
};

enum class ConfigKind : std::uint8_t { Model, Hardware, Workload };

const char* to_string(ConfigKind kind);

using AnyConfig = std::variant<ModelSpec, HardwareSpec, WorkloadSpec>;

ModelSpec model_from_json(const Json& j, const LoadOptions& opts = {}, std::string_view source = "");
HardwareSpec hardware_from_json(const Json& j, const LoadOptions& opts = {},
                                std::string_view source = "");
WorkloadSpec workload_from_json(const Json& j, const LoadOptions& opts = {},
                                std::string_view source = "");

Json to_json(const ModelSpec& spec);
Json to_json(const HardwareSpec& hw);
Json to_json(const WorkloadSpec& wl);

// Dispatches on the file's "kind" key.
AnyConfig load_config(const std::filesystem::path& path, const LoadOptions& opts = {});

ModelSpec load_model(const std::filesystem::path& path, const LoadOptions& opts = {});
HardwareSpec load_hardware(const std::filesystem::path& path, const LoadOptions& opts = {});
WorkloadSpec load_workload(const std::filesystem::path& path, const LoadOptions& opts = {});

void save_config(const std::filesystem::path& path, const AnyConfig& config);

// A reference is either an existing file path or a preset name looked up as
// <catalog>/{models,hardware,workloads}/<name>.json.
std::filesystem::path resolve_config(std::string_view ref, ConfigKind kind,
                                     const std::filesystem::path& catalog_dir);

}  // namespace oicf
