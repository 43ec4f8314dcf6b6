#include "oicf/hardware.hpp"

#include <algorithm>
#include <cmath>

#include "oicf/model_arch.hpp"

namespace oicf {

double HardwareSpec::peak(unsigned bits) const {
    if (auto it = peak_flops.find(bits); it != peak_flops.end()) return it->second;
    std::string available;
    for (const auto& [b, _] : peak_flops) {
        if (!available.empty()) available += ", ";
        available += std::to_string(b);
    }
    throw UnknownPrecision("hardware '" + name + "' has no peak rate for " + std::to_string(bits) +
                           "-bit; available precisions: " + available);
}

void validate(const HardwareSpec& hw) {
    if (hw.peak_flops.empty()) throw InvalidSpec("peak_flops must not be empty");
    for (const auto& [bits, rate] : hw.peak_flops) {
        if (!(rate > 0.0) || !std::isfinite(rate))
            throw InvalidSpec("peak_flops." + std::to_string(bits) + " must be positive");
    }
    if (!(hw.mem_bandwidth > 0.0) || !std::isfinite(hw.mem_bandwidth))
        throw InvalidSpec("mem_bandwidth must be positive");
    if (hw.mem_capacity == 0) throw InvalidSpec("mem_capacity must be positive");
    if (hw.num_devices < 1) throw InvalidSpec("num_devices must be at least 1");
}

double ridge_point(const HardwareSpec& hw, unsigned bits) { return hw.peak(bits) / hw.mem_bandwidth; }

double attainable_flops(const HardwareSpec& hw, unsigned bits, double oi) {
    if (!(oi > 0.0)) throw std::invalid_argument("operational intensity must be positive");
    return std::min(hw.peak(bits), oi * hw.mem_bandwidth);
}

}  // namespace oicf
