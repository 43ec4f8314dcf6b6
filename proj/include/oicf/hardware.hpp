#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace oicf {

class UnknownPrecision : public std::out_of_range {
 public:
    using std::out_of_range::out_of_range;
};

// One accelerator type. Rates and capacity are per device; aggregates scale
// linearly in num_devices (interconnect effects are not modeled).
struct HardwareSpec {
    std::string name;
    std::map<unsigned, double> peak_flops;  // precision bits -> FLOP/s
    double mem_bandwidth = 0.0;             // bytes/s
    std::uint64_t mem_capacity = 0;         // bytes
    std::uint64_t num_devices = 1;

    double peak(unsigned bits) const;
    std::uint64_t aggregate_capacity() const { return mem_capacity * num_devices; }

    bool operator==(const HardwareSpec&) const = default;
};

void validate(const HardwareSpec& hw);

// OI at which the bandwidth arm meets the compute roof.
double ridge_point(const HardwareSpec& hw, unsigned bits);

// Per-device roofline: min(peak, oi * bandwidth).
double attainable_flops(const HardwareSpec& hw, unsigned bits, double oi);

}  // namespace oicf
