#ifndef CISER_SIM_CONFIG_HPP
#define CISER_SIM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ciser {

struct ConfigInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Policy { Sir, Ciser };

std::string policy_name(Policy p);
Policy parse_policy(const std::string& name);

/// Full DTN scenario description. Distances in meters, times in seconds,
/// sizes in bytes, energy in mAh.
struct SimConfig {
    int n_nodes = 160;
    double area_width = 8000.0;
    double area_height = 8000.0;
    double sim_duration = 43200.0;
    double tx_range = 100.0;
    double tx_speed = 31250.0;  // 250 kbps
    double node_speed_min = 1.111;  // 4 km/h
    double node_speed_max = 2.778;  // 10 km/h
    double wait_time_min = 10.0;
    double wait_time_max = 30.0;
    double buffer_capacity = 2.0 * 1024 * 1024;
    double message_size_min = 500.0 * 1024;
    double message_size_max = 1024.0 * 1024;
    double message_interval_min = 25.0;
    double message_interval_max = 30.0;
    double ttl = 300.0 * 60;
    double energy_initial = 4800.0;
    double energy_scan = 1.0;
    double energy_tx = 4.0;
    double energy_rx = 4.0;
    double energy_dead_threshold = 5.0;
    double scan_interval = 10.0;
    Policy policy = Policy::Ciser;
    double rho = 0.95;
    double contact_miss_prob = 0.0;
    std::uint64_t seed = 1;
    std::string connectivity = "rwp";  // "rwp" or "trace:<path>"

    void validate() const;

    bool trace_driven() const { return connectivity.rfind("trace:", 0) == 0; }
    std::string trace_path() const { return connectivity.substr(6); }

    /// Canonical key=value text, sorted keys; basis of the config hash.
    std::string canonical() const;
    std::uint64_t hash() const;  // FNV-1a over canonical()

    /// Line-oriented key = value text; '#' comments; unknown keys are errors.
    static SimConfig parse(const std::string& text);
    static SimConfig parse_file(const std::string& path);

    /// Assign one key; throws ConfigInvalid on unknown key or bad value.
    void set(const std::string& key, const std::string& value);
};

}  // namespace ciser

#endif
