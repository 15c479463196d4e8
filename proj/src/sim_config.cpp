#include "ciser/sim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ciser {

std::string policy_name(Policy p) { return p == Policy::Sir ? "sir" : "ciser"; }

Policy parse_policy(const std::string& name) {
    if (name == "sir") return Policy::Sir;
    if (name == "ciser") return Policy::Ciser;
    throw ConfigInvalid("policy must be 'sir' or 'ciser', got '" + name + "'");
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Key table shared by parse, set and canonical; double fields only.
using FieldMap = std::map<std::string, double SimConfig::*>;

const FieldMap& double_fields() {
    static const FieldMap fields = {
        {"area_width", &SimConfig::area_width},
        {"area_height", &SimConfig::area_height},
        {"sim_duration", &SimConfig::sim_duration},
        {"tx_range", &SimConfig::tx_range},
        {"tx_speed", &SimConfig::tx_speed},
        {"node_speed_min", &SimConfig::node_speed_min},
        {"node_speed_max", &SimConfig::node_speed_max},
        {"wait_time_min", &SimConfig::wait_time_min},
        {"wait_time_max", &SimConfig::wait_time_max},
        {"buffer_capacity", &SimConfig::buffer_capacity},
        {"message_size_min", &SimConfig::message_size_min},
        {"message_size_max", &SimConfig::message_size_max},
        {"message_interval_min", &SimConfig::message_interval_min},
        {"message_interval_max", &SimConfig::message_interval_max},
        {"ttl", &SimConfig::ttl},
        {"energy_initial", &SimConfig::energy_initial},
        {"energy_scan", &SimConfig::energy_scan},
        {"energy_tx", &SimConfig::energy_tx},
        {"energy_rx", &SimConfig::energy_rx},
        {"energy_dead_threshold", &SimConfig::energy_dead_threshold},
        {"scan_interval", &SimConfig::scan_interval},
        {"rho", &SimConfig::rho},
        {"contact_miss_prob", &SimConfig::contact_miss_prob},
    };
    return fields;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigInvalid("bad numeric value for '" + key + "': '" + value + "'");
    }
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

void SimConfig::set(const std::string& key, const std::string& value) {
    const auto& fields = double_fields();
    if (auto it = fields.find(key); it != fields.end()) {
        this->*(it->second) = parse_double(key, value);
        return;
    }
    if (key == "n_nodes") {
        n_nodes = static_cast<int>(parse_double(key, value));
    } else if (key == "seed") {
        try {
            seed = std::stoull(value);
        } catch (const std::exception&) {
            throw ConfigInvalid("bad seed '" + value + "'");
        }
    } else if (key == "policy") {
        policy = parse_policy(value);
    } else if (key == "connectivity") {
        connectivity = value;
    } else {
        throw ConfigInvalid("unknown config key '" + key + "'");
    }
}

SimConfig SimConfig::parse(const std::string& text) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigInvalid("line " + std::to_string(lineno) + ": expected key = value");
        cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

SimConfig SimConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void SimConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigInvalid(std::string(name) + " must be positive");
    };
    if (n_nodes < 1) throw ConfigInvalid("n_nodes must be at least 1");
    positive(area_width, "area_width");
    positive(area_height, "area_height");
    positive(sim_duration, "sim_duration");
    positive(tx_range, "tx_range");
    positive(tx_speed, "tx_speed");
    positive(node_speed_min, "node_speed_min");
    positive(buffer_capacity, "buffer_capacity");
    positive(message_size_min, "message_size_min");
    positive(message_interval_min, "message_interval_min");
    positive(ttl, "ttl");
    positive(energy_initial, "energy_initial");
    positive(scan_interval, "scan_interval");
    if (wait_time_min < 0.0 || energy_scan < 0.0 || energy_tx < 0.0 ||
        energy_rx < 0.0 || energy_dead_threshold < 0.0)
        throw ConfigInvalid("energy and wait values must be non-negative");
    auto ordered = [](double lo, double hi, const char* name) {
        if (lo > hi) throw ConfigInvalid(std::string(name) + ": min exceeds max");
    };
    ordered(node_speed_min, node_speed_max, "node_speed");
    ordered(wait_time_min, wait_time_max, "wait_time");
    ordered(message_size_min, message_size_max, "message_size");
    ordered(message_interval_min, message_interval_max, "message_interval");
    if (!(tx_range < area_width && tx_range < area_height))
        throw ConfigInvalid("tx_range must be smaller than both area dimensions");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigInvalid("rho must lie in [0,1]");
    if (!(contact_miss_prob >= 0.0 && contact_miss_prob < 1.0))
        throw ConfigInvalid("contact_miss_prob must lie in [0,1)");
    if (connectivity != "rwp" && !trace_driven())
        throw ConfigInvalid("connectivity must be 'rwp' or 'trace:<path>'");
}

std::string SimConfig::canonical() const {
    std::map<std::string, std::string> kv;
    for (const auto& [key, member] : double_fields()) kv[key] = fmt(this->*member);
    kv["n_nodes"] = std::to_string(n_nodes);
    kv["seed"] = std::to_string(seed);
    kv["policy"] = policy_name(policy);
    kv["connectivity"] = connectivity;
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t SimConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace ciser
