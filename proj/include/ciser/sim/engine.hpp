#ifndef CISER_SIM_ENGINE_HPP
#define CISER_SIM_ENGINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ciser/metrics.hpp"
#include "ciser/sim/config.hpp"
#include "ciser/sim/rng.hpp"
#include "ciser/trace.hpp"

namespace ciser {

/// Per-message role of a node. Absence from a node's map means S.
enum class Compartment { S, E, I, C, R };

struct Message {
    std::uint64_t id;
    int source;
    int destination;
    double size;
    double created_at;
    double ttl_expiry;
    std::optional<double> delivered_at;
};

struct NodeState {
    int id = 0;
    // RWP leg: at origin until depart_time, then straight to waypoint.
    double ox = 0.0, oy = 0.0;
    double wx = 0.0, wy = 0.0;
    double depart_time = 0.0;
    double speed = 1.0;
    double energy = 0.0;
    bool alive = true;
    double busy_until = 0.0;
    double buffer_used = 0.0;
    std::set<std::uint64_t> copies;  // message ids held in buffer
    std::map<std::uint64_t, Compartment> roles;
    Rng rng;

    std::pair<double, double> position(double t) const;
};

struct SimEvent {
    double t;
    std::string kind;
    int node_a;
    int node_b;
    std::int64_t msg_id;  // -1 when not message-bound
};

struct SimResult {
    SimConfig config;
    std::uint64_t created = 0;
    std::uint64_t delivered = 0;
    std::uint64_t relayed = 0;
    std::uint64_t aborted = 0;
    std::vector<double> creation_times;
    std::vector<std::pair<double, double>> deliveries;  // (created_at, delivered_at)
    std::vector<double> relay_times;
    std::vector<CensusSample> census;
    std::vector<SimEvent> events;  // filled only when log_events set
    int final_dead_count = 0;

    std::uint64_t created_before(double horizon) const;
    std::uint64_t delivered_before(double horizon) const;
    std::uint64_t relayed_before(double horizon) const;
    MetricsReport metrics_at(double horizon) const;

    std::string summary_csv() const;  // one data row; deterministic header
    std::string census_csv() const;
    std::string events_csv() const;
};

/// One RWP leg; draw order is waypoint x, waypoint y, speed, pause.
struct RwpLeg {
    double wx, wy, speed, pause;
};
RwpLeg rwp_next_leg(const SimConfig& config, Rng& rng);

/// Contact rate approximation for RWP mobility: 2 * 1.3683 * r * E[V] / A^2.
double contact_rate_rwp(double area_side, double tx_range, double mean_rel_speed);

struct RunOptions {
    bool log_events = false;
    /// Preparsed dataset for trace connectivity; loaded from the config's
    /// trace path when absent.
    std::optional<TraceDataset> trace;
};

SimResult run_simulation(const SimConfig& config, const RunOptions& options = {});

}  // namespace ciser

#endif
