#include "ciser/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <tuple>

namespace ciser {

std::pair<double, double> NodeState::position(double t) const {
    if (t <= depart_time) return {ox, oy};
    const double dx = wx - ox, dy = wy - oy;
    const double dist = std::hypot(dx, dy);
    if (dist == 0.0) return {wx, wy};
    const double travelled = speed * (t - depart_time);
    if (travelled >= dist) return {wx, wy};
    const double f = travelled / dist;
    return {ox + f * dx, oy + f * dy};
}

namespace {

// Event ranks fix the processing order at equal timestamps: mobility first,
// then message lifecycle, then transfer completions, census scan last.
enum class EventKind : int {
    WaypointArrival = 0,
    MessageCreation = 1,
    TtlExpiry = 2,
    TransferComplete = 3,
    ScanTick = 4,
};

struct QueuedEvent {
    double t;
    EventKind kind;
    int a = -1;
    int b = -1;
    std::int64_t msg = -1;
};

struct EventLater {
    bool operator()(const QueuedEvent& x, const QueuedEvent& y) const {
        if (x.t != y.t) return x.t > y.t;
        if (x.kind != y.kind) return static_cast<int>(x.kind) > static_cast<int>(y.kind);
        if (x.a != y.a) return x.a > y.a;
        if (x.b != y.b) return x.b > y.b;
        return x.msg > y.msg;
    }
};

// Dedicated substream ids; node ids occupy [0, n).
constexpr std::uint64_t kMessageStream = 1u << 20;
constexpr std::uint64_t kNoiseStream = (1u << 20) + 1;

struct MsgCensus {
    int e = 0, i = 0, c = 0, r = 0;
};

class Engine {
  public:
    Engine(const SimConfig& cfg, const RunOptions& opts) : cfg_(cfg), opts_(opts) {
        cfg_.validate();
        if (cfg_.trace_driven()) {
            if (opts_.trace) {
                trace_ = *opts_.trace;
            } else {
                std::ifstream in(cfg_.trace_path());
                if (!in)
                    throw ConfigInvalid("cannot open trace '" + cfg_.trace_path() + "'");
                const bool ws = cfg_.trace_path().ends_with(".txt");
                trace_ = parse_contact_trace(
                    in, ws ? TraceFormat::Whitespace : TraceFormat::Csv,
                    cfg_.trace_path());
            }
            cfg_.n_nodes = trace_->node_count;
            build_link_index();
        }
        result_.config = cfg_;
    }

    SimResult run() {
        init_nodes();
        msg_rng_ = Rng(cfg_.seed, kMessageStream);
        noise_rng_ = Rng(cfg_.seed, kNoiseStream);

        schedule({msg_rng_.uniform(cfg_.message_interval_min, cfg_.message_interval_max),
                  EventKind::MessageCreation});
        for (double t = 0.0; t <= cfg_.sim_duration; t += cfg_.scan_interval)
            schedule({t, EventKind::ScanTick});

        while (!queue_.empty()) {
            const QueuedEvent ev = queue_.top();
            queue_.pop();
            if (ev.t > cfg_.sim_duration) break;
            dispatch(ev);
        }
        result_.final_dead_count = dead_count_;
        return std::move(result_);
    }

  private:
    void schedule(QueuedEvent ev) { queue_.push(ev); }

    void init_nodes() {
        nodes_.resize(cfg_.n_nodes);
        for (int k = 0; k < cfg_.n_nodes; ++k) {
            auto& n = nodes_[k];
            n.id = k;
            n.energy = cfg_.energy_initial;
            n.rng = Rng(cfg_.seed, static_cast<std::uint64_t>(k));
            if (!cfg_.trace_driven()) {
                n.ox = n.rng.uniform(0.0, cfg_.area_width);
                n.oy = n.rng.uniform(0.0, cfg_.area_height);
                start_leg(n, 0.0);
            }
        }
    }

    void start_leg(NodeState& n, double now) {
        const RwpLeg leg = rwp_next_leg(cfg_, n.rng);
        n.wx = leg.wx;
        n.wy = leg.wy;
        n.speed = leg.speed;
        n.depart_time = now + leg.pause;
        const double dist = std::hypot(n.wx - n.ox, n.wy - n.oy);
        schedule({n.depart_time + dist / n.speed, EventKind::WaypointArrival, n.id});
    }

    void dispatch(const QueuedEvent& ev) {
        switch (ev.kind) {
            case EventKind::WaypointArrival: on_waypoint(ev); break;
            case EventKind::MessageCreation: on_creation(ev); break;
            case EventKind::TtlExpiry: on_ttl(ev); break;
            case EventKind::TransferComplete: on_transfer_complete(ev); break;
            case EventKind::ScanTick: on_scan(ev); break;
        }
    }

    void log(double t, const char* kind, int a, int b, std::int64_t msg) {
        if (opts_.log_events)
            result_.events.push_back({t, kind, a, b, msg});
    }

    Compartment role_of(const NodeState& n, std::uint64_t msg) const {
        const auto it = n.roles.find(msg);
        return it == n.roles.end() ? Compartment::S : it->second;
    }

    void set_role(NodeState& n, std::uint64_t msg, Compartment to) {
        const Compartment from = role_of(n, msg);
        if (from == to) return;
        if (n.alive && live_.count(msg)) {
            auto& cen = census_[msg];
            adjust(cen, from, -1);
            adjust(cen, to, +1);
        }
        if (to == Compartment::S)
            n.roles.erase(msg);
        else
            n.roles[msg] = to;
    }

    static void adjust(MsgCensus& c, Compartment role, int d) {
        switch (role) {
            case Compartment::S: break;
            case Compartment::E: c.e += d; break;
            case Compartment::I: c.i += d; break;
            case Compartment::C: c.c += d; break;
            case Compartment::R: c.r += d; break;
        }
    }

    void drop_copy(NodeState& n, const Message& m) {
        if (n.copies.erase(m.id)) n.buffer_used -= m.size;
    }

    void store_copy(NodeState& n, const Message& m) {
        n.copies.insert(m.id);
        n.buffer_used += m.size;
        holders_[m.id].insert(n.id);
    }

    void pay_energy(NodeState& n, double amount, double now) {
        if (!n.alive) return;
        n.energy -= amount;
        if (n.energy < cfg_.energy_dead_threshold) kill(n, now);
    }

    void kill(NodeState& n, double now) {
        n.alive = false;
        ++dead_count_;
        for (const auto& [msg, role] : n.roles)
            if (live_.count(msg)) adjust(census_[msg], role, -1);
        log(now, "node-dead", n.id, -1, -1);
    }

    bool in_range(const NodeState& a, const NodeState& b, double t) const {
        if (trace_) return link_active(a.id, b.id, t);
        const auto [ax, ay] = a.position(t);
        const auto [bx, by] = b.position(t);
        return std::hypot(ax - bx, ay - by) <= cfg_.tx_range;  // closed ball
    }

    void build_link_index() {
        for (const auto& rec : trace_->records)
            link_index_[{rec.node_a, rec.node_b}].emplace_back(rec.start, rec.end);
    }

    bool link_active(int a, int b, double t) const {
        if (a > b) std::swap(a, b);
        const auto it = link_index_.find({a, b});
        if (it == link_index_.end()) return false;
        for (const auto& [s, e] : it->second)
            if (s <= t && t < e) return true;
        return false;
    }

    void on_waypoint(const QueuedEvent& ev) {
        auto& n = nodes_[ev.a];
        n.ox = n.wx;
        n.oy = n.wy;
        start_leg(n, ev.t);
    }

    // Draw order per creation: source, destination, size, next interval.
    void on_creation(const QueuedEvent& ev) {
        if (cfg_.n_nodes >= 2) {
            const int src = static_cast<int>(msg_rng_.uniform_below(cfg_.n_nodes));
            int dst = static_cast<int>(msg_rng_.uniform_below(cfg_.n_nodes - 1));
            if (dst >= src) ++dst;
            const double size =
                msg_rng_.uniform(cfg_.message_size_min, cfg_.message_size_max);

            Message m;
            m.id = messages_.size();
            m.source = src;
            m.destination = dst;
            m.size = size;
            m.created_at = ev.t;
            m.ttl_expiry = ev.t + cfg_.ttl;
            messages_.push_back(m);
            live_.insert(m.id);
            census_.emplace(m.id, MsgCensus{});
            ++result_.created;
            result_.creation_times.push_back(ev.t);
            schedule({m.ttl_expiry, EventKind::TtlExpiry, -1, -1,
                      static_cast<std::int64_t>(m.id)});
            log(ev.t, "created", src, dst, static_cast<std::int64_t>(m.id));

            auto& source = nodes_[src];
            if (source.alive &&
                source.buffer_used + m.size <= cfg_.buffer_capacity) {
                store_copy(source, m);
                set_role(source, m.id, Compartment::I);
            } else if (source.alive) {
                // Source cannot hold its own message; it stays exposed and
                // the copy only materializes if buffer space frees in time
                // (it cannot, there is no other holder to fetch from).
                set_role(source, m.id, Compartment::E);
            }
        }
        const double next =
            ev.t + msg_rng_.uniform(cfg_.message_interval_min, cfg_.message_interval_max);
        schedule({next, EventKind::MessageCreation});
    }

    void on_ttl(const QueuedEvent& ev) {
        const auto msg_id = static_cast<std::uint64_t>(ev.msg);
        const Message& m = messages_[msg_id];
        if (auto it = holders_.find(msg_id); it != holders_.end()) {
            for (int node : it->second) {
                auto& n = nodes_[node];
                drop_copy(n, m);
                set_role(n, msg_id, Compartment::R);
            }
            holders_.erase(it);
        }
        for (auto& n : nodes_)  // pending E markers expire too
            if (role_of(n, msg_id) == Compartment::E)
                set_role(n, msg_id, Compartment::R);
        live_.erase(msg_id);
        census_.erase(msg_id);
        log(ev.t, "ttl-expiry", -1, -1, ev.msg);
    }

    void on_transfer_complete(const QueuedEvent& ev) {
        auto& holder = nodes_[ev.a];
        auto& receiver = nodes_[ev.b];
        const auto msg_id = static_cast<std::uint64_t>(ev.msg);
        Message& m = messages_[msg_id];

        const bool ok = holder.alive && receiver.alive && live_.count(msg_id) &&
                        holder.copies.count(msg_id) && in_range(holder, receiver, ev.t);
        if (!ok) {
            ++result_.aborted;
            log(ev.t, "transfer-aborted", ev.a, ev.b, ev.msg);
            return;
        }

        pay_energy(holder, cfg_.energy_tx, ev.t);
        pay_energy(receiver, cfg_.energy_rx, ev.t);

        if (receiver.id == m.destination) {
            // Every completed transfer counts as a relay, the final hop
            // included, so overhead = (relayed - delivered) / delivered is
            // the count of non-delivering transmissions per delivery.
            ++result_.relayed;
            result_.relay_times.push_back(ev.t);
            if (!m.delivered_at) {
                m.delivered_at = ev.t;
                ++result_.delivered;
                result_.deliveries.emplace_back(m.created_at, ev.t);
                log(ev.t, "delivered", ev.a, ev.b, ev.msg);
            }
            set_role(receiver, msg_id, Compartment::R);
            // A node that hands the message to its destination has cleared it.
            drop_copy(holder, m);
            holders_[msg_id].erase(holder.id);
            set_role(holder, msg_id, Compartment::R);
            return;
        }

        ++result_.relayed;
        result_.relay_times.push_back(ev.t);
        log(ev.t, "relayed", ev.a, ev.b, ev.msg);
        if (receiver.buffer_used + m.size <= cfg_.buffer_capacity) {
            store_copy(receiver, m);
            set_role(receiver, msg_id, Compartment::I);
        } else if (cfg_.policy == Policy::Ciser) {
            set_role(receiver, msg_id, Compartment::E);
        }
        // SIR flooding has no resource bookkeeping: an un-storable copy is
        // simply lost and the node stays susceptible to re-offers.
    }

    struct Candidate {
        int priority;  // 0 = destination-bound
        std::uint64_t msg;
        int holder;
        int receiver;
        bool operator<(const Candidate& o) const {
            return std::tie(priority, msg, holder) < std::tie(o.priority, o.msg, o.holder);
        }
    };

    void on_scan(const QueuedEvent& ev) {
        const double t = ev.t;
        for (auto& n : nodes_) pay_energy(n, cfg_.energy_scan, t);

        std::vector<std::pair<int, int>> contacts;
        if (trace_) {
            if (t >= trace_->span_begin && t <= trace_->span_end)
                for (const auto& link : active_links(*trace_, t))
                    if (nodes_[link.first].alive && nodes_[link.second].alive)
                        contacts.push_back(link);
        } else {
            for (int a = 0; a < cfg_.n_nodes; ++a) {
                if (!nodes_[a].alive) continue;
                for (int b = a + 1; b < cfg_.n_nodes; ++b)
                    if (nodes_[b].alive && in_range(nodes_[a], nodes_[b], t))
                        contacts.emplace_back(a, b);
            }
        }
        if (cfg_.contact_miss_prob > 0.0) {
            std::erase_if(contacts, [&](const auto&) {
                return noise_rng_.bernoulli(cfg_.contact_miss_prob);
            });
        }

        for (const auto& [a, b] : contacts) try_pair(a, b, t);
        sample_census(t);
    }

    void try_pair(int a, int b, double t) {
        auto& na = nodes_[a];
        auto& nb = nodes_[b];
        if (na.busy_until > t || nb.busy_until > t) return;

        std::vector<Candidate> candidates;
        auto collect = [&](NodeState& h, NodeState& v) {
            for (std::uint64_t msg_id : h.copies) {
                if (!live_.count(msg_id)) continue;
                const Compartment hr = role_of(h, msg_id);
                if (hr != Compartment::I && hr != Compartment::C) continue;
                const Message& m = messages_[msg_id];
                const Compartment vr = role_of(v, msg_id);
                if (v.id == m.destination) {
                    if (vr != Compartment::R)
                        candidates.push_back({0, msg_id, h.id, v.id});
                } else if (vr == Compartment::S ||
                           (cfg_.policy == Policy::Ciser && vr == Compartment::E)) {
                    candidates.push_back({1, msg_id, h.id, v.id});
                }
            }
        };
        collect(na, nb);
        collect(nb, na);
        std::sort(candidates.begin(), candidates.end());

        for (const auto& cand : candidates) {
            auto& h = nodes_[cand.holder];
            auto& v = nodes_[cand.receiver];
            const Message& m = messages_[cand.msg];
            const bool to_destination = (v.id == m.destination);

            if (cfg_.policy == Policy::Ciser) {
                if (!to_destination && role_of(h, cand.msg) == Compartment::I) {
                    // One-time carrier branch at the first forwarding
                    // opportunity; losing it retires this copy.
                    if (h.rng.bernoulli(cfg_.rho)) {
                        set_role(h, cand.msg, Compartment::C);
                    } else {
                        drop_copy(h, m);
                        holders_[cand.msg].erase(h.id);
                        set_role(h, cand.msg, Compartment::R);
                        continue;
                    }
                }
                if (!to_destination) {
                    const bool admissible =
                        v.buffer_used + m.size <= cfg_.buffer_capacity &&
                        v.energy >= cfg_.energy_rx + cfg_.energy_dead_threshold;
                    if (!admissible) {
                        set_role(v, cand.msg, Compartment::E);
                        continue;
                    }
                }
            }

            const double done = t + m.size / cfg_.tx_speed;
            h.busy_until = done;
            v.busy_until = done;
            schedule({done, EventKind::TransferComplete, h.id, v.id,
                      static_cast<std::int64_t>(cand.msg)});
            log(t, "transfer-start", h.id, v.id, static_cast<std::int64_t>(cand.msg));
            return;  // the pair is saturated until the transfer completes
        }
    }

    void sample_census(double t) {
        const int alive = cfg_.n_nodes - dead_count_;
        for (std::uint64_t msg_id : live_) {
            const auto& c = census_.at(msg_id);
            result_.census.push_back({t, msg_id, alive - (c.e + c.i + c.c + c.r), c.e,
                                      c.i, c.c, c.r, dead_count_});
        }
    }

    SimConfig cfg_;
    RunOptions opts_;
    SimResult result_;
    std::vector<NodeState> nodes_;
    std::vector<Message> messages_;
    std::set<std::uint64_t> live_;
    std::map<std::uint64_t, MsgCensus> census_;
    std::map<std::uint64_t, std::set<int>> holders_;
    std::optional<TraceDataset> trace_;
    std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> link_index_;
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, EventLater> queue_;
    Rng msg_rng_;
    Rng noise_rng_;
    int dead_count_ = 0;
};

}  // namespace

RwpLeg rwp_next_leg(const SimConfig& config, Rng& rng) {
    RwpLeg leg;
    leg.wx = rng.uniform(0.0, config.area_width);
    leg.wy = rng.uniform(0.0, config.area_height);
    leg.speed = rng.uniform(config.node_speed_min, config.node_speed_max);
    leg.pause = rng.uniform(config.wait_time_min, config.wait_time_max);
    return leg;
}

double contact_rate_rwp(double area_side, double tx_range, double mean_rel_speed) {
    constexpr double kRwpConstant = 1.3683;
    return 2.0 * kRwpConstant * tx_range * mean_rel_speed / (area_side * area_side);
}

SimResult run_simulation(const SimConfig& config, const RunOptions& options) {
    return Engine(config, options).run();
}

std::uint64_t SimResult::created_before(double horizon) const {
    return std::count_if(creation_times.begin(), creation_times.end(),
                         [&](double t) { return t <= horizon; });
}

std::uint64_t SimResult::delivered_before(double horizon) const {
    return std::count_if(deliveries.begin(), deliveries.end(),
                         [&](const auto& d) { return d.second <= horizon; });
}

std::uint64_t SimResult::relayed_before(double horizon) const {
    return std::count_if(relay_times.begin(), relay_times.end(),
                         [&](double t) { return t <= horizon; });
}

MetricsReport SimResult::metrics_at(double horizon) const {
    MetricsReport rep;
    rep.policy = policy_name(config.policy);
    rep.seed = config.seed;
    const auto created_n = created_before(horizon);
    const auto delivered_n = delivered_before(horizon);
    rep.delivery_ratio = created_n == 0 ? 0.0 : delivery_ratio(delivered_n, created_n);
    rep.overhead_ratio = overhead_ratio(relayed_before(horizon), delivered_n);
    std::vector<std::pair<double, double>> done;
    for (const auto& d : deliveries)
        if (d.second <= horizon) done.push_back(d);
    rep.mean_delivery_delay = mean_delivery_delay(done);
    return rep;
}

namespace {

std::string file_header(const SimConfig& cfg) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "# ciser-dtn 1.0\n# config_hash=%016llx\n# seed=%llu\n",
                  static_cast<unsigned long long>(cfg.hash()),
                  static_cast<unsigned long long>(cfg.seed));
    return buf;
}

}  // namespace

std::string SimResult::summary_csv() const {
    const auto rep = metrics_at(config.sim_duration);
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%016llx,%llu,%s,%llu,%llu,%llu,%.17g,%s,%s\n",
                  static_cast<unsigned long long>(config.hash()),
                  static_cast<unsigned long long>(config.seed),
                  rep.policy.c_str(), static_cast<unsigned long long>(created),
                  static_cast<unsigned long long>(delivered),
                  static_cast<unsigned long long>(relayed), rep.delivery_ratio,
                  metric_cell(rep.overhead_ratio).c_str(),
                  metric_cell(rep.mean_delivery_delay).c_str());
    return file_header(config) +
           "config_hash,seed,policy,created,delivered,relayed,delivery_ratio,"
           "overhead_ratio,mean_delivery_delay\n" +
           buf;
}

std::string SimResult::census_csv() const {
    std::string out = file_header(config) + "t,msg_id,S,E,I,C,R,dead\n";
    char buf[192];
    for (const auto& c : census) {
        std::snprintf(buf, sizeof(buf), "%.17g,%llu,%d,%d,%d,%d,%d,%d\n", c.t,
                      static_cast<unsigned long long>(c.msg_id), c.s, c.e, c.i, c.c,
                      c.r, c.dead);
        out += buf;
    }
    return out;
}

std::string SimResult::events_csv() const {
    std::string out = file_header(config) + "t,kind,node_a,node_b,msg_id\n";
    char buf[192];
    for (const auto& e : events) {
        std::snprintf(buf, sizeof(buf), "%.17g,%s,%d,%d,%lld\n", e.t, e.kind.c_str(),
                      e.node_a, e.node_b, static_cast<long long>(e.msg_id));
        out += buf;
    }
    return out;
}

}  // namespace ciser
