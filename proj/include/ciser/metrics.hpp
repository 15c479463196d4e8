#ifndef CISER_METRICS_HPP
#define CISER_METRICS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ciser {

struct NoMessagesCreated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Overhead ratio and delivery delay are undefined when nothing was
/// delivered; undefined serializes as an empty CSV cell, never 0.
using Metric = std::optional<double>;

struct MetricsReport {
    double delivery_ratio = 0.0;
    Metric overhead_ratio;
    Metric mean_delivery_delay;
    std::string policy;
    std::uint64_t seed = 0;
};

double delivery_ratio(std::uint64_t delivered, std::uint64_t created);

/// (relayed - delivered) / delivered; nullopt when delivered = 0.
Metric overhead_ratio(std::uint64_t relayed, std::uint64_t delivered);

/// Mean of (delivered_at - created_at); nullopt on empty input.
Metric mean_delivery_delay(const std::vector<std::pair<double, double>>& deliveries);

struct CensusSample {
    double t;
    std::uint64_t msg_id;
    int s, e, i, c, r;
    int dead;
};

/// Per-sample infected counts, aggregated over tracked messages.
/// include_carriers selects I+C (the CISER reading) or I alone.
std::vector<std::pair<double, int>> infected_series(
    const std::vector<CensusSample>& census, bool include_carriers = true);

std::string metric_cell(const Metric& m);

/// Median and interquartile range of a sample; used by multi-seed merges.
struct QuartileSummary {
    double median;
    double q1;
    double q3;
};
QuartileSummary quartiles(std::vector<double> values);

}  // namespace ciser

#endif
