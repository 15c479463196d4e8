#include "ciser/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace ciser {

double delivery_ratio(std::uint64_t delivered, std::uint64_t created) {
    if (created == 0) throw NoMessagesCreated("no messages created");
    return static_cast<double>(delivered) / static_cast<double>(created);
}

Metric overhead_ratio(std::uint64_t relayed, std::uint64_t delivered) {
    if (delivered == 0) return std::nullopt;
    return (static_cast<double>(relayed) - static_cast<double>(delivered)) /
           static_cast<double>(delivered);
}

Metric mean_delivery_delay(const std::vector<std::pair<double, double>>& deliveries) {
    if (deliveries.empty()) return std::nullopt;
    double acc = 0.0;
    for (const auto& [created, delivered] : deliveries) acc += delivered - created;
    return acc / static_cast<double>(deliveries.size());
}

std::vector<std::pair<double, int>> infected_series(
    const std::vector<CensusSample>& census, bool include_carriers) {
    std::map<double, int> by_time;
    for (const auto& sample : census) {
        int n = sample.i;
        if (include_carriers) n += sample.c;
        by_time[sample.t] += n;
    }
    return {by_time.begin(), by_time.end()};
}

std::string metric_cell(const Metric& m) {
    if (!m) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", *m);
    return buf;
}

QuartileSummary quartiles(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    auto interp = [&](double q) {
        const double pos = q * (static_cast<double>(values.size()) - 1.0);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    return {interp(0.5), interp(0.25), interp(0.75)};
}

}  // namespace ciser
