#ifndef CISER_TRACE_HPP
#define CISER_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ciser {

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};
struct EmptyTrace : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// One pairwise contact interval; node ids are dense 0..N-1 indices.
struct ContactRecord {
    double start;
    double end;
    int node_a;
    int node_b;

    bool operator==(const ContactRecord&) const = default;
};

enum class TraceFormat { Csv, Whitespace };

struct TraceDataset {
    std::vector<ContactRecord> records;  // sorted by start
    std::vector<std::string> node_labels;  // dense index -> original id
    int node_count = 0;
    double span_begin = 0.0;
    double span_end = 0.0;
    std::string source;

    bool operator==(const TraceDataset& o) const {
        return records == o.records && node_count == o.node_count;
    }
};

struct TraceStats {
    std::vector<double> inter_contact_gaps;  // pooled over pairs
    double mean_inter_contact = 0.0;
    double aggregate_rate = 0.0;  // contacts / (pairs * span)
    double mean_duration = 0.0;
    double min_duration = 0.0;
    double max_duration = 0.0;
    std::size_t contact_count = 0;
};

TraceDataset parse_contact_trace(std::istream& in, TraceFormat format,
                                 const std::string& source = "");

/// Canonical CSV form: header start_s,end_s,node_a,node_b.
std::string export_contact_trace(const TraceDataset& dataset);

/// Pairs (a < b) with start <= t < end, ordered lexicographically.
std::vector<std::pair<int, int>> active_links(const TraceDataset& dataset, double t);

TraceStats trace_stats(const TraceDataset& dataset);

std::string trace_stats_csv(const TraceStats& stats);

}  // namespace ciser

#endif
