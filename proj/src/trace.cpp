#include "ciser/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace ciser {

namespace {

std::vector<std::string> split_fields(const std::string& line, TraceFormat format) {
    std::vector<std::string> out;
    if (format == TraceFormat::Csv) {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(field);
    } else {
        std::stringstream ss(line);
        std::string field;
        while (ss >> field) out.push_back(field);
    }
    return out;
}

double parse_time(const std::string& s, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineno, "bad numeric field '" + s + "'");
    }
}

}  // namespace

TraceDataset parse_contact_trace(std::istream& in, TraceFormat format,
                                 const std::string& source) {
    TraceDataset ds;
    ds.source = source;
    std::map<std::string, int> remap;
    auto dense_id = [&](const std::string& label) {
        auto [it, inserted] = remap.emplace(label, static_cast<int>(ds.node_labels.size()));
        if (inserted) ds.node_labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    bool header_allowed = (format == TraceFormat::Csv);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        auto fields = split_fields(line, format);
        if (header_allowed && !fields.empty() && fields[0] == "start_s") {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if (fields.size() != 4)
            throw ParseError(lineno, "expected 4 fields (start, end, node_a, node_b)");

        ContactRecord rec;
        rec.start = parse_time(fields[0], lineno);
        rec.end = parse_time(fields[1], lineno);
        if (rec.end < rec.start) throw ParseError(lineno, "contact ends before it starts");
        rec.node_a = dense_id(fields[2]);
        rec.node_b = dense_id(fields[3]);
        if (rec.node_a == rec.node_b) throw ParseError(lineno, "self-contact");
        if (rec.node_a > rec.node_b) std::swap(rec.node_a, rec.node_b);
        ds.records.push_back(rec);
    }
    if (ds.records.empty()) throw EmptyTrace("no contact records");

    std::stable_sort(ds.records.begin(), ds.records.end(),
                     [](const ContactRecord& a, const ContactRecord& b) {
                         return std::tie(a.start, a.end) < std::tie(b.start, b.end);
                     });

    // Renumber so dense ids follow first appearance in sorted order; this
    // makes the canonical export a fixed point of parse -> export -> parse.
    {
        std::vector<int> relabel(ds.node_labels.size(), -1);
        std::vector<std::string> labels;
        labels.reserve(ds.node_labels.size());
        auto assign = [&](int old_id) {
            if (relabel[old_id] < 0) {
                relabel[old_id] = static_cast<int>(labels.size());
                labels.push_back(ds.node_labels[old_id]);
            }
            return relabel[old_id];
        };
        for (auto& rec : ds.records) {
            rec.node_a = assign(rec.node_a);
            rec.node_b = assign(rec.node_b);
            if (rec.node_a > rec.node_b) std::swap(rec.node_a, rec.node_b);
        }
        ds.node_labels = std::move(labels);
    }
    ds.node_count = static_cast<int>(ds.node_labels.size());
    ds.span_begin = ds.records.front().start;
    ds.span_end = 0.0;
    for (const auto& rec : ds.records) ds.span_end = std::max(ds.span_end, rec.end);
    return ds;
}

std::string export_contact_trace(const TraceDataset& dataset) {
    std::string out = "start_s,end_s,node_a,node_b\n";
    char buf[128];
    for (const auto& rec : dataset.records) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%d\n", rec.start, rec.end,
                      rec.node_a, rec.node_b);
        out += buf;
    }
    return out;
}

std::vector<std::pair<int, int>> active_links(const TraceDataset& dataset, double t) {
    std::set<std::pair<int, int>> links;
    for (const auto& rec : dataset.records) {
        if (rec.start > t) break;  // records sorted by start
        if (rec.start <= t && t < rec.end) links.emplace(rec.node_a, rec.node_b);
    }
    return {links.begin(), links.end()};
}

TraceStats trace_stats(const TraceDataset& dataset) {
    if (dataset.records.empty()) throw EmptyTrace("no contact records");
    TraceStats st;
    st.contact_count = dataset.records.size();

    std::map<std::pair<int, int>, std::vector<const ContactRecord*>> per_pair;
    double dur_sum = 0.0;
    st.min_duration = dataset.records.front().end - dataset.records.front().start;
    st.max_duration = st.min_duration;
    for (const auto& rec : dataset.records) {
        per_pair[{rec.node_a, rec.node_b}].push_back(&rec);
        const double d = rec.end - rec.start;
        dur_sum += d;
        st.min_duration = std::min(st.min_duration, d);
        st.max_duration = std::max(st.max_duration, d);
    }
    st.mean_duration = dur_sum / static_cast<double>(st.contact_count);

    for (const auto& [pair, recs] : per_pair) {
        for (std::size_t k = 1; k < recs.size(); ++k) {
            const double gap = recs[k]->start - recs[k - 1]->end;
            if (gap > 0.0) st.inter_contact_gaps.push_back(gap);
        }
    }
    if (!st.inter_contact_gaps.empty()) {
        double acc = 0.0;
        for (double g : st.inter_contact_gaps) acc += g;
        st.mean_inter_contact = acc / static_cast<double>(st.inter_contact_gaps.size());
    }

    const double span = dataset.span_end - dataset.span_begin;
    const double pairs = static_cast<double>(dataset.node_count) *
                         (dataset.node_count - 1) / 2.0;
    if (span > 0.0 && pairs > 0.0)
        st.aggregate_rate = static_cast<double>(st.contact_count) / (pairs * span);
    return st;
}

std::string trace_stats_csv(const TraceStats& st) {
    char buf[256];
    std::string out =
        "contact_count,mean_inter_contact_s,aggregate_rate,mean_duration_s,"
        "min_duration_s,max_duration_s\n";
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  st.contact_count, st.mean_inter_contact, st.aggregate_rate,
                  st.mean_duration, st.min_duration, st.max_duration);
    out += buf;
    return out;
}

}  // namespace ciser
