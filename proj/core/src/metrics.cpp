#include "tracetopo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "metrics";

// Lifetimes entering the statistics for dimension k under the policy.
// Truncation can produce zero lifetimes (a bar born exactly at the cap);
// those carry no length and are dropped like zero-persistence pairs.
std::vector<double> policy_lifetimes(const PersistenceDiagram& diag, int k, InfinitePolicy policy) {
    std::vector<double> out;
    for (const auto& b : diag.bars) {
        if (b.dim != k) continue;
        if (b.infinite) {
            if (policy == InfinitePolicy::exclude) continue;
            const double l = diag.eps_max - b.birth;
            if (l > 0.0) out.push_back(l);
        } else {
            out.push_back(b.death - b.birth);
        }
    }
    return out;
}

}  // namespace

std::string to_string(InfinitePolicy p) {
    return p == InfinitePolicy::exclude ? "exclude" : "truncate";
}

InfinitePolicy infinite_policy_from_string(const std::string& s) {
    if (s == "exclude") return InfinitePolicy::exclude;
    if (s == "truncate") return InfinitePolicy::truncate;
    throw ConfigError(kModule, "unknown infinite-bar policy '" + s + "' (expected exclude or truncate)");
}

LifetimeStats lifetime_statistics(const PersistenceDiagram& diag, int k, InfinitePolicy policy) {
    const auto lifetimes = policy_lifetimes(diag, k, policy);
    LifetimeStats s;
    s.sample_count = static_cast<int>(lifetimes.size());
    if (lifetimes.empty()) return s;
    for (double l : lifetimes) {
        s.total += l;
        s.max = std::max(s.max, l);
    }
    s.mean = s.total / static_cast<double>(lifetimes.size());
    for (double l : lifetimes) s.variance += (l - s.mean) * (l - s.mean);
    s.variance /= static_cast<double>(lifetimes.size());
    return s;
}

double persistent_entropy(const PersistenceDiagram& diag, int k, InfinitePolicy policy) {
    const auto lifetimes = policy_lifetimes(diag, k, policy);
    double total = 0.0;
    for (double l : lifetimes) total += l;
    if (lifetimes.empty() || total <= 0.0)
        throw NumericError(kModule, "persistent entropy undefined for dimension " + std::to_string(k) +
                                        ": no positive finite lifetime under policy " + to_string(policy));
    double h = 0.0;
    for (double l : lifetimes) {
        if (l <= 0.0) continue;
        const double p = l / total;
        h -= p * std::log(p);
    }
    return h;
}

int feature_count(const PersistenceDiagram& diag, int k, double min_persistence) {
    if (min_persistence < 0.0) throw ConfigError(kModule, "min_persistence must be non-negative");
    int count = 0;
    for (const auto& b : diag.bars) {
        if (b.dim != k) continue;
        if (b.infinite || b.death - b.birth > min_persistence) ++count;
    }
    return count;
}

StableComponents stable_component_count(const PersistenceDiagram& diag) {
    StableComponents out;
    out.count = diag.infinite_bar_count(0);
    out.eps_limited = !diag.full_merge;
    return out;
}

TopologyReport build_report(const PersistenceDiagram& diag, const std::vector<int>& dims,
                            const ReportProvenance& meta, const std::vector<double>& betti_grid) {
    TopologyReport report;
    report.meta = meta;
    report.meta.eps_max = diag.eps_max;
    report.stable = stable_component_count(diag);

    for (int k : dims) {
        DimensionMetrics dm;
        dm.count = feature_count(diag, k, meta.min_persistence);
        dm.infinite_count = diag.infinite_bar_count(k);
        dm.stats = lifetime_statistics(diag, k, meta.infinite_policy);
        try {
            dm.entropy = persistent_entropy(diag, k, meta.infinite_policy);
        } catch (const NumericError& e) {
            dm.entropy = std::nullopt;
            dm.entropy_reason = e.what();
        }
        for (double eps : betti_grid) dm.betti_at_eps[eps] = betti_number_at(diag, eps, k);
        report.dims.emplace(k, std::move(dm));
    }
    return report;
}

namespace {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_eps_key(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

std::map<std::string, std::string> report_flat_fields(const TopologyReport& report) {
    std::map<std::string, std::string> out;
    for (const auto& [k, dm] : report.dims) {
        const std::string p = "h" + std::to_string(k) + ".";
        out[p + "count"] = std::to_string(dm.count);
        out[p + "infinite"] = std::to_string(dm.infinite_count);
        out[p + "total_lifetime"] = format_double(dm.stats.total);
        out[p + "avg_lifetime"] = format_double(dm.stats.mean);
        out[p + "max_lifetime"] = format_double(dm.stats.max);
        out[p + "lifetime_var"] = format_double(dm.stats.variance);
        out[p + "stat_count"] = std::to_string(dm.stats.sample_count);
        out[p + "entropy"] = dm.entropy ? format_double(*dm.entropy) : "";
        for (const auto& [eps, betti] : dm.betti_at_eps)
            out[p + "betti_at_" + format_eps_key(eps)] = std::to_string(betti);
    }
    out["h0.stable"] = std::to_string(report.stable.count);
    out["h0.stable_eps_limited"] = report.stable.eps_limited ? "true" : "false";
    return out;
}

std::string report_to_json(const TopologyReport& report) {
    nlohmann::json doc;
    for (const auto& [k, dm] : report.dims) {
        const std::string p = "h" + std::to_string(k) + ".";
        doc[p + "count"] = dm.count;
        doc[p + "infinite"] = dm.infinite_count;
        doc[p + "total_lifetime"] = dm.stats.total;
        doc[p + "avg_lifetime"] = dm.stats.mean;
        doc[p + "max_lifetime"] = dm.stats.max;
        doc[p + "lifetime_var"] = dm.stats.variance;
        doc[p + "stat_count"] = dm.stats.sample_count;
        if (dm.entropy) {
            doc[p + "entropy"] = *dm.entropy;
        } else {
            doc[p + "entropy"] = nullptr;
            doc[p + "entropy_reason"] = dm.entropy_reason;
        }
        for (const auto& [eps, betti] : dm.betti_at_eps) doc[p + "betti_at_" + format_eps_key(eps)] = betti;
    }
    doc["h0.stable"] = report.stable.count;
    doc["h0.stable_eps_limited"] = report.stable.eps_limited;
    doc["meta.metric"] = report.meta.metric;
    doc["meta.scheme"] = report.meta.scheme;
    doc["meta.eps_max"] = report.meta.eps_max;
    doc["meta.min_persistence"] = report.meta.min_persistence;
    doc["meta.infinite_policy"] = to_string(report.meta.infinite_policy);
    doc["meta.points"] = report.meta.point_count;
    doc["meta.dimension"] = report.meta.point_dimension;
    doc["meta.top_dim_partial"] = report.meta.top_dim_partial;
    return doc.dump(2);
}

std::string report_csv_header(const TopologyReport& report) {
    std::string out;
    for (const auto& [key, value] : report_flat_fields(report)) {
        (void)value;
        if (!out.empty()) out += ',';
        out += key;
    }
    return out;
}

std::string report_csv_row(const TopologyReport& report) {
    std::string out;
    bool first = true;
    for (const auto& [key, value] : report_flat_fields(report)) {
        (void)key;
        if (!first) out += ',';
        first = false;
        out += value;
    }
    return out;
}

}  // namespace tracetopo
