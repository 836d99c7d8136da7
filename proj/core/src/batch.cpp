#include "tracetopo/batch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "batch";

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::optional<double> BatchRecord::variable(const std::string& name) const {
    if (name == "acc" || name == "outcome") {
        if (!outcome) return std::nullopt;
        return static_cast<double>(*outcome);
    }
    if (name == "tokens" || name == "token") {
        if (!token_count) return std::nullopt;
        return static_cast<double>(*token_count);
    }
    if (name == "time") return wall_time;

    const auto flat = report_flat_fields(report);
    auto it = flat.find(name);
    if (it == flat.end() || it->second.empty() || it->second == "true" || it->second == "false")
        return std::nullopt;
    return std::stod(it->second);
}

CorrelationMatrix pearson_correlation_matrix(const std::vector<BatchRecord>& records,
                                             const std::vector<std::string>& variables) {
    if (records.size() < 2)
        throw DataError(kModule, "correlation needs at least 2 records, got " + std::to_string(records.size()));

    const std::size_t v = variables.size();
    CorrelationMatrix m;
    m.variables = variables;
    m.r.assign(v, std::vector<std::optional<double>>(v, std::nullopt));
    m.pair_counts.assign(v, std::vector<int>(v, 0));

    // Resolve every variable once per record.
    std::vector<std::vector<std::optional<double>>> values(records.size(),
                                                           std::vector<std::optional<double>>(v));
    for (std::size_t i = 0; i < records.size(); ++i)
        for (std::size_t a = 0; a < v; ++a) values[i][a] = records[i].variable(variables[a]);

    for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = a; b < v; ++b) {
            std::vector<double> xs, ys;
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (values[i][a] && values[i][b]) {
                    xs.push_back(*values[i][a]);
                    ys.push_back(*values[i][b]);
                }
            }
            const int count = static_cast<int>(xs.size());
            m.pair_counts[a][b] = m.pair_counts[b][a] = count;
            if (count < 2) continue;

            const double n = static_cast<double>(count);
            double mx = 0.0, my = 0.0;
            for (int i = 0; i < count; ++i) {
                mx += xs[static_cast<std::size_t>(i)];
                my += ys[static_cast<std::size_t>(i)];
            }
            mx /= n;
            my /= n;
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int i = 0; i < count; ++i) {
                const double dx = xs[static_cast<std::size_t>(i)] - mx;
                const double dy = ys[static_cast<std::size_t>(i)] - my;
                sxx += dx * dx;
                syy += dy * dy;
                sxy += dx * dy;
            }
            if (sxx <= 0.0 || syy <= 0.0) continue;  // zero variance stays undefined
            const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
            m.r[a][b] = r;
            m.r[b][a] = r;
        }
    }
    return m;
}

std::string correlation_to_json(const CorrelationMatrix& m) {
    nlohmann::json doc;
    doc["variables"] = m.variables;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : m.r) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& cell : row) {
            if (cell) r.push_back(*cell);
            else r.push_back(nullptr);
        }
        rows.push_back(r);
    }
    doc["matrix"] = rows;
    doc["pair_counts"] = m.pair_counts;
    // color scale spec so a heatmap can be drawn straight from the data
    doc["color_scale"] = {{"min", -1.0}, {"mid", 0.0}, {"max", 1.0},
                          {"colors", {"#2166ac", "#f7f7f7", "#b2182b"}}};
    return doc.dump(2);
}

std::string correlation_to_csv(const CorrelationMatrix& m) {
    std::string out = "variable";
    for (const auto& v : m.variables) out += "," + v;
    out += '\n';
    for (std::size_t a = 0; a < m.variables.size(); ++a) {
        out += m.variables[a];
        for (std::size_t b = 0; b < m.variables.size(); ++b) {
            out += ',';
            if (m.r[a][b]) out += fmt9(*m.r[a][b]);
        }
        out += '\n';
    }
    return out;
}

std::vector<AggregateRow> aggregate_batch(const std::vector<BatchRecord>& records) {
    if (records.empty()) throw DataError(kModule, "cannot aggregate an empty record set");

    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& r : records) keys.emplace_back(r.dataset, r.method);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    auto dim_stat = [](const TopologyReport& rep, int k, auto f) -> double {
        auto it = rep.dims.find(k);
        return it == rep.dims.end() ? 0.0 : f(it->second);
    };

    std::vector<AggregateRow> rows;
    for (const auto& [dataset, method] : keys) {
        AggregateRow row;
        row.dataset = dataset;
        row.method = method;
        double acc_sum = 0.0;
        int acc_n = 0;
        for (const auto& r : records) {
            if (r.dataset != dataset || r.method != method) continue;
            ++row.records;
            if (r.outcome) {
                acc_sum += *r.outcome;
                ++acc_n;
            }
            row.h0_count_mean += dim_stat(r.report, 0, [](const DimensionMetrics& d) { return double(d.count); });
            row.h1_count_mean += dim_stat(r.report, 1, [](const DimensionMetrics& d) { return double(d.count); });
            row.h0_max_lifetime_mean += dim_stat(r.report, 0, [](const DimensionMetrics& d) { return d.stats.max; });
            row.h0_avg_lifetime_mean += dim_stat(r.report, 0, [](const DimensionMetrics& d) { return d.stats.mean; });
            row.h1_max_lifetime_mean += dim_stat(r.report, 1, [](const DimensionMetrics& d) { return d.stats.max; });
            row.h1_avg_lifetime_mean += dim_stat(r.report, 1, [](const DimensionMetrics& d) { return d.stats.mean; });
        }
        const double n = static_cast<double>(row.records);
        row.h0_count_mean /= n;
        row.h1_count_mean /= n;
        row.h0_max_lifetime_mean /= n;
        row.h0_avg_lifetime_mean /= n;
        row.h1_max_lifetime_mean /= n;
        row.h1_avg_lifetime_mean /= n;
        if (acc_n > 0) row.accuracy = acc_sum / acc_n;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
    std::string out =
        "dataset,method,records,accuracy,h0_count,h1_count,h0_max_lifetime,h0_avg_lifetime,"
        "h1_max_lifetime,h1_avg_lifetime\n";
    for (const auto& r : rows) {
        out += r.dataset + ',' + r.method + ',' + std::to_string(r.records) + ',';
        if (r.accuracy) out += fmt9(*r.accuracy);
        out += ',' + fmt9(r.h0_count_mean) + ',' + fmt9(r.h1_count_mean) + ',' +
               fmt9(r.h0_max_lifetime_mean) + ',' + fmt9(r.h0_avg_lifetime_mean) + ',' +
               fmt9(r.h1_max_lifetime_mean) + ',' + fmt9(r.h1_avg_lifetime_mean) + '\n';
    }
    return out;
}

std::string aggregate_to_json(const std::vector<AggregateRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row;
        row["dataset"] = r.dataset;
        row["method"] = r.method;
        row["records"] = r.records;
        if (r.accuracy) row["accuracy"] = *r.accuracy;
        else row["accuracy"] = nullptr;
        row["h0_count"] = r.h0_count_mean;
        row["h1_count"] = r.h1_count_mean;
        row["h0_max_lifetime"] = r.h0_max_lifetime_mean;
        row["h0_avg_lifetime"] = r.h0_avg_lifetime_mean;
        row["h1_max_lifetime"] = r.h1_max_lifetime_mean;
        row["h1_avg_lifetime"] = r.h1_avg_lifetime_mean;
        arr.push_back(row);
    }
    return arr.dump(2);
}

std::string records_to_csv(const std::vector<BatchRecord>& records) {
    if (records.empty()) return "id,dataset,method,outcome,tokens,time\n";

    // Union of report columns across records, so ragged dimension sets
    // still land in one table.
    std::set<std::string> report_keys;
    for (const auto& r : records)
        for (const auto& [k, v] : report_flat_fields(r.report)) {
            (void)v;
            report_keys.insert(k);
        }

    std::string out = "id,dataset,method,outcome,tokens,time";
    for (const auto& k : report_keys) out += ',' + k;
    out += '\n';
    for (const auto& r : records) {
        out += r.chain_id + ',' + r.dataset + ',' + r.method + ',';
        if (r.outcome) out += std::to_string(*r.outcome);
        out += ',';
        if (r.token_count) out += std::to_string(*r.token_count);
        out += ',';
        if (r.wall_time) out += fmt17(*r.wall_time);
        const auto flat = report_flat_fields(r.report);
        for (const auto& k : report_keys) {
            out += ',';
            auto it = flat.find(k);
            if (it != flat.end()) out += it->second;
        }
        out += '\n';
    }
    return out;
}

}  // namespace tracetopo
