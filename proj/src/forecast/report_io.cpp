#include "flucast/forecast/report_io.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/format.hpp"
#include "flucast/core/random.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace flucast::forecast {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw DataError(where + ": bad number '" + text + "'");
    }
    return value;
}

metrics::EvalSummary summarize(const std::vector<const ForecastRecord*>& recs) {
    std::vector<double> truth;
    std::vector<double> pred;
    for (const auto* r : recs) {
        truth.push_back(r->truth);
        pred.push_back(r->prediction);
    }
    return metrics::evaluate(truth, pred);
}

std::string scope_label(int season) {
    return core::Season(season).label();
}

} // namespace

void write_forecast_csv(std::ostream& out, const ForecastReport& report) {
    out << kForecastHeader << '\n';
    for (const auto& r : report.records) {
        out << r.method << ',' << r.k << ',' << r.target_week.year() << ',' << r.target_week.week() << ','
            << core::format_double(r.truth) << ',' << core::format_double(r.prediction) << ','
            << core::format_double(r.abs_pct_error()) << '\n';
    }
}

void write_forecast_csv(const std::filesystem::path& path, const ForecastReport& report) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    write_forecast_csv(out, report);
}

void write_models_csv(std::ostream& out, const ForecastReport& report) {
    out << "method,k,year,week,h,C,gamma,epsilon,n_training_rows\n";
    for (const auto& r : report.records) {
        out << r.method << ',' << r.k << ',' << r.target_week.year() << ',' << r.target_week.week() << ','
            << r.h << ',' << core::format_double(r.hp.C) << ',' << core::format_double(r.hp.gamma) << ','
            << core::format_double(r.hp.epsilon) << ',' << r.n_training_rows << '\n';
    }
}

std::vector<ForecastRecord> read_forecast_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line) || line != kForecastHeader) {
        throw DataError(source + ": expected header '" + std::string(kForecastHeader) + "'");
    }
    std::vector<ForecastRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const std::string where = source + ":" + std::to_string(lineno);
        const auto f = split(line);
        if (f.size() != 7) {
            throw DataError(where + ": expected 7 fields");
        }
        ForecastRecord r;
        r.method = f[0];
        if (r.method.empty()) {
            throw DataError(where + ": empty method");
        }
        r.k = parse_number<int>(f[1], where);
        const int year = parse_number<int>(f[2], where);
        const int week = parse_number<int>(f[3], where);
        if (!core::is_valid_week(year, week)) {
            throw DataError(where + ": invalid week");
        }
        r.target_week = core::WeekId(year, week);
        const auto season = core::Season::containing(r.target_week);
        if (!season) {
            throw DataError(where + ": target week outside every season");
        }
        r.season = season->start_year();
        r.truth = parse_number<double>(f[4], where);
        r.prediction = parse_number<double>(f[5], where);
        if (!(r.truth > 0.0 && r.truth < 1.0) || !(r.prediction > 0.0 && r.prediction < 1.0)) {
            throw DataError(where + ": rates must lie in (0, 1)");
        }
        out.push_back(r);
    }
    return out;
}

std::vector<ForecastRecord> read_forecast_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return read_forecast_csv(in, path.string());
}

std::vector<int> horizons_of(const std::vector<ForecastRecord>& records) {
    std::set<int> ks;
    for (const auto& r : records) {
        ks.insert(r.k);
    }
    return {ks.begin(), ks.end()};
}

std::vector<metrics::SummaryRow> summary_rows(const std::vector<ForecastRecord>& records) {
    // (season or -1 for pooled, method, k)
    std::map<int, std::map<std::string, std::map<int, std::vector<const ForecastRecord*>>>> groups;
    for (const auto& r : records) {
        groups[-1][r.method][r.k].push_back(&r);
        groups[r.season][r.method][r.k].push_back(&r);
    }
    std::vector<metrics::SummaryRow> rows;
    for (const auto& [season, methods] : groups) {
        for (const auto& [method, ks] : methods) {
            metrics::SummaryRow row{season < 0 ? "pooled" : scope_label(season), method, {}};
            for (const auto& [k, recs] : ks) {
                row.by_k[k] = summarize(recs);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<metrics::EfficiencyRow> efficiency_rows(const std::vector<ForecastRecord>& records,
                                                    const std::string& baseline,
                                                    const metrics::EfficiencyCiOptions& options) {
    std::map<std::string, std::map<int, std::map<core::WeekId, const ForecastRecord*>>> by;
    for (const auto& r : records) {
        auto& slot = by[r.method][r.k][r.target_week];
        if (slot) {
            throw DataError("duplicate forecast for " + r.method + " k=" + std::to_string(r.k) + " " +
                            r.target_week.to_string());
        }
        slot = &r;
    }
    std::vector<metrics::EfficiencyRow> rows;
    const auto base = by.find(baseline);
    if (base == by.end()) {
        return rows;
    }
    std::uint64_t index = 0;
    for (const auto& [method, ks] : by) {
        if (method == baseline) {
            continue;
        }
        metrics::EfficiencyRow row{method, baseline, {}};
        for (const auto& [k, weeks] : ks) {
            const auto bk = base->second.find(k);
            if (bk == base->second.end()) {
                continue;
            }
            std::vector<double> resid_method;
            std::vector<double> resid_base;
            for (const auto& [week, rec] : weeks) {
                const auto it = bk->second.find(week);
                if (it == bk->second.end()) {
                    continue;
                }
                resid_method.push_back(rec->truth - rec->prediction);
                resid_base.push_back(it->second->truth - it->second->prediction);
            }
            if (resid_method.empty()) {
                continue;
            }
            auto opts = options;
            opts.seed = core::derive_seed(options.seed, index * 1000 + static_cast<std::uint64_t>(k));
            row.by_k[k] = metrics::efficiency_ci(resid_method, resid_base, opts);
        }
        rows.push_back(std::move(row));
        ++index;
    }
    return rows;
}

nlohmann::json summary_json(const std::vector<metrics::SummaryRow>& rows) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json out = nlohmann::json::object();
    for (const auto& row : rows) {
        for (const auto& [k, s] : row.by_k) {
            out[row.scope][row.method]["k" + std::to_string(k)] = {
                {"pearson", num(s.pearson)},
                {"pearson_pvalue", num(s.pearson_pvalue)},
                {"mape", num(s.mape)},
                {"rmse", num(s.rmse)},
                {"n_weeks", s.n_weeks},
            };
        }
    }
    return out;
}

} // namespace flucast::forecast
