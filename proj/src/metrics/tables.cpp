#include "flucast/metrics/tables.hpp"

#include "flucast/core/format.hpp"

#include <cmath>

namespace flucast::metrics {

namespace {

std::string cell(double v) {
    return std::isfinite(v) ? core::format_double(v) : "";
}

} // namespace

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       const std::vector<int>& horizons) {
    out << "scope,method";
    for (const char* name : {"pearson", "mape", "rmse", "n"}) {
        for (int k : horizons) {
            out << ',' << name << "_k" << k;
        }
    }
    out << '\n';
    for (const auto& row : rows) {
        out << row.scope << ',' << row.method;
        for (int field = 0; field < 4; ++field) {
            for (int k : horizons) {
                out << ',';
                const auto it = row.by_k.find(k);
                if (it == row.by_k.end()) {
                    continue;
                }
                const auto& s = it->second;
                switch (field) {
                case 0:
                    out << cell(s.pearson);
                    break;
                case 1:
                    out << cell(s.mape);
                    break;
                case 2:
                    out << cell(s.rmse);
                    break;
                default:
                    out << s.n_weeks;
                }
            }
        }
        out << '\n';
    }
}

void write_efficiency_csv(std::ostream& out, const std::vector<EfficiencyRow>& rows,
                          const std::vector<int>& horizons) {
    out << "method,baseline";
    for (int k : horizons) {
        out << ",point_k" << k << ",ci_low_k" << k << ",ci_high_k" << k;
    }
    out << '\n';
    for (const auto& row : rows) {
        out << row.method << ',' << row.baseline;
        for (int k : horizons) {
            const auto it = row.by_k.find(k);
            if (it == row.by_k.end()) {
                out << ",,,";
                continue;
            }
            out << ',' << cell(it->second.point) << ',' << cell(it->second.ci_low) << ','
                << cell(it->second.ci_high);
        }
        out << '\n';
    }
}

} // namespace flucast::metrics
