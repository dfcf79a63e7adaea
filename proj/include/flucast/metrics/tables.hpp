#pragma once

#include "flucast/metrics/bootstrap.hpp"
#include "flucast/metrics/indicators.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace flucast::metrics {

/// Indicators of one method in one scope ("pooled" or a season label), per horizon.
struct SummaryRow {
    std::string scope;
    std::string method;
    std::map<int, EvalSummary> by_k;
};

/// Relative efficiency of `method` against `baseline`, per horizon.
struct EfficiencyRow {
    std::string method;
    std::string baseline;
    std::map<int, EfficiencyEstimate> by_k;
};

/// Columns: scope, method, then pearson, mape, rmse and n for each horizon.
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       const std::vector<int>& horizons);

/// Columns: method, baseline, then point, ci_low and ci_high for each horizon.
void write_efficiency_csv(std::ostream& out, const std::vector<EfficiencyRow>& rows,
                          const std::vector<int>& horizons);

} // namespace flucast::metrics
