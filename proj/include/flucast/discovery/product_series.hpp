#pragma once

#include "flucast/core/transaction_log.hpp"
#include "flucast/core/weekly_series.hpp"

#include <map>
#include <span>
#include <vector>

namespace flucast::discovery {

/**
 * @brief Weekly purchase volume per product on a shared week index.
 *
 * Volume is the number of receipts containing the product in that week.
 */
class ProductSeriesTable {
public:
    ProductSeriesTable(std::vector<core::WeekId> weeks,
                       std::map<core::ProductId, std::vector<double>> volumes);

    const std::vector<core::WeekId>& weeks() const noexcept { return weeks_; }
    std::vector<core::ProductId> products() const;
    std::size_t size() const noexcept { return volumes_.size(); }
    bool contains(const core::ProductId& p) const { return volumes_.count(p) > 0; }

    /// Throws DataError when `p` is not in the table.
    const std::vector<double>& values(const core::ProductId& p) const;
    core::WeeklySeries series(const core::ProductId& p) const;

private:
    std::vector<core::WeekId> weeks_;
    std::map<core::ProductId, std::vector<double>> volumes_;
};

/**
 * Counts, for every product of the log plus `universe`, the receipts
 * containing it in each week of `weeks`. Weeks without purchases are zero;
 * receipts outside `weeks` are ignored.
 */
ProductSeriesTable build_product_series(const core::TransactionLog& log,
                                        const std::vector<core::WeekId>& weeks,
                                        std::span<const core::ProductId> universe = {});

/// Same, over the contiguous span [first, last].
ProductSeriesTable build_product_series(const core::TransactionLog& log, core::WeekId first,
                                        core::WeekId last,
                                        std::span<const core::ProductId> universe = {});

/// Pointwise sum of member volumes. Throws DataError for an unknown product
/// or an empty basket.
core::WeeklySeries composite_series(const core::Basket& basket, const ProductSeriesTable& table);

} // namespace flucast::discovery
