#include "flucast/discovery/product_series.hpp"

#include "flucast/core/error.hpp"

#include <algorithm>

namespace flucast::discovery {

ProductSeriesTable::ProductSeriesTable(std::vector<core::WeekId> weeks,
                                       std::map<core::ProductId, std::vector<double>> volumes)
    : weeks_(std::move(weeks)), volumes_(std::move(volumes)) {
    if (weeks_.empty()) {
        throw DataError("product series need a non-empty week span");
    }
    for (const auto& [p, v] : volumes_) {
        if (v.size() != weeks_.size()) {
            throw DataError("product " + p + ": volume length does not match week span");
        }
    }
}

std::vector<core::ProductId> ProductSeriesTable::products() const {
    std::vector<core::ProductId> out;
    out.reserve(volumes_.size());
    for (const auto& [p, v] : volumes_) {
        out.push_back(p);
    }
    return out;
}

const std::vector<double>& ProductSeriesTable::values(const core::ProductId& p) const {
    auto it = volumes_.find(p);
    if (it == volumes_.end()) {
        throw DataError("no series for product " + p);
    }
    return it->second;
}

core::WeeklySeries ProductSeriesTable::series(const core::ProductId& p) const {
    return core::WeeklySeries(weeks_, values(p));
}

ProductSeriesTable build_product_series(const core::TransactionLog& log,
                                        const std::vector<core::WeekId>& weeks,
                                        std::span<const core::ProductId> universe) {
    if (weeks.empty()) {
        throw ConfigError("product series span is empty");
    }
    // Validates the span as a timeline.
    core::WeeklySeries probe(weeks, std::vector<double>(weeks.size(), 0.0));

    std::map<core::ProductId, std::vector<double>> volumes;
    for (const auto& p : log.products()) {
        volumes.emplace(p, std::vector<double>(weeks.size(), 0.0));
    }
    for (const auto& p : universe) {
        volumes.emplace(p, std::vector<double>(weeks.size(), 0.0));
    }
    for (const auto& r : log.receipts()) {
        auto idx = probe.index_of(r.week);
        if (!idx) {
            continue;
        }
        for (const auto& p : r.basket) {
            volumes[p][*idx] += 1.0;
        }
    }
    return ProductSeriesTable(weeks, std::move(volumes));
}

ProductSeriesTable build_product_series(const core::TransactionLog& log, core::WeekId first,
                                        core::WeekId last,
                                        std::span<const core::ProductId> universe) {
    return build_product_series(log, core::week_range(first, last), universe);
}

core::WeeklySeries composite_series(const core::Basket& basket, const ProductSeriesTable& table) {
    if (basket.empty()) {
        throw DataError("composite of an empty basket");
    }
    std::vector<double> acc(table.weeks().size(), 0.0);
    for (const auto& p : basket) {
        const auto& v = table.values(p);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += v[i];
        }
    }
    return core::WeeklySeries(table.weeks(), std::move(acc));
}

} // namespace flucast::discovery
