#pragma once

#include "flucast/core/week.hpp"

#include <string>
#include <vector>

namespace flucast::core {

using ProductId = std::string;
using CustomerId = std::string;
using ReceiptId = std::string;

/// Sorted set of distinct products bought under one receipt.
using Basket = std::vector<ProductId>;

/// Sorts and deduplicates in place; returns the argument for chaining.
Basket& normalize_basket(Basket& b);
bool basket_contains(const Basket& basket, const ProductId& p);
/// True when `subset` is contained in `superset` (both normalized).
bool basket_includes(const Basket& superset, const Basket& subset);

struct Receipt {
    WeekId week;
    CustomerId customer;
    ReceiptId id;
    Basket basket;

    friend bool operator==(const Receipt&, const Receipt&) = default;
};

/**
 * @brief Immutable collection of receipts at subcategory granularity.
 *
 * Every basket is non-empty, sorted and free of duplicates.
 */
class TransactionLog {
public:
    TransactionLog() = default;
    /// Normalizes baskets; throws DataError on an empty basket.
    explicit TransactionLog(std::vector<Receipt> receipts);

    const std::vector<Receipt>& receipts() const noexcept { return receipts_; }
    std::size_t size() const noexcept { return receipts_.size(); }
    bool empty() const noexcept { return receipts_.empty(); }

    /// Sorted distinct products appearing in any receipt.
    std::vector<ProductId> products() const;
    /// Sum of basket sizes, i.e. the number of (receipt, product) rows.
    std::size_t membership_count() const;

    /// Receipts whose customer is in `customers` (sorted), order preserved.
    TransactionLog restricted_to(const std::vector<CustomerId>& customers) const;

    friend bool operator==(const TransactionLog&, const TransactionLog&) = default;

private:
    std::vector<Receipt> receipts_;
};

} // namespace flucast::core
