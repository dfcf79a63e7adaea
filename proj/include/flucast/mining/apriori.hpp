#pragma once

#include "flucast/core/transaction_log.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace flucast::mining {

struct ItemsetCount {
    core::Basket items;
    std::size_t support_count = 0;
    double support = 0.0;  ///< support_count / number of transactions

    friend bool operator==(const ItemsetCount&, const ItemsetCount&) = default;
};

struct AprioriOptions {
    double min_support = 0.01;
    /// Largest itemset size explored; 0 means no cap.
    std::size_t max_itemset_size = 6;
};

/// An itemset with `count` occurrences in `n` transactions is frequent when
/// count / n >= min_support (up to a relative 1e-12 slack for rounding).
bool meets_support(std::size_t count, std::size_t n, double min_support);

/// Orders by (size ascending, support descending, items lexicographic).
void sort_itemsets(std::vector<ItemsetCount>& itemsets);

/**
 * Level-wise frequent itemset mining.
 *
 * Candidates of length k are joined from frequent (k-1)-itemsets sharing a
 * (k-2)-prefix, pruned by downward closure, then counted in one pass over
 * the transactions through a prefix tree. Transactions are treated as sets.
 */
std::vector<ItemsetCount> apriori(std::span<const core::Basket> transactions,
                                  const AprioriOptions& options = {});

/// Exhaustive subset counting over an item universe of at most 20 items.
std::vector<ItemsetCount> brute_force_itemsets(std::span<const core::Basket> transactions,
                                               double min_support);

} // namespace flucast::mining
