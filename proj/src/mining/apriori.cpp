#include "flucast/mining/apriori.hpp"

#include "flucast/core/error.hpp"

#include <algorithm>
#include <cstdint>

namespace flucast::mining {

namespace {

using Code = std::uint32_t;
using Itemset = std::vector<Code>;

void check_inputs(std::span<const core::Basket> transactions, double min_support) {
    if (transactions.empty()) {
        throw DataError("frequent itemset mining needs at least one transaction");
    }
    if (!(min_support > 0.0 && min_support <= 1.0)) {
        throw ConfigError("min_support must lie in (0, 1]");
    }
}

/// Order-preserving dictionary from product ids to dense codes.
struct Dictionary {
    std::vector<core::ProductId> names;

    explicit Dictionary(std::span<const core::Basket> transactions) {
        for (const auto& t : transactions) {
            names.insert(names.end(), t.begin(), t.end());
        }
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
    }

    Code code(const core::ProductId& p) const {
        return static_cast<Code>(std::lower_bound(names.begin(), names.end(), p) - names.begin());
    }

    std::vector<Itemset> encode(std::span<const core::Basket> transactions) const {
        std::vector<Itemset> out;
        out.reserve(transactions.size());
        for (const auto& t : transactions) {
            Itemset codes;
            codes.reserve(t.size());
            for (const auto& p : t) {
                codes.push_back(code(p));
            }
            std::sort(codes.begin(), codes.end());
            codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
            out.push_back(std::move(codes));
        }
        return out;
    }

    core::Basket decode(const Itemset& s) const {
        core::Basket b;
        b.reserve(s.size());
        for (Code c : s) {
            b.push_back(names[c]);
        }
        return b;
    }
};

/// Prefix tree over equal-length candidate itemsets.
class CandidateTrie {
public:
    explicit CandidateTrie(const std::vector<Itemset>& candidates) : depth_(candidates.front().size()) {
        nodes_.emplace_back();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            std::size_t node = 0;
            for (Code item : candidates[c]) {
                node = child_or_insert(node, item);
            }
            nodes_[node].leaf = c;
        }
        counts_.assign(candidates.size(), 0);
    }

    void count(const Itemset& transaction) {
        if (transaction.size() >= depth_) {
            visit(0, transaction, 0, 0);
        }
    }

    const std::vector<std::size_t>& counts() const { return counts_; }

private:
    struct Node {
        std::vector<std::pair<Code, std::size_t>> children;  // sorted by item
        std::size_t leaf = 0;
    };

    std::size_t child_or_insert(std::size_t node, Code item) {
        auto& ch = nodes_[node].children;
        auto it = std::lower_bound(ch.begin(), ch.end(), item,
                                   [](const auto& e, Code v) { return e.first < v; });
        if (it != ch.end() && it->first == item) {
            return it->second;
        }
        const std::size_t idx = nodes_.size();
        ch.insert(it, {item, idx});
        nodes_.emplace_back();
        return idx;
    }

    void visit(std::size_t node, const Itemset& t, std::size_t start, std::size_t depth) {
        const auto& ch = nodes_[node].children;
        const std::size_t remaining = depth_ - depth;
        auto cit = ch.begin();
        for (std::size_t pos = start; pos + remaining <= t.size() && cit != ch.end(); ++pos) {
            cit = std::lower_bound(cit, ch.end(), t[pos],
                                   [](const auto& e, Code v) { return e.first < v; });
            if (cit == ch.end()) {
                break;
            }
            if (cit->first != t[pos]) {
                continue;
            }
            if (remaining == 1) {
                ++counts_[nodes_[cit->second].leaf];
            } else {
                visit(cit->second, t, pos + 1, depth + 1);
            }
        }
    }

    std::size_t depth_;
    std::vector<Node> nodes_;
    std::vector<std::size_t> counts_;
};

/// Joins (k-1)-itemsets sharing a prefix, keeping candidates whose every
/// (k-1)-subset is frequent. `frequent` must be sorted.
std::vector<Itemset> generate_candidates(const std::vector<Itemset>& frequent) {
    std::vector<Itemset> out;
    if (frequent.empty()) {
        return out;
    }
    const std::size_t km1 = frequent.front().size();
    Itemset probe(km1);
    for (std::size_t i = 0; i < frequent.size(); ++i) {
        for (std::size_t j = i + 1; j < frequent.size(); ++j) {
            const auto& a = frequent[i];
            const auto& b = frequent[j];
            if (!std::equal(a.begin(), a.end() - 1, b.begin())) {
                break;
            }
            Itemset cand(a);
            cand.push_back(b.back());
            bool keep = true;
            // Dropping either of the last two items yields a or b themselves.
            for (std::size_t drop = 0; keep && drop + 2 < cand.size(); ++drop) {
                std::size_t w = 0;
                for (std::size_t p = 0; p < cand.size(); ++p) {
                    if (p != drop) {
                        probe[w++] = cand[p];
                    }
                }
                keep = std::binary_search(frequent.begin(), frequent.end(), probe);
            }
            if (keep) {
                out.push_back(std::move(cand));
            }
        }
    }
    return out;
}

} // namespace

bool meets_support(std::size_t count, std::size_t n, double min_support) {
    const double support = static_cast<double>(count) / static_cast<double>(n);
    return support >= min_support * (1.0 - 1e-12);
}

void sort_itemsets(std::vector<ItemsetCount>& itemsets) {
    std::sort(itemsets.begin(), itemsets.end(), [](const ItemsetCount& a, const ItemsetCount& b) {
        if (a.items.size() != b.items.size()) {
            return a.items.size() < b.items.size();
        }
        if (a.support_count != b.support_count) {
            return a.support_count > b.support_count;
        }
        return a.items < b.items;
    });
}

std::vector<ItemsetCount> apriori(std::span<const core::Basket> transactions,
                                  const AprioriOptions& options) {
    check_inputs(transactions, options.min_support);
    const Dictionary dict(transactions);
    auto encoded = dict.encode(transactions);
    const std::size_t n = transactions.size();
    const std::size_t max_size = options.max_itemset_size == 0 ? dict.names.size() : options.max_itemset_size;

    std::vector<ItemsetCount> result;
    auto emit = [&](const Itemset& s, std::size_t count) {
        result.push_back({dict.decode(s), count, static_cast<double>(count) / static_cast<double>(n)});
    };

    std::vector<std::size_t> item_counts(dict.names.size(), 0);
    for (const auto& t : encoded) {
        for (Code c : t) {
            ++item_counts[c];
        }
    }
    std::vector<char> item_frequent(dict.names.size(), 0);
    std::vector<Itemset> level;
    for (Code c = 0; c < item_counts.size(); ++c) {
        if (meets_support(item_counts[c], n, options.min_support)) {
            item_frequent[c] = 1;
            level.push_back({c});
            emit(level.back(), item_counts[c]);
        }
    }
    // Infrequent items cannot appear in any frequent itemset.
    for (auto& t : encoded) {
        std::erase_if(t, [&](Code c) { return !item_frequent[c]; });
    }

    for (std::size_t k = 2; k <= max_size && !level.empty(); ++k) {
        auto candidates = generate_candidates(level);
        if (candidates.empty()) {
            break;
        }
        CandidateTrie trie(candidates);
        for (const auto& t : encoded) {
            trie.count(t);
        }
        level.clear();
        const auto& counts = trie.counts();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (meets_support(counts[c], n, options.min_support)) {
                emit(candidates[c], counts[c]);
                level.push_back(std::move(candidates[c]));
            }
        }
    }
    sort_itemsets(result);
    return result;
}

std::vector<ItemsetCount> brute_force_itemsets(std::span<const core::Basket> transactions,
                                               double min_support) {
    check_inputs(transactions, min_support);
    const Dictionary dict(transactions);
    const std::size_t u = dict.names.size();
    if (u == 0) {
        throw DataError("brute force enumeration: empty item universe");
    }
    if (u > 20) {
        throw ConfigError("brute force enumeration limited to 20 items");
    }
    std::vector<std::uint32_t> masks;
    for (const auto& t : dict.encode(transactions)) {
        std::uint32_t m = 0;
        for (Code c : t) {
            m |= 1u << c;
        }
        masks.push_back(m);
    }
    std::vector<ItemsetCount> result;
    const std::uint32_t full = (1u << u) - 1;
    for (std::uint32_t subset = 1; subset <= full; ++subset) {
        std::size_t count = 0;
        for (auto m : masks) {
            count += (m & subset) == subset;
        }
        if (!meets_support(count, transactions.size(), min_support)) {
            continue;
        }
        Itemset s;
        for (Code c = 0; c < u; ++c) {
            if (subset & (1u << c)) {
                s.push_back(c);
            }
        }
        result.push_back({dict.decode(s), count,
                          static_cast<double>(count) / static_cast<double>(transactions.size())});
    }
    sort_itemsets(result);
    return result;
}

} // namespace flucast::mining
