#include "flucast/core/transaction_log.hpp"

#include "flucast/core/error.hpp"

#include <algorithm>

namespace flucast::core {

Basket& normalize_basket(Basket& b) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

bool basket_contains(const Basket& basket, const ProductId& p) {
    return std::binary_search(basket.begin(), basket.end(), p);
}

bool basket_includes(const Basket& superset, const Basket& subset) {
    return std::includes(superset.begin(), superset.end(), subset.begin(), subset.end());
}

TransactionLog::TransactionLog(std::vector<Receipt> receipts) : receipts_(std::move(receipts)) {
    for (auto& r : receipts_) {
        normalize_basket(r.basket);
        if (r.basket.empty()) {
            throw DataError("receipt " + r.id + " has an empty basket");
        }
    }
}

std::vector<ProductId> TransactionLog::products() const {
    std::vector<ProductId> out;
    for (const auto& r : receipts_) {
        out.insert(out.end(), r.basket.begin(), r.basket.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t TransactionLog::membership_count() const {
    std::size_t n = 0;
    for (const auto& r : receipts_) {
        n += r.basket.size();
    }
    return n;
}

TransactionLog TransactionLog::restricted_to(const std::vector<CustomerId>& customers) const {
    std::vector<Receipt> kept;
    for (const auto& r : receipts_) {
        if (std::binary_search(customers.begin(), customers.end(), r.customer)) {
            kept.push_back(r);
        }
    }
    return TransactionLog(std::move(kept));
}

} // namespace flucast::core
