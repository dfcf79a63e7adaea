#pragma once

#include "flucast/core/transaction_log.hpp"
#include "flucast/core/weekly_series.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace flucast::ingest {

inline constexpr const char* kReceiptsHeader = "year,week,customer_id,receipt_id,product_id";
inline constexpr const char* kIliHeader = "year,week,incidence";

/**
 * Reads the receipts CSV. Rows sharing a receipt id are merged into one
 * basket and repeated (receipt, product) rows collapse to set membership.
 * Receipts keep the order of their first row. Errors carry the line number.
 */
core::TransactionLog parse_receipts(const std::filesystem::path& path);
core::TransactionLog read_receipts(std::istream& in, const std::string& source = "<stream>");
void write_receipts(std::ostream& out, const core::TransactionLog& log);
void write_receipts(const std::filesystem::path& path, const core::TransactionLog& log);

/**
 * Reads the ILI CSV and divides every incidence by `scale`.
 *
 * Rows may come in any order. Values must lie in (0, scale). Consecutive
 * weeks must be adjacent, except across the off-season break between two
 * consecutive seasons.
 */
core::WeeklySeries parse_ili(const std::filesystem::path& path, double scale);
core::WeeklySeries read_ili(std::istream& in, double scale, const std::string& source = "<stream>");
void write_ili(std::ostream& out, const core::WeeklySeries& ili, double scale = 1.0);
void write_ili(const std::filesystem::path& path, const core::WeeklySeries& ili, double scale = 1.0);

} // namespace flucast::ingest
