#include "flucast/ingest/csv_io.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace flucast::ingest {

using core::WeekId;

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

[[noreturn]] void fail(const std::string& source, std::size_t line_no, const std::string& what) {
    throw DataError(source + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && ptr == e && b != e;
}

WeekId parse_week(const std::string& year_s, const std::string& week_s, const std::string& source,
                  std::size_t line_no) {
    int year = 0;
    int week = 0;
    if (!parse_number(year_s, year) || !parse_number(week_s, week) ||
        !core::is_valid_week(year, week)) {
        fail(source, line_no, "unknown week format '" + year_s + "," + week_s + "'");
    }
    return {year, week};
}

void expect_header(std::istream& in, const char* header, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(source, 1, "missing header");
    }
    strip_cr(line);
    if (line != header) {
        fail(source, 1, "expected header '" + std::string(header) + "'");
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    return out;
}

} // namespace

core::TransactionLog read_receipts(std::istream& in, const std::string& source) {
    expect_header(in, kReceiptsHeader, source);
    std::vector<core::Receipt> receipts;
    std::unordered_map<std::string, std::size_t> by_id;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        auto f = split_row(line);
        if (f.size() != 5) {
            fail(source, line_no, "expected 5 fields, got " + std::to_string(f.size()));
        }
        for (const auto& field : f) {
            if (field.empty()) {
                fail(source, line_no, "empty field");
            }
        }
        const WeekId week = parse_week(f[0], f[1], source, line_no);
        auto [it, inserted] = by_id.try_emplace(f[3], receipts.size());
        if (inserted) {
            receipts.push_back({week, f[2], f[3], {f[4]}});
            continue;
        }
        auto& r = receipts[it->second];
        if (r.week != week || r.customer != f[2]) {
            fail(source, line_no, "receipt " + f[3] + " reappears with another week or customer");
        }
        r.basket.push_back(f[4]);
    }
    return core::TransactionLog(std::move(receipts));
}

core::TransactionLog parse_receipts(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_receipts(in, path.string());
}

void write_receipts(std::ostream& out, const core::TransactionLog& log) {
    out << kReceiptsHeader << '\n';
    for (const auto& r : log.receipts()) {
        for (const auto& p : r.basket) {
            out << r.week.year() << ',' << r.week.week() << ',' << r.customer << ',' << r.id << ','
                << p << '\n';
        }
    }
}

void write_receipts(const std::filesystem::path& path, const core::TransactionLog& log) {
    auto out = open_output(path);
    write_receipts(out, log);
}

core::WeeklySeries read_ili(std::istream& in, double scale, const std::string& source) {
    if (!(scale > 0.0)) {
        throw ConfigError("ILI scale must be positive");
    }
    expect_header(in, kIliHeader, source);
    struct Row {
        WeekId week;
        double value;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        auto f = split_row(line);
        if (f.size() != 3) {
            fail(source, line_no, "expected 3 fields, got " + std::to_string(f.size()));
        }
        const WeekId week = parse_week(f[0], f[1], source, line_no);
        double v = 0.0;
        if (!parse_number(f[2], v)) {
            fail(source, line_no, "bad incidence '" + f[2] + "'");
        }
        if (!(v > 0.0 && v < scale)) {
            fail(source, line_no, "incidence " + f[2] + " outside (0, " + core::format_double(scale) + ")");
        }
        rows.push_back({week, v / scale, line_no});
    }
    if (rows.empty()) {
        throw DataError(source + ": no ILI rows");
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.week < b.week; });
    std::vector<WeekId> weeks;
    std::vector<double> values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
            const WeekId prev = rows[i - 1].week;
            if (prev == rows[i].week) {
                fail(source, rows[i].line, "duplicate week " + prev.to_string());
            }
            if (!core::is_timeline_successor(prev, rows[i].week)) {
                throw DataError(source + ": missing week after " + prev.to_string());
            }
        }
        weeks.push_back(rows[i].week);
        values.push_back(rows[i].value);
    }
    return core::WeeklySeries(std::move(weeks), std::move(values));
}

core::WeeklySeries parse_ili(const std::filesystem::path& path, double scale) {
    auto in = open_input(path);
    return read_ili(in, scale, path.string());
}

void write_ili(std::ostream& out, const core::WeeklySeries& ili, double scale) {
    out << kIliHeader << '\n';
    for (std::size_t i = 0; i < ili.size(); ++i) {
        const auto w = ili.week_at(i);
        out << w.year() << ',' << w.week() << ',' << core::format_double(ili.value_at(i) * scale)
            << '\n';
    }
}

void write_ili(const std::filesystem::path& path, const core::WeeklySeries& ili, double scale) {
    auto out = open_output(path);
    write_ili(out, ili, scale);
}

} // namespace flucast::ingest
