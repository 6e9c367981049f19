#pragma once

#include "labmkt/config.hpp"

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace labmkt {

/// An output file or directory could not be created or written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Header-first CSV file. Doubles are written in shortest round-trip form so
/// identical runs produce byte-identical files.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& cell(const std::string& s);
    CsvWriter& cell(const char* s) { return cell(std::string(s)); }
    CsvWriter& cell(double x);
    CsvWriter& cell(std::int64_t x);
    CsvWriter& cell(std::uint64_t x);
    CsvWriter& cell(int x) { return cell(static_cast<std::int64_t>(x)); }
    CsvWriter& cell(bool b) { return cell(std::int64_t{b ? 1 : 0}); }
    void end_row();
    /// Flushes and checks the stream; throws OutputError on failure.
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_ = 0;
    std::size_t pending_ = 0;
};

/// `key = value` lines; `#` starts a comment. Throws ConfigError when the file
/// is missing or a line is malformed.
RawParams read_kv_file(const std::filesystem::path& path);
RawParams parse_kv(std::istream& in, const std::string& source);

using KvList = std::vector<std::pair<std::string, std::string>>;
void write_kv_file(const std::filesystem::path& path, const KvList& entries);

/// One observed business year of an empirical market.
struct EmpiricalRow {
    std::string year;
    double alpha = 0.0;
    std::optional<double> unemployment;
    std::optional<double> job_supply;
};

using EmpiricalSeries = std::vector<EmpiricalRow>;

/// CSV with header `year,alpha` and optional `U`, `Omega` columns (cells may
/// be empty). Rejects non-positive alpha and repeated years.
EmpiricalSeries parse_empirical_series(std::istream& in, const std::string& source);
EmpiricalSeries read_empirical_series(const std::filesystem::path& path);

/// Comma-separated list of reals / integers, e.g. "0.1,1,5".
std::vector<double> parse_real_list(const std::string& key, const std::string& text);
std::vector<std::uint64_t> parse_unsigned_list(const std::string& key, const std::string& text);

}  // namespace labmkt
