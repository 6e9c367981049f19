#include "labmkt/table_io.hpp"

#include <istream>
#include <set>
#include <sstream>

namespace labmkt {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path)
    , out_(path, std::ios::binary | std::ios::trunc)
    , columns_(header.size())
{
    if (!out_) {
        throw OutputError("cannot open " + path.string() + " for writing");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& s)
{
    if (pending_ == columns_) {
        throw std::logic_error("CsvWriter: too many cells in row of " + path_.string());
    }
    out_ << (pending_ ? "," : "") << s;
    ++pending_;
    return *this;
}

CsvWriter& CsvWriter::cell(double x)
{
    return cell(format_double(x));
}

CsvWriter& CsvWriter::cell(std::int64_t x)
{
    return cell(std::to_string(x));
}

CsvWriter& CsvWriter::cell(std::uint64_t x)
{
    return cell(std::to_string(x));
}

void CsvWriter::end_row()
{
    if (pending_ != columns_) {
        throw std::logic_error("CsvWriter: incomplete row in " + path_.string());
    }
    out_ << '\n';
    pending_ = 0;
}

void CsvWriter::close()
{
    out_.flush();
    if (!out_) {
        throw OutputError("failed writing " + path_.string());
    }
    out_.close();
}

RawParams parse_kv(std::istream& in, const std::string& source)
{
    RawParams raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        }
        if (!raw.emplace(key, value).second) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return raw;
}

RawParams read_kv_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    return parse_kv(in, path.string());
}

void write_kv_file(const std::filesystem::path& path, const KvList& entries)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw OutputError("cannot open " + path.string() + " for writing");
    }
    for (const auto& [key, value] : entries) {
        out << key << " = " << value << '\n';
    }
    out.flush();
    if (!out) {
        throw OutputError("failed writing " + path.string());
    }
}

EmpiricalSeries parse_empirical_series(std::istream& in, const std::string& source)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(source + ": empty empirical series");
    }
    const auto header = split(line, ',');
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    };
    const auto year_col = column("year");
    const auto alpha_col = column("alpha");
    if (!year_col || !alpha_col) {
        throw ConfigError(source + ": header must contain 'year' and 'alpha'");
    }
    const auto u_col = column("U");
    const auto omega_col = column("Omega");

    EmpiricalSeries series;
    std::set<std::string> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        const std::string where = source + ":" + std::to_string(lineno);
        if (cells.size() != header.size()) {
            throw ConfigError(where + ": expected " + std::to_string(header.size()) + " columns");
        }
        EmpiricalRow row;
        row.year = cells[*year_col];
        if (row.year.empty()) {
            throw ConfigError(where + ": empty year");
        }
        if (!seen.insert(row.year).second) {
            throw ConfigError(where + ": duplicate year '" + row.year + "'");
        }
        row.alpha = parse_double(where + ": alpha", cells[*alpha_col]);
        if (!(row.alpha > 0.0)) {
            throw ConfigError(where + ": alpha must be positive");
        }
        if (u_col && !cells[*u_col].empty()) {
            row.unemployment = parse_double(where + ": U", cells[*u_col]);
        }
        if (omega_col && !cells[*omega_col].empty()) {
            row.job_supply = parse_double(where + ": Omega", cells[*omega_col]);
        }
        series.push_back(std::move(row));
    }
    if (series.empty()) {
        throw ConfigError(source + ": empirical series has no rows");
    }
    return series;
}

EmpiricalSeries read_empirical_series(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read empirical series " + path.string());
    }
    return parse_empirical_series(in, path.string());
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    for (const auto& cell : split(text, ',')) {
        out.push_back(parse_double(key, cell));
    }
    if (out.empty()) {
        throw ConfigError(key + ": empty list");
    }
    return out;
}

std::vector<std::uint64_t> parse_unsigned_list(const std::string& key, const std::string& text)
{
    std::vector<std::uint64_t> out;
    for (const auto& cell : split(text, ',')) {
        out.push_back(parse_unsigned(key, cell));
    }
    if (out.empty()) {
        throw ConfigError(key + ": empty list");
    }
    return out;
}

}  // namespace labmkt
