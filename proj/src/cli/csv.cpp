#include "esjs/cli.hpp"
#include "esjs/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace esjs::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

enum class Parse { Ok, Invalid, Overflow, NonFinite };

Parse parse_real(std::string_view text, double& value) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return Parse::Invalid;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc::result_out_of_range) return Parse::Overflow;
    if (ec != std::errc() || ptr != text.data() + text.size()) return Parse::Invalid;
    if (!std::isfinite(value)) return Parse::NonFinite;
    return Parse::Ok;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

ColumnSelector ColumnSelector::parse(std::string_view text) {
    ColumnSelector sel;
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
    if (!text.empty() && ec == std::errc() && ptr == text.data() + text.size()) {
        sel.index = index;
    } else {
        sel.name = std::string(text);
    }
    return sel;
}

std::vector<double> parse_csv_series(std::istream& in, const ColumnSelector& column, const std::string& source) {
    std::vector<double> values;
    std::optional<std::size_t> index = column.index;
    bool first = true;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        const auto fields = split(view);

        if (first) {
            first = false;
            if (!index) {
                const auto it = std::find(fields.begin(), fields.end(), column.name);
                if (it == fields.end()) fail(source, line_no, "no column named '" + column.name + "' in header");
                index = static_cast<std::size_t>(it - fields.begin());
                continue;
            }
            double probe = 0.0;
            if (*index < fields.size() && parse_real(fields[*index], probe) == Parse::Invalid) {
                continue;  // header row
            }
        }

        if (*index >= fields.size() || fields[*index].empty()) {
            fail(source, line_no, "missing value in column " + std::to_string(*index));
        }
        double value = 0.0;
        const std::string text(fields[*index]);
        switch (parse_real(fields[*index], value)) {
            case Parse::Ok: values.push_back(value); break;
            case Parse::Overflow: fail(source, line_no, "value '" + text + "' overflows a double");
            case Parse::NonFinite: fail(source, line_no, "non-finite value '" + text + "'");
            case Parse::Invalid: fail(source, line_no, "value '" + text + "' is not a real number");
        }
    }
    if (in.bad()) throw DataError(source + ": read error");
    if (values.empty()) throw DataError(source + ": no numeric rows");
    return values;
}

SortedSample parse_csv(std::istream& in, const ColumnSelector& column, const std::string& source) {
    return SortedSample(parse_csv_series(in, column, source));
}

std::vector<double> read_csv_series(const std::filesystem::path& path, const ColumnSelector& column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open file");
    return parse_csv_series(in, column, path.string());
}

SortedSample ingest_csv(const std::filesystem::path& path, const ColumnSelector& column) {
    return SortedSample(read_csv_series(path, column));
}

}  // namespace esjs::cli
