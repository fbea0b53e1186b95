#pragma once

#include "esjs/bootstrap.hpp"
#include "esjs/distributions.hpp"
#include "esjs/gof.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace esjs::cli {

/// Bad flags or flag combinations; exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExitCode : int { Ok = 0, Usage = 1, Data = 2, Numerical = 3 };

enum class Subcommand { Fit, Compare, Simulate, Divergence, Scaling };
enum class OutputFormat { Json, Csv, Table };

/// Column by zero-based index or by header name.
struct ColumnSelector {
    std::optional<std::size_t> index;
    std::string name;

    [[nodiscard]] static ColumnSelector parse(std::string_view text);
};

/// Parses one numeric column. A non-numeric first row is taken as the header.
/// Throws DataError with the offending line number for missing, malformed or
/// non-finite values.
[[nodiscard]] std::vector<double> parse_csv_series(std::istream& in, const ColumnSelector& column,
                                                   const std::string& source = "<input>");
[[nodiscard]] SortedSample parse_csv(std::istream& in, const ColumnSelector& column,
                                     const std::string& source = "<input>");

/// The selected column in file order (needed for moving-block resampling).
[[nodiscard]] std::vector<double> read_csv_series(const std::filesystem::path& path, const ColumnSelector& column);
[[nodiscard]] SortedSample ingest_csv(const std::filesystem::path& path, const ColumnSelector& column);

/// `family:p1,p2`, e.g. "normal:0,1". Throws UsageError.
[[nodiscard]] ParametricModel parse_model_spec(std::string_view text);

struct RunSpec {
    Subcommand subcommand = Subcommand::Fit;
    std::vector<std::string> inputs;  ///< fit/compare: one; divergence: p then q
    ColumnSelector column{0, {}};
    std::vector<Family> families;     ///< fit: one; compare/simulate: hypotheses
    std::optional<ParametricModel> given;
    std::size_t n = 0;
    std::size_t model_sample_size = 0;
    std::optional<std::size_t> bins;  ///< unset: subcommand default
    BootstrapConfig bootstrap;        ///< resamples == 0 disables the interval
    std::vector<Family> exclude_from_factor;
    std::vector<std::size_t> sizes;
    OutputFormat format = OutputFormat::Json;
    std::optional<std::uint64_t> seed;
    bool timing = false;
};

/// Parses argv-style arguments (without the program name). Throws UsageError.
/// Returns nullopt after printing help to `out`.
[[nodiscard]] std::optional<RunSpec> parse_args(std::span<const std::string> args, std::ostream& out);

/// Executes a parsed spec, writing the report to `out` and diagnostics to
/// `err`. Never throws; failures map to exit codes.
[[nodiscard]] int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// parse_args + run.
[[nodiscard]] int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// Report rendering, exposed for tests.
[[nodiscard]] std::string format_number(double value);
[[nodiscard]] std::string subcommand_name(Subcommand s);

}  // namespace esjs::cli
