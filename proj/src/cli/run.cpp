#include "esjs/cli.hpp"
#include "esjs/error.hpp"
#include "report.hpp"

#include "CLI11.hpp"

#include "esjs/seed.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <map>
#include <cmath>
#include <iostream>

namespace esjs::cli {
namespace {

constexpr std::size_t kEmpiricalBins = 1'000'000;

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        out.emplace_back(text.substr(start, end - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<Family> parse_families(const std::string& text, const std::string& flag) {
    std::vector<Family> out;
    for (const auto& name : split_list(text)) {
        const auto f = parse_family(name);
        if (!f) throw UsageError(flag + ": unknown family '" + name + "'");
        if (std::find(out.begin(), out.end(), *f) == out.end()) out.push_back(*f);
    }
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || v < 2) {
            throw UsageError("--sizes: '" + item + "' is not an integer >= 2");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<std::size_t> default_sizes() {
    std::vector<std::size_t> out;
    for (int k = 5; k <= 20; ++k) out.push_back(std::size_t{1} << k);
    return out;
}

bool is_stochastic(const RunSpec& spec) {
    return spec.subcommand != Subcommand::Divergence || spec.bootstrap.resamples > 0;
}

void check_spec(const RunSpec& spec) {
    if (is_stochastic(spec) && !spec.seed) {
        throw UsageError(subcommand_name(spec.subcommand) + ": --seed is required");
    }
    if (spec.bootstrap.resamples > 0) {
        try {
            validate(spec.bootstrap);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (spec.bootstrap.scheme == ResampleScheme::MovingBlock && spec.bootstrap.block_length == 0) {
        throw UsageError("--block-length must be positive");
    }
}

ExperimentOptions experiment_options(const RunSpec& spec, std::size_t default_bins) {
    ExperimentOptions options;
    options.bootstrap = spec.bootstrap;
    options.bootstrap.seed = *spec.seed;
    options.with_ci = spec.bootstrap.resamples > 0;
    options.model_sample_size = spec.model_sample_size;
    options.survival.bins = spec.bins.value_or(default_bins);
    options.exclude_from_factor = spec.exclude_from_factor;
    return options;
}

Json run_fit(const RunSpec& spec) {
    const auto series = read_csv_series(spec.inputs.at(0), spec.column);
    const FitReport row = fit_and_score(spec.families.at(0), series, experiment_options(spec, kEmpiricalBins));
    Json j = Json::object();
    j["rows"] = Json::array({fit_row_to_json(row)});
    j["best"] = std::string(family_name(row.family));
    j["factor"] = nullptr;
    return j;
}

Json run_compare(const RunSpec& spec) {
    const auto series = read_csv_series(spec.inputs.at(0), spec.column);
    return experiment_to_json(compare_families(series, spec.families, experiment_options(spec, kEmpiricalBins)));
}

Json run_simulate(const RunSpec& spec) {
    const ExperimentReport report =
        simulate_experiment(*spec.given, spec.families, spec.n, experiment_options(spec, 0));
    return experiment_to_json(report);
}

Json run_divergence(const RunSpec& spec) {
    const auto p = read_csv_series(spec.inputs.at(0), spec.column);
    const auto q = read_csv_series(spec.inputs.at(1), spec.column);
    SurvivalOptions survival;
    survival.bins = spec.bins.value_or(0);
    const double value = score_samples(SortedSample(p), SortedSample(q), survival);

    Json j = Json::object();
    j["esjs"] = value;
    j["distance"] = std::sqrt(value);
    if (spec.bootstrap.resamples > 0) {
        BootstrapConfig config = spec.bootstrap;
        config.seed = derive_seed(*spec.seed, "bootstrap");
        const Statistic statistic = [&survival](std::span<const std::vector<double>> sets) {
            return score_samples(SortedSample(sets[0]), SortedSample(sets[1]), survival);
        };
        const std::vector<std::vector<double>> sets{p, q};
        const auto replicates = bootstrap_replicates(statistic, sets, config);
        const auto ci = interval_from_replicates(value, replicates, config.level, config.interval);
        j["ci"] = {{"lb", ci.lb}, {"ub", ci.ub}, {"level", ci.level}};
    }
    return j;
}

Json run_scaling(const RunSpec& spec) {
    const auto rows = scaling_experiment(*spec.given, spec.sizes, *spec.seed);
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        xs.push_back(static_cast<double>(r.size));
        ys.push_back(r.esjs);
    }
    return scaling_to_json(rows, powerlaw_fit(xs, ys));
}

Json dispatch(const RunSpec& spec) {
    switch (spec.subcommand) {
        case Subcommand::Fit: return run_fit(spec);
        case Subcommand::Compare: return run_compare(spec);
        case Subcommand::Simulate: return run_simulate(spec);
        case Subcommand::Divergence: return run_divergence(spec);
        case Subcommand::Scaling: return run_scaling(spec);
    }
    throw UsageError("unknown subcommand");
}

}  // namespace

ParametricModel parse_model_spec(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) throw UsageError("model '" + std::string(text) + "': expected family:p1,p2");
    const auto family = parse_family(text.substr(0, colon));
    if (!family) throw UsageError("model '" + std::string(text) + "': unknown family");
    std::vector<double> params;
    for (const auto& item : split_list(text.substr(colon + 1))) {
        double v = 0.0;
        const char* first = item.data();
        if (!item.empty() && item.front() == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw UsageError("model '" + std::string(text) + "': bad parameter '" + item + "'");
        }
        params.push_back(v);
    }
    try {
        return make_model(*family, std::move(params));
    } catch (const std::invalid_argument& e) {
        throw UsageError("model '" + std::string(text) + "': " + e.what());
    }
}

std::optional<RunSpec> parse_args(std::span<const std::string> args, std::ostream& out) {
    CLI::App app{"Empirical survival Jensen-Shannon divergence goodness-of-fit tool", "esjs"};
    app.require_subcommand(1);

    std::string input;
    std::string input_p;
    std::string input_q;
    std::string column = "0";
    std::string family;
    std::string families;
    std::string given;
    std::string exclude;
    std::string sizes;
    std::string format = "json";
    std::string method = "percentile";
    std::size_t n = 0;
    std::size_t model_sample_size = 0;
    std::size_t bins = 0;
    std::size_t resamples = 1000;
    double level = 0.95;
    std::size_t block_length = 0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    bool timing = false;

    struct Flags {
        CLI::Option* bins = nullptr;
        CLI::Option* resamples = nullptr;
        CLI::Option* block = nullptr;
        CLI::Option* seed = nullptr;
    };
    std::map<CLI::App*, Flags> flags;

    const auto common = [&](CLI::App* sub) {
        Flags& f = flags[sub];
        sub->add_option("--format", format, "json, csv or table")
            ->check(CLI::IsMember({"json", "csv", "table"}));
        f.seed = sub->add_option("--seed", seed, "Run seed; every random stream is derived from it");
        f.bins = sub->add_option("--bins", bins, "Kaplan-Meier bins; 0 for the exact empirical survival");
        f.resamples = sub->add_option("--bootstrap", resamples, "Bootstrap replicates; 0 disables the interval");
        sub->add_option("--level", level, "Confidence level");
        sub->add_option("--method", method, "percentile or basic")->check(CLI::IsMember({"percentile", "basic"}));
        f.block = sub->add_option("--block-length", block_length, "Use the moving-block bootstrap with this block length");
        sub->add_option("--threads", threads, "Bootstrap worker threads (0: all cores)");
        sub->add_flag("--timing", timing, "Report wall-clock time");
    };

    CLI::App* fit = app.add_subcommand("fit", "Fit one family to a CSV column and score it");
    fit->add_option("--input", input, "CSV file")->required();
    fit->add_option("--column", column, "Column index or header name");
    fit->add_option("--family", family, "Family name")->required();
    fit->add_option("--model-sample-size", model_sample_size, "Model sample size (default: data size)");
    common(fit);

    CLI::App* compare = app.add_subcommand("compare", "Rank several families on a CSV column");
    compare->add_option("--input", input, "CSV file")->required();
    compare->add_option("--column", column, "Column index or header name");
    compare->add_option("--families", families, "Comma-separated families")->required();
    compare->add_option("--exclude-from-factor", exclude, "Families never used as challenger");
    compare->add_option("--model-sample-size", model_sample_size, "Model sample size (default: data size)");
    common(compare);

    CLI::App* simulate = app.add_subcommand("simulate", "Draw data from a given model and rank hypotheses");
    simulate->add_option("--given", given, "Generating model, e.g. normal:0,1")->required();
    simulate->add_option("--hypotheses", families, "Comma-separated families")->required();
    simulate->add_option("--n", n, "Data size")->required();
    simulate->add_option("--exclude-from-factor", exclude, "Families never used as challenger");
    simulate->add_option("--model-sample-size", model_sample_size, "Model sample size (default: n)");
    common(simulate);

    CLI::App* divergence = app.add_subcommand("divergence", "ESJS between two CSV samples");
    divergence->add_option("--input-p", input_p, "First CSV file")->required();
    divergence->add_option("--input-q", input_q, "Second CSV file")->required();
    divergence->add_option("--column", column, "Column index or header name");
    common(divergence);

    CLI::App* scaling = app.add_subcommand("scaling", "ESJS of a refitted model against sample size");
    scaling->add_option("--given", given, "Generating model, e.g. normal:0,1")->required();
    scaling->add_option("--sizes", sizes, "Comma-separated sizes (default: 2^5 .. 2^20)");
    common(scaling);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* chosen = app.get_subcommands().front();
    const Flags& f = flags[chosen];

    RunSpec spec;
    if (chosen == fit) spec.subcommand = Subcommand::Fit;
    if (chosen == compare) spec.subcommand = Subcommand::Compare;
    if (chosen == simulate) spec.subcommand = Subcommand::Simulate;
    if (chosen == divergence) spec.subcommand = Subcommand::Divergence;
    if (chosen == scaling) spec.subcommand = Subcommand::Scaling;

    switch (spec.subcommand) {
        case Subcommand::Fit:
            spec.inputs = {input};
            spec.families = parse_families(family, "--family");
            if (spec.families.size() != 1) throw UsageError("--family takes exactly one family");
            break;
        case Subcommand::Compare:
            spec.inputs = {input};
            spec.families = parse_families(families, "--families");
            break;
        case Subcommand::Simulate:
            spec.given = parse_model_spec(given);
            spec.families = parse_families(families, "--hypotheses");
            spec.n = n;
            if (n < 2) throw UsageError("--n must be at least 2");
            break;
        case Subcommand::Divergence: spec.inputs = {input_p, input_q}; break;
        case Subcommand::Scaling:
            spec.given = parse_model_spec(given);
            spec.sizes = sizes.empty() ? default_sizes() : parse_sizes(sizes);
            break;
    }
    if (!exclude.empty()) spec.exclude_from_factor = parse_families(exclude, "--exclude-from-factor");
    spec.column = ColumnSelector::parse(column);
    spec.model_sample_size = model_sample_size;
    if (f.bins->count() > 0) spec.bins = bins;

    spec.bootstrap.resamples = resamples;
    // The divergence report is a point estimate unless replicates are requested.
    if (spec.subcommand == Subcommand::Divergence && f.resamples->count() == 0) spec.bootstrap.resamples = 0;
    if (spec.subcommand == Subcommand::Scaling) spec.bootstrap.resamples = 0;
    spec.bootstrap.level = level;
    spec.bootstrap.interval = method == "basic" ? IntervalMethod::Basic : IntervalMethod::Percentile;
    if (f.block->count() > 0) {
        spec.bootstrap.scheme = ResampleScheme::MovingBlock;
        spec.bootstrap.block_length = block_length;
    }
    spec.bootstrap.workers = threads;
    if (f.seed->count() > 0) spec.seed = seed;
    spec.format = format == "csv" ? OutputFormat::Csv : format == "table" ? OutputFormat::Table : OutputFormat::Json;
    spec.timing = timing;
    check_spec(spec);
    return spec;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    try {
        check_spec(spec);
        const auto start = std::chrono::steady_clock::now();
        Json body = dispatch(spec);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

        Json report = Json::object();
        report["spec"] = spec_to_json(spec);
        for (auto& [key, value] : body.items()) report[key] = value;
        // Wall-clock time would break byte-identical reruns, so it is opt-in.
        report["timing"] = spec.timing ? Json{{"seconds", elapsed.count()}} : Json(nullptr);
        out << render(report, spec.format);
        out.flush();
        return static_cast<int>(ExitCode::Ok);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Data);
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Numerical);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Numerical);
    }
}

int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    std::optional<RunSpec> spec;
    try {
        spec = parse_args(args, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n"
            << "run 'esjs --help' for usage\n";
        return static_cast<int>(ExitCode::Usage);
    }
    if (!spec) return static_cast<int>(ExitCode::Ok);
    return run(*spec, out, err);
}

}  // namespace esjs::cli
