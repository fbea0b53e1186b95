#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace esjs::cli {
namespace {

std::string scheme_name(ResampleScheme s) { return s == ResampleScheme::Iid ? "iid" : "moving_block"; }
std::string interval_name(IntervalMethod m) { return m == IntervalMethod::Percentile ? "percentile" : "basic"; }
std::string format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Table: return "table";
    }
    return "json";
}

Json family_list(std::span<const Family> families) {
    Json out = Json::array();
    for (const Family f : families) out.push_back(std::string(family_name(f)));
    return out;
}

std::string cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_number(v.get<double>());
    return v.dump();
}

// Flattens one row object into (column, cell) pairs; params become
// param1, param2 and the interval lb, ub, level.
std::vector<std::pair<std::string, std::string>> flatten_row(const Json& row) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, value] : row.items()) {
        if (key == "params") {
            for (std::size_t i = 0; i < 2; ++i) {
                out.emplace_back("param" + std::to_string(i + 1), i < value.size() ? cell(value[i]) : "");
            }
        } else if (key == "ci") {
            for (const char* k : {"lb", "ub", "level"}) out.emplace_back(k, cell(value[k]));
        } else {
            out.emplace_back(key, cell(value));
        }
    }
    return out;
}

Json rows_of(const Json& report) {
    if (report.contains("rows")) return report["rows"];
    // Divergence reports carry a single unnamed row.
    Json row = Json::object();
    for (const char* k : {"esjs", "distance"}) row[k] = report[k];
    if (report.contains("ci")) row["ci"] = report["ci"];
    return Json::array({row});
}

std::string render_csv(const Json& report) {
    std::ostringstream out;
    const Json rows = rows_of(report);
    bool header = false;
    for (const auto& row : rows) {
        const auto cells = flatten_row(row);
        if (!header) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i].first;
            out << "\n";
            header = true;
        }
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i].second;
        out << "\n";
    }
    return out.str();
}

std::string render_table(const Json& report) {
    std::ostringstream out;
    const Json rows = rows_of(report);
    std::vector<std::vector<std::pair<std::string, std::string>>> flat;
    for (const auto& row : rows) flat.push_back(flatten_row(row));
    if (!flat.empty()) {
        std::vector<std::size_t> width(flat.front().size(), 0);
        for (std::size_t c = 0; c < width.size(); ++c) {
            width[c] = flat.front()[c].first.size();
            for (const auto& r : flat) width[c] = std::max(width[c], r[c].second.size());
        }
        auto line = [&](auto get) {
            for (std::size_t c = 0; c < width.size(); ++c) {
                const std::string s = get(c);
                out << (c ? "  " : "") << s << std::string(width[c] - s.size(), ' ');
            }
            out << "\n";
        };
        line([&](std::size_t c) { return flat.front()[c].first; });
        line([&](std::size_t c) { return std::string(width[c], '-'); });
        for (const auto& r : flat) line([&](std::size_t c) { return r[c].second; });
    }
    for (const char* key : {"best", "challenger", "factor", "single_hypothesis"}) {
        if (report.contains(key) && !report[key].is_null()) out << key << ": " << cell(report[key]) << "\n";
    }
    if (report.contains("skipped")) {
        for (const auto& s : report["skipped"]) {
            out << "skipped " << s["family"].get<std::string>() << ": " << s["reason"].get<std::string>() << "\n";
        }
    }
    if (report.contains("powerlaw")) {
        out << "powerlaw amplitude: " << cell(report["powerlaw"]["amplitude"]) << "\n";
        out << "powerlaw exponent: " << cell(report["powerlaw"]["exponent"]) << "\n";
    }
    return out.str();
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string subcommand_name(Subcommand s) {
    switch (s) {
        case Subcommand::Fit: return "fit";
        case Subcommand::Compare: return "compare";
        case Subcommand::Simulate: return "simulate";
        case Subcommand::Divergence: return "divergence";
        case Subcommand::Scaling: return "scaling";
    }
    return "fit";
}

Json spec_to_json(const RunSpec& spec) {
    Json j = Json::object();
    j["subcommand"] = subcommand_name(spec.subcommand);
    j["inputs"] = spec.inputs;
    if (spec.column.index) {
        j["column"] = *spec.column.index;
    } else {
        j["column"] = spec.column.name;
    }
    j["families"] = family_list(spec.families);
    if (spec.given) {
        j["given"] = {{"family", std::string(family_name(spec.given->family))}, {"params", spec.given->params}};
    } else {
        j["given"] = nullptr;
    }
    j["n"] = spec.n;
    j["model_sample_size"] = spec.model_sample_size;
    j["bins"] = spec.bins ? Json(*spec.bins) : Json(nullptr);
    j["bootstrap"] = {{"resamples", spec.bootstrap.resamples},
                      {"level", spec.bootstrap.level},
                      {"method", interval_name(spec.bootstrap.interval)},
                      {"scheme", scheme_name(spec.bootstrap.scheme)},
                      {"block_length", spec.bootstrap.block_length}};
    j["exclude_from_factor"] = family_list(spec.exclude_from_factor);
    j["sizes"] = spec.sizes;
    j["seed"] = spec.seed ? Json(*spec.seed) : Json(nullptr);
    j["format"] = format_name(spec.format);
    return j;
}

Json fit_row_to_json(const FitReport& row) {
    return Json{{"family", std::string(family_name(row.family))},
                {"params", row.params},
                {"esjs", row.esjs},
                {"distance", row.distance},
                {"ci", {{"lb", row.ci.lb}, {"ub", row.ci.ub}, {"level", row.ci.level}}},
                {"n", row.n},
                {"model_sample_size", row.model_sample_size}};
}

Json experiment_to_json(const ExperimentReport& report) {
    Json j = Json::object();
    Json rows = Json::array();
    for (const auto& r : report.rows) rows.push_back(fit_row_to_json(r));
    j["rows"] = rows;
    Json skipped = Json::array();
    for (const auto& s : report.skipped) {
        skipped.push_back({{"family", std::string(family_name(s.family))}, {"reason", s.reason}});
    }
    j["skipped"] = skipped;
    j["best"] = std::string(family_name(report.best));
    j["challenger"] = report.challenger ? Json(std::string(family_name(*report.challenger))) : Json(nullptr);
    j["factor"] = report.factor.ratio;
    j["single_hypothesis"] = report.single_hypothesis;
    return j;
}

Json scaling_to_json(std::span<const ScalingRow> rows, const PowerLaw& fit) {
    Json j = Json::object();
    Json out = Json::array();
    for (const auto& r : rows) out.push_back({{"size", r.size}, {"params", r.params}, {"esjs", r.esjs}});
    j["rows"] = out;
    j["powerlaw"] = {{"amplitude", fit.amplitude}, {"exponent", fit.exponent}};
    return j;
}

std::string render(const Json& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: return report.dump(2) + "\n";
        case OutputFormat::Csv: return render_csv(report);
        case OutputFormat::Table: return render_table(report);
    }
    return report.dump(2) + "\n";
}

}  // namespace esjs::cli
