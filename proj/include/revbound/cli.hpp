#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace revbound::cli {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// A tolerance test attached to a command result.
struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    std::string relation;  ///< "<=" or ">="
    bool ok = false;
};

Check check_le(std::string name, double value, double limit);
Check check_ge(std::string name, double value, double limit);

/// Everything a command reports; serialized as one JSON object.
struct OutputRecord {
    std::string command;
    Json inputs = Json::object();
    Json results = Json::object();
    std::string provenance;  ///< closed-form | quadrature | monte-carlo | lp
    std::string version = kVersion;
    std::optional<std::uint64_t> seed;
    std::vector<Check> checks;

    bool ok() const noexcept;
};

Json to_json(const OutputRecord& record);
OutputRecord record_from_json(const Json& j);

/// Aligned key/value table, numbers at 9 significant digits.
std::string format_table(const OutputRecord& record);
/// Two-column CSV (key,value) at full precision.
std::string format_csv(const OutputRecord& record);

/// One row of the approximation-ratio curves.
struct FigureRow {
    int m = 0;
    double ratio = 0.0;                 ///< separate-selling ratio bound
    std::optional<double> ratio_bundle;  ///< uniform curve only
};

/// Rows m = 1..max_m of curve 1 (uniform: separate and bundle) or curve 2
/// (exponential: separate). Throws InvalidArgument for max_m outside 1..200.
std::vector<FigureRow> figure_rows(int which, int max_m, unsigned precision_bits);
std::string figure_csv(int which, const std::vector<FigureRow>& rows);
std::string figure_json(int which, const std::vector<FigureRow>& rows);
/// Inverse of figure_csv().
std::vector<FigureRow> parse_figure_csv(const std::string& text);

/// Full command-line entry point. Exit codes: 0 all checks pass, 1 some
/// check failed, 2 usage error, 3 computation or I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace revbound::cli
