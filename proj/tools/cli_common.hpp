#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polysob::cli {

/// Exit statuses: success, usage or operational error, failed mathematical check.
enum ExitCode : int { Success = 0, UsageError = 1, VerificationFailure = 2 };

/// Usage error carrying the message shown to the user (exit 1).
struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Spacing { Geometric, Linear };

/// "lo:hi:count" (or "hi:lo:count") → count points from the first to the second endpoint,
/// geometric unless `spacing` is Linear. Throws UsageFailure on malformed input.
std::vector<double> parse_grid(const std::string& spec, Spacing spacing = Spacing::Geometric);

/// Comma-separated list of numbers.
std::vector<double> parse_list(const std::string& spec);

/// FNV-1a (64 bit) of the compact JSON dump; object keys are sorted, so the hash is canonical.
std::string config_hash(const nlohmann::json& config);

/// %.17g: round-trips every double.
std::string format_number(double x);

/// Column-named CSV with every numeric cell in %.17g.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    std::size_t rows() const { return rows_.size(); }
    void write(std::ostream& os) const;
    /// Writes to `path`; throws UsageFailure when the file cannot be opened.
    void write(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Precision default: POLYSOB_PRECISION when set to a positive integer, else `fallback`.
int default_precision(int fallback = 16);

/// Reads a JSON object from `path`; throws UsageFailure when unreadable or not an object.
nlohmann::json read_config(const std::string& path);

/// Writes `j` (indented) to `path`; throws UsageFailure when the file cannot be opened.
void write_json(const nlohmann::json& j, const std::string& path);

} // namespace polysob::cli
