#include "cli_common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace polysob::cli {

namespace {

double parse_number(const std::string& s, const std::string& context)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageFailure("malformed number '" + s + "' in " + context);
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageFailure("malformed number '" + s + "' in " + context);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

} // namespace

std::vector<double> parse_grid(const std::string& spec, Spacing spacing)
{
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw UsageFailure("grid '" + spec + "' must be first:last:count");
    const double first = parse_number(parts[0], "grid '" + spec + "'");
    const double last = parse_number(parts[1], "grid '" + spec + "'");
    const double count_d = parse_number(parts[2], "grid '" + spec + "'");
    if (count_d < 2 || count_d != std::floor(count_d) || count_d > 1e6)
        throw UsageFailure("grid '" + spec + "' needs an integer count >= 2");
    if (first == last) throw UsageFailure("grid '" + spec + "' has equal endpoints");
    if (spacing == Spacing::Geometric && !(first > 0 && last > 0))
        throw UsageFailure("geometric grid '" + spec + "' needs positive endpoints");
    const int count = static_cast<int>(count_d);
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        g[i] = spacing == Spacing::Geometric ? first * std::pow(last / first, f) : first + (last - first) * f;
    }
    g.back() = last;
    return g;
}

std::vector<double> parse_list(const std::string& spec)
{
    std::vector<double> out;
    for (const auto& p : split(spec, ',')) out.push_back(parse_number(p, "list '" + spec + "'"));
    if (out.empty()) throw UsageFailure("empty list");
    return out;
}

std::string config_hash(const nlohmann::json& config)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values)
{
    if (values.size() != columns_.size()) throw std::logic_error("CsvTable: row width mismatch");
    rows_.push_back(values);
}

void CsvTable::write(std::ostream& os) const
{
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
        os << '\n';
    }
}

void CsvTable::write(const std::string& path) const
{
    std::ofstream f(path);
    if (!f) throw UsageFailure("cannot write '" + path + "'");
    write(f);
}

int default_precision(int fallback)
{
    if (const char* env = std::getenv("POLYSOB_PRECISION")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 100) return static_cast<int>(v);
    }
    return fallback;
}

nlohmann::json read_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw UsageFailure("cannot read config '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageFailure("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageFailure("config '" + path + "' must be a JSON object");
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path)
{
    std::ofstream f(path);
    if (!f) throw UsageFailure("cannot write '" + path + "'");
    f << j.dump(2) << '\n';
}

} // namespace polysob::cli
