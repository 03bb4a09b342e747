#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli_common.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace polysob::cli;
using nlohmann::json;

TEST_CASE("grid parsing")
{
    const auto g = parse_grid("0.02:0.002:10");
    REQUIRE(g.size() == 10);
    CHECK(g.front() == 0.02);
    CHECK(g.back() == 0.002);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(0.1, 1.0 / 9)));

    const auto l = parse_grid("-1:1:5", Spacing::Linear);
    REQUIRE(l.size() == 5);
    CHECK(l[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(l[1] == doctest::Approx(-0.5));

    for (const char* bad : {"", "1:2", "1:2:3:4", "0:1:5", "-1:1:5", "1:1:5", "1:2:1", "1:2:2.5", "a:2:3", "1:2:",
                            "1e400:2:3"})
        CHECK_THROWS_AS(parse_grid(bad), UsageFailure);
    CHECK_THROWS_AS(parse_grid("1:1:3", Spacing::Linear), UsageFailure);
}

TEST_CASE("grid property: endpoints exact, monotone, count honoured")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> e(-8, 8);
    std::uniform_int_distribution<int> c(2, 300);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = std::pow(10.0, e(rng)), b = std::pow(10.0, e(rng));
        if (a == b) continue;
        const int count = c(rng);
        const auto g = parse_grid(format_number(a) + ":" + format_number(b) + ":" + std::to_string(count));
        REQUIRE(static_cast<int>(g.size()) == count);
        CHECK(g.front() == a);
        CHECK(g.back() == b);
        for (std::size_t i = 1; i < g.size(); ++i) CHECK((a < b ? g[i] > g[i - 1] : g[i] < g[i - 1]));
    }
}

TEST_CASE("list parsing")
{
    const auto l = parse_list("2,4,8");
    REQUIRE(l.size() == 3);
    CHECK(l[2] == 8.0);
    CHECK(parse_list("1e-3").size() == 1);
    for (const char* bad : {"", "1,,2", "1,", "x", "1;2"}) CHECK_THROWS_AS(parse_list(bad), UsageFailure);
}

TEST_CASE("number formatting round-trips")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> e(-300, 300), m(-1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double x = m(rng) * std::pow(10.0, e(rng));
        CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("config hash is canonical and sensitive")
{
    // FNV-1a 64 of the compact dumps "" and {"k":"2","n":"6"}, computed independently
    CHECK(config_hash(json("")) == "07cc7607b4949e25");
    const json a = {{"n", "6"}, {"k", "2"}};
    CHECK(config_hash(a) == "dbe0b90f14b8aa2e");
    json b;
    b["k"] = "2";
    b["n"] = "6";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b["n"] = "7";
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("csv table")
{
    CsvTable t({"x", "y"});
    t.add_row({0.1, 1e-300});
    t.add_row({-2, 3});
    CHECK(t.rows() == 2);
    CHECK_THROWS(t.add_row({1}));
    std::ostringstream os;
    t.write(os);
    CHECK(os.str() == "x,y\n0.10000000000000001,1e-300\n-2,3\n");
    CHECK_THROWS_AS(t.write(std::string("/nonexistent-dir/t.csv")), UsageFailure);
}

TEST_CASE("precision default from the environment")
{
    ::unsetenv("POLYSOB_PRECISION");
    CHECK(default_precision() == 16);
    ::setenv("POLYSOB_PRECISION", "30", 1);
    CHECK(default_precision() == 30);
    ::setenv("POLYSOB_PRECISION", "abc", 1);
    CHECK(default_precision(12) == 12);
    ::setenv("POLYSOB_PRECISION", "-3", 1);
    CHECK(default_precision() == 16);
    ::unsetenv("POLYSOB_PRECISION");
}

TEST_CASE("config files")
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto good = (dir / "polysob_cfg_good.json").string();
    const auto bad = (dir / "polysob_cfg_bad.json").string();
    const auto arr = (dir / "polysob_cfg_arr.json").string();
    write_json({{"n", 6}, {"manifold", "torus"}}, good);
    std::ofstream(bad) << "{ not json";
    std::ofstream(arr) << "[1, 2]";
    const json j = read_config(good);
    CHECK(j["n"] == 6);
    CHECK(j["manifold"] == "torus");
    CHECK_THROWS_AS(read_config(bad), UsageFailure);
    CHECK_THROWS_AS(read_config(arr), UsageFailure);
    CHECK_THROWS_AS(read_config((dir / "polysob_missing.json").string()), UsageFailure);
    for (const auto& p : {good, bad, arr}) std::filesystem::remove(p);
}
