#include "labmkt/scenario.hpp"
#include "labmkt/table_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace labmkt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("labmkt_io_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(KvFile, ParsesCommentsAndSpaces)
{
    std::istringstream in("# header\nK = 50\n  beta=1.5   # trailing\n\nN=10\n");
    const RawParams raw = parse_kv(in, "test");
    EXPECT_EQ(raw.at("K"), "50");
    EXPECT_EQ(raw.at("beta"), "1.5");
    EXPECT_EQ(raw.at("N"), "10");
}

TEST(KvFile, Rejections)
{
    std::istringstream dup("K=1\nK=2\n");
    EXPECT_THROW(parse_kv(dup, "dup"), ConfigError);
    std::istringstream bad("just words\n");
    EXPECT_THROW(parse_kv(bad, "bad"), ConfigError);
    EXPECT_THROW(read_kv_file("/nonexistent/labmkt.cfg"), ConfigError);
}

TEST(KvFile, RoundTrip)
{
    const fs::path dir = scratch("kv");
    fs::create_directories(dir);
    write_kv_file(dir / "a.txt", {{"K", "5"}, {"alpha", "0.1"}});
    const RawParams raw = read_kv_file(dir / "a.txt");
    EXPECT_EQ(raw.at("K"), "5");
    EXPECT_EQ(raw.at("alpha"), "0.1");
}

TEST(Csv, ColumnCountChecked)
{
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    CsvWriter w(dir / "t.csv", {"a", "b"});
    w.cell(1).cell(0.1).end_row();
    w.cell("x");
    EXPECT_THROW(w.end_row(), std::logic_error);
    CsvWriter ok(dir / "u.csv", {"a", "b", "c"});
    ok.cell(std::uint64_t{7}).cell(true).cell(1.0 / 3.0).end_row();
    ok.close();
    EXPECT_EQ(slurp(dir / "u.csv"), "a,b,c\n7,1,0.3333333333333333\n");
    EXPECT_THROW(CsvWriter("/nonexistent/dir/x.csv", {"a"}), OutputError);
}

TEST(Series, Parse)
{
    std::istringstream in("year,alpha,U,Omega\n2001,1.2,0.1,\n2002,0.8,,0.3\n");
    const auto s = parse_empirical_series(in, "s");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].year, "2001");
    EXPECT_DOUBLE_EQ(s[0].alpha, 1.2);
    EXPECT_DOUBLE_EQ(*s[0].unemployment, 0.1);
    EXPECT_FALSE(s[0].job_supply);
    EXPECT_FALSE(s[1].unemployment);
    EXPECT_DOUBLE_EQ(*s[1].job_supply, 0.3);
}

TEST(Series, Rejections)
{
    std::istringstream no_alpha("year,U\n2001,0.1\n");
    EXPECT_THROW(parse_empirical_series(no_alpha, "s"), ConfigError);
    std::istringstream neg("year,alpha\n2001,-1\n");
    EXPECT_THROW(parse_empirical_series(neg, "s"), ConfigError);
    std::istringstream dup("year,alpha\n2001,1\n2001,2\n");
    EXPECT_THROW(parse_empirical_series(dup, "s"), ConfigError);
    std::istringstream empty("year,alpha\n");
    EXPECT_THROW(parse_empirical_series(empty, "s"), ConfigError);
}

TEST(Lists, Parse)
{
    EXPECT_EQ(parse_real_list("x", "0.1, 1,5"), (std::vector<double>{0.1, 1.0, 5.0}));
    EXPECT_EQ(parse_unsigned_list("s", "3,4"), (std::vector<std::uint64_t>{3, 4}));
    EXPECT_THROW(parse_real_list("x", "1,,2"), ConfigError);
    EXPECT_THROW(parse_unsigned_list("s", "-1"), ConfigError);
}

TEST(Scenario, ModeHandling)
{
    EXPECT_EQ(parse_mode("scan-gamma"), Mode::scan_gamma);
    EXPECT_THROW(parse_mode("bogus"), UnknownModeError);
    RawParams raw{{"K", "50"}, {"N", "100"}, {"alpha", "1"}, {"beta", "1"}, {"gamma", "1"}};
    EXPECT_THROW(parse_scenario(raw), ConfigError);
    raw["mode"] = "bogus";
    EXPECT_THROW(parse_scenario(raw), UnknownModeError);
    raw["mode"] = "micro";
    raw["seeds"] = "4,5";
    const Scenario s = parse_scenario(raw);
    EXPECT_EQ(s.mode, Mode::micro);
    EXPECT_EQ(s.seed_list(), (std::vector<std::uint64_t>{4, 5}));
}

TEST(Scenario, Validation)
{
    const RawParams base{{"K", "50"}, {"N", "100"}, {"alpha", "1"}, {"beta", "1"}, {"gamma", "1"}};
    RawParams raw = base;
    raw["gamma"] = "0";
    EXPECT_THROW(parse_scenario(raw, Mode::frozenline), ConfigError);
    raw = base;
    raw["N"] = "10";
    EXPECT_THROW(parse_scenario(raw, Mode::micro), ConfigError);
    EXPECT_NO_THROW(parse_scenario(raw, Mode::meanfield));
    raw = base;
    EXPECT_THROW(parse_scenario(raw, Mode::mismatch), ConfigError);
    raw["gamma_step"] = "0";
    EXPECT_THROW(parse_scenario(raw, Mode::scan_gamma), ConfigError);
    raw = base;
    raw["replicas"] = "3";
    raw["seed"] = "10";
    EXPECT_EQ(parse_scenario(raw, Mode::micro).seed_list(), (std::vector<std::uint64_t>{10, 11, 12}));
}

TEST(Scenario, GammaGrid)
{
    RawParams raw{{"K", "50"}, {"N", "1"}, {"alpha", "1"}, {"beta", "1"}, {"gamma", "0"},
                  {"gamma_min", "0"}, {"gamma_max", "1"}, {"gamma_step", "0.1"}};
    const auto grid = parse_scenario(raw, Mode::scan_gamma).gamma_grid();
    ASSERT_EQ(grid.size(), 11u);
    EXPECT_DOUBLE_EQ(grid.back(), 1.0);
}

TEST(Mismatch, ModelPointsOnIdentityLines)
{
    EmpiricalSeries series{{"y1", 0.8, std::nullopt, std::nullopt},
                           {"y2", 1.0, 0.2, std::nullopt},
                           {"y3", 1.2, std::nullopt, std::nullopt}};
    MarketConfig cfg;
    cfg.companies = 20;
    cfg.students = 2000;
    cfg.alpha = 1.0;
    cfg.beta = 1.0;
    cfg.gamma = 1.0;
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    const auto rows = mismatch_compare(series, cfg, 3, seeds);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) {
        EXPECT_NEAR(r.unemployment_model, r.alpha_model * r.job_supply_model + 1.0 - r.alpha_model, 1e-12);
    }
    EXPECT_DOUBLE_EQ(rows[1].alpha_model, 1.0);
    EXPECT_NEAR(rows[1].unemployment_model, rows[1].job_supply_model, 1e-15);
    EXPECT_DOUBLE_EQ(*rows[1].unemployment_emp, 0.2);
    EXPECT_NE(rows[0].alpha_model, rows[2].alpha_model);

    const auto again = mismatch_compare(series, cfg, 3, seeds);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(again[i].unemployment_model, rows[i].unemployment_model);
    }
}

TEST(RunScenario, SweepWritesPointsAndManifest)
{
    const fs::path dir = scratch("sweep");
    RawParams raw{{"K", "50"}, {"N", "1"}, {"alpha", "1"}, {"beta", "1"}, {"gamma", "1"},
                  {"sweep_beta", "0.5,1"}, {"output_dir", dir.string()}};
    const auto files = run_scenario(parse_scenario(raw, Mode::frozenline));
    EXPECT_TRUE(fs::exists(dir / "points.csv"));
    EXPECT_TRUE(fs::exists(dir / "point_0" / "frozenline.csv"));
    EXPECT_TRUE(fs::exists(dir / "point_1" / "frozenline.csv"));
    ASSERT_FALSE(files.empty());
    EXPECT_EQ(files.back().filename(), "manifest.txt");
}

TEST(RunScenario, ManifestReRunIsBitIdentical)
{
    const fs::path a = scratch("rerun_a");
    const fs::path b = scratch("rerun_b");
    RawParams raw{{"K", "10"}, {"N", "200"}, {"alpha", "1"}, {"beta", "2"}, {"gamma", "1"},
                  {"years", "3"}, {"replicas", "2"}, {"output_dir", a.string()}};
    run_scenario(parse_scenario(raw, Mode::micro));
    RawParams again = read_kv_file(a / "manifest.txt");
    again["output_dir"] = b.string();
    run_scenario(parse_scenario(again));
    for (const char* f : {"years.csv", "companies.csv"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
}

TEST(RunScenario, BadSeriesLeavesNoOutput)
{
    const fs::path dir = scratch("noseries");
    RawParams raw{{"K", "10"}, {"N", "200"}, {"series", "/nonexistent/series.csv"}, {"output_dir", dir.string()}};
    const Scenario s = parse_scenario(raw, Mode::mismatch);
    EXPECT_THROW(run_scenario(s), ConfigError);
    EXPECT_FALSE(fs::exists(dir));
}
