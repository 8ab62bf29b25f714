#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "app.hpp"
#include "grid.hpp"
#include "qrem/closed_form.hpp"
#include "qrem/error.hpp"
#include "table.hpp"

namespace fs = std::filesystem;
using namespace qrem::cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qrem_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qrem");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Grid, ParsesListsAndRanges) {
  EXPECT_EQ(parse_real_grid("0.5,1,2", "beta"), (std::vector<double>{0.5, 1, 2}));
  const auto r = parse_real_grid("0:1:5", "beta");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_DOUBLE_EQ(r[1], 0.25);
  EXPECT_DOUBLE_EQ(r[4], 1.0);
  EXPECT_EQ(parse_p_list("3,5,inf"), (std::vector<int>{3, 5, 0}));
  EXPECT_THROW(parse_real_grid("", "beta"), qrem::InvalidArgument);
  EXPECT_THROW(parse_real_grid("1:x:3", "beta"), qrem::InvalidArgument);
  EXPECT_THROW(parse_p_list("1"), qrem::InvalidArgument);
}

TEST(Table, CsvAndJsonEncoding) {
  Table t({"a", "b", "c", "d", "e"});
  t.add({std::int64_t{3}, 0.1, std::string("x,y"), SeedRange{1, 20}, std::monostate{}});
  t.add({std::int64_t{-1}, std::numeric_limits<double>::infinity(), std::string("z"), true, 2.5});
  std::ostringstream csv;
  t.write(csv, Format::Csv);
  EXPECT_EQ(csv.str(), "a,b,c,d,e\n3,0.1,\"x,y\",1:20,\n-1,inf,z,1,2.5\n");
  std::ostringstream js;
  t.write(js, Format::Json);
  const auto rows = lines(js.str());
  ASSERT_EQ(rows.size(), 2u);
  const auto first = nlohmann::json::parse(rows[0]);
  EXPECT_EQ(first["a"], 3);
  EXPECT_DOUBLE_EQ(first["b"].get<double>(), 0.1);
  EXPECT_EQ(first["d"], nlohmann::json::array({1, 20}));
  EXPECT_TRUE(first["e"].is_null());
  EXPECT_THROW(t.add({std::int64_t{1}}), qrem::EngineError);
}

TEST(Table, ShortestRoundTripDoubles) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Cli, ClosedFormMatchesLibrary) {
  TempDir dir;
  const auto out = dir.path / "cf.csv";
  ASSERT_EQ(invoke({"closed-form", "--beta", "0.5,2", "--gamma", "0,1", "--p", "3,inf", "-o",
                    out.string()}),
            kExitOk);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 1u + 2 * 2 * 2);
  EXPECT_EQ(rows[0], "beta,gamma,p,rem_pressure,qrem_pressure,critical_field,branch,one_over_p,note");
  EXPECT_EQ(rows[1].substr(0, 8), "0.5,0,3,");
  EXPECT_NE(rows[1].find(format_double(qrem::rem_pressure(0.5))), std::string::npos);
}

TEST(Cli, PressureRowPerGridPointAndDeterministic) {
  TempDir dir;
  const std::vector<std::string> base = {"pressure", "--variant", "full,rem", "--p", "3",
                                         "--n", "6,7", "--beta", "0.5,1", "--gamma", "0,0.5",
                                         "--num-disorder", "3", "--seed", "11"};
  auto a = base;
  a.insert(a.end(), {"-o", (dir.path / "a.csv").string()});
  auto b = base;
  b.insert(b.end(), {"-o", (dir.path / "b.csv").string(), "--threads", "1"});
  ASSERT_EQ(invoke(a), kExitOk);
  ASSERT_EQ(invoke(b), kExitOk);
  const auto text = slurp(dir.path / "a.csv");
  EXPECT_EQ(text, slurp(dir.path / "b.csv"));
  const auto rows = lines(text);
  ASSERT_EQ(rows.size(), 1u + 2 * 2 * 2 * 2);
  EXPECT_EQ(rows[0].substr(0, 24), "method,variant,p,n,beta,");
  EXPECT_NE(text.find("11:13"), std::string::npos);
  EXPECT_EQ(text.find("wall_time_s"), std::string::npos);
}

TEST(Cli, JsonOutputAndTimingColumn) {
  TempDir dir;
  const auto out = dir.path / "p.ndjson";
  ASSERT_EQ(invoke({"pressure", "--n", "5", "--beta", "1", "--gamma", "0.3", "--num-disorder",
                    "2", "--format", "json", "--timing", "-o", out.string()}),
            kExitOk);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 1u);
  const auto rec = nlohmann::json::parse(rows[0]);
  EXPECT_EQ(rec["method"], "dense_eig");
  EXPECT_TRUE(rec.contains("wall_time_s"));
  EXPECT_EQ(rec["num_samples"], 2);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  TempDir dir;
  const auto cfg = dir.path / "run.cfg";
  std::ofstream(cfg) << "beta = \"0.5,1.5\"\ngamma = 0\nn = 6\nnum-disorder = 2\n";
  const auto out = dir.path / "o.csv";
  ASSERT_EQ(invoke({"pressure", "--config", cfg.string(), "--n", "5", "-o", out.string()}), kExitOk);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[1].find(",5,0.5,0,"), std::string::npos);
  EXPECT_NE(rows[2].find(",5,1.5,0,"), std::string::npos);
}

TEST(Cli, DefaultOutputPathUsesEnvironment) {
  TempDir dir;
  ::setenv("QREM_OUTPUT_DIR", dir.path.c_str(), 1);
  const int code = invoke({"closed-form", "--beta", "1", "--gamma", "0", "--p", "inf"});
  ::unsetenv("QREM_OUTPUT_DIR");
  ASSERT_EQ(code, kExitOk);
  EXPECT_TRUE(fs::exists(dir.path / "closed-form.csv"));
}

TEST(Cli, ConfigurationErrorsExitTwo) {
  TempDir dir;
  const auto out = (dir.path / "x.csv").string();
  EXPECT_EQ(invoke({"pressure", "--beta", "-1", "-o", out}), kExitConfig);
  EXPECT_EQ(invoke({"pressure", "--bogus", "1", "-o", out}), kExitConfig);
  EXPECT_EQ(invoke({"pressure", "--engine", "magic", "-o", out}), kExitConfig);
  EXPECT_EQ(invoke({"pressure", "--n", "40", "-o", out}), kExitConfig);
  EXPECT_EQ(invoke({"pressure", "--n", "15", "--gamma", "1", "--engine", "dense", "-o", out}),
            kExitConfig);
  EXPECT_EQ(invoke({"converge-p", "--p", "3,5", "-o", out}), kExitConfig);
  EXPECT_EQ(invoke({"selfavg", "--num-disorder", "20", "-o", out}), kExitConfig);
  EXPECT_EQ(invoke({"cluster-census", "--r", "0.2", "-o", out}), kExitConfig);
  EXPECT_EQ(invoke({"pressure", "-o", (dir.path / "missing" / "x.csv").string()}), kExitConfig);
  EXPECT_EQ(invoke({}), kExitConfig);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, CostGuardRefusesBeforeWork) {
  TempDir dir;
  const auto out = (dir.path / "x.csv").string();
  EXPECT_EQ(invoke({"pressure", "--n", "24", "--gamma", "1", "--num-disorder", "1000",
                    "--max-cost", "1e9", "-o", out}),
            kExitConfig);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, ConvergePReportsGapAndRem) {
  TempDir dir;
  const auto out = dir.path / "c.csv";
  ASSERT_EQ(invoke({"converge-p", "--p", "3,5,inf", "--n", "6", "--beta", "0.8", "--gamma",
                    "0.2", "--num-disorder", "2", "-o", out.string()}),
            kExitOk);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[0].find("phi_inf,one_over_p,gap,gap_times_p"), std::string::npos);
  EXPECT_EQ(rows[3].substr(0, 8), "rem,inf,");
}

TEST(Cli, SelfAvgRowsPerThreshold) {
  TempDir dir;
  const auto out = dir.path / "s.csv";
  ASSERT_EQ(invoke({"selfavg", "--variant", "rem", "--n", "6", "--beta", "1", "--gamma", "0",
                    "--num-disorder", "200", "-o", out.string()}),
            kExitOk);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_NE(rows[0].find("exceedance,bound,binomial_stderr"), std::string::npos);
}

TEST(Cli, CensusColumnsAndInadmissibleSchedule) {
  TempDir dir;
  const auto out = dir.path / "k.csv";
  ASSERT_EQ(invoke({"cluster-census", "--n", "8", "--epsilon", "0.5", "--num-disorder", "2",
                    "--r", "0.25", "--L", "1", "-o", out.string()}),
            kExitOk);
  auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].rfind("seed,epsilon,r,num_components,max_diameter,max_component_size,T_norm,"
                          "bound_2N_sqrt_rL,event_flag,",
                          0),
            0u);
  EXPECT_NE(rows[1].find(",holds,"), std::string::npos) << rows[1];
  ASSERT_EQ(invoke({"cluster-census", "--n", "8", "--p", "4", "--epsilon", "0.5",
                    "--num-disorder", "2", "-o", out.string()}),
            kExitOk);
  rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[1].find("inadmissible"), std::string::npos);
}
