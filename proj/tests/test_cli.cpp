#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>

using Json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out, err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qkcomp_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

Run run(const std::string& args, const std::string& env = "") {
  const auto err = scratch("stderr.txt");
  const std::string cmd = (env.empty() ? "" : env + " ") + QKCOMP_BINARY + " " + args + " 2>" + err.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cell(line);
    std::string c;
    while (std::getline(cell, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

double coth(double x) { return (std::exp(2 * x) + 1) / (std::exp(2 * x) - 1); }

}  // namespace

TEST(Model, JsonReportForTwo) {
  const auto r = run("model --n 2 --scale 1/1 --format json");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["command"], "model");
  const auto& res = doc["results"][0];
  EXPECT_EQ(res["einstein_constant"], "-16/1");
  EXPECT_EQ(res["scalar"], "-128/1");
  EXPECT_EQ(res["c"], "2/1");
  ASSERT_FALSE(res["tables"].empty());
  for (const auto& t : res["tables"]) {
    EXPECT_TRUE(t["pass"].get<bool>()) << t["name"];
    for (const char* key : {"name", "expected", "actual", "pass"}) EXPECT_TRUE(t.contains(key));
  }
  EXPECT_EQ(doc["checks"].size(), res["tables"].size());
}

TEST(Model, EinsteinConstantForThree) {
  const auto r = run("model --n 3 --scale 9/4");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto res = Json::parse(r.out)["results"][0];
  EXPECT_EQ(res["einstein_constant"], "-20/1");
  EXPECT_EQ(res["scalar"], "-240/1");
}

TEST(Model, ComponentCsv) {
  const auto path = scratch("components.csv");
  const auto r = run("model --n 2 --components " + path.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(slurp(path));
  ASSERT_GT(rows.size(), 1U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"A", "B", "C", "D", "value"}));
  bool radial_p = false, radial_alpha = false;
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 5U);
    if (row[0] == "1" && row[1] == "2" && row[2] == "1" && row[3] == "2") radial_p = row[4] == "-4/1";
    if (row[0] == "1" && row[1] == "5" && row[2] == "1" && row[3] == "5") radial_alpha = row[4] == "-1/1";
  }
  EXPECT_TRUE(radial_p);
  EXPECT_TRUE(radial_alpha);
  // the same list on stdout in csv format
  EXPECT_EQ(run("model --n 2 --format csv").out, slurp(path));
}

TEST(Compare, FiftyRowsMatchClosedForm) {
  const auto r = run("compare --delta -1 --n 2 --r-max 5 --steps 50 --format csv");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 51U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r", "laplacian", "line_block", "transversal_block", "density"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rr = std::stod(rows[i][0]);
    EXPECT_NEAR(rr, 0.1 * static_cast<double>(i), 1e-12);
    EXPECT_NEAR(std::stod(rows[i][1]), 6 * coth(2 * rr) + 4 * coth(rr), 1e-9 * std::stod(rows[i][1]));
    EXPECT_NEAR(std::stod(rows[i][2]), 6 * coth(2 * rr), 1e-9 * std::stod(rows[i][2]));
    EXPECT_NEAR(std::stod(rows[i][4]), std::pow(std::sinh(2 * rr) / 2, 3) * std::pow(std::sinh(rr), 4), 1e-9 * std::stod(rows[i][4]));
  }
}

TEST(Compare, FlatJson) {
  const auto r = run("compare --delta 0 --n 3 --r-max 2 --steps 4");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc["results"].size(), 4U);
  EXPECT_DOUBLE_EQ(doc["results"][3]["laplacian"].get<double>(), 11.0 / 2);
}

TEST(Lambda1, GapBetweenZeroAndOne) {
  const auto r = run("lambda1 --n 2 --rmax 12 --mesh 20000");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto res = Json::parse(r.out)["results"][0];
  for (const char* key : {"n", "r_max", "mesh", "lambda1", "target", "gap"}) EXPECT_TRUE(res.contains(key)) << key;
  EXPECT_EQ(res["target"].get<double>(), 25.0);
  const double gap = res["gap"].get<double>();
  EXPECT_GT(gap, 0);
  EXPECT_LT(gap, 1);
  EXPECT_NEAR(res["lambda1"].get<double>() - 25, gap, 1e-10);
}

TEST(Lambda1, StudyTable) {
  const auto r = run("lambda1 --n 2 --rmax 12 --mesh 4000 --study --rmax-list 6,9,12 --format csv");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0][0], "r_max");
  EXPECT_GT(std::stod(rows[1][2]), std::stod(rows[2][2]));
  EXPECT_GT(std::stod(rows[2][2]), std::stod(rows[3][2]));
}

TEST(Riccati, StaysBelowBarrier) {
  const auto r = run("riccati --m 3 --K -4 --t0 0.1 --t1 3 --format csv");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_GT(rows.size(), 50U);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::stod(rows[i][1]), std::stod(rows[i][2]) + 1e-6);
  EXPECT_NEAR(std::stod(rows[1][2]), 6 * coth(0.2), 1e-9);
}

TEST(Volume, FlatUnitBall) {
  const auto r = run("volume --delta 0 --n 2 --r-max 1 --steps 2");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto last = Json::parse(r.out)["results"][1];
  EXPECT_NEAR(last["volume"].get<double>(), std::pow(std::numbers::pi, 4) / 24, 1e-9);
}

TEST(Identities, PassAndMutation) {
  const auto ok = run("check-identities --dim 4 --samples 20");
  ASSERT_EQ(ok.status, 0) << ok.err;
  EXPECT_EQ(Json::parse(ok.out)["results"].size(), 24U);
  const auto bad = run("check-identities --dim 4 --degree 1 --samples 20 --inject-star-sign-flip");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("identity (1)"), std::string::npos) << bad.err;
}

TEST(Harmonicity, PassesAndHonoursSeedVariable) {
  const auto a = run("harmonicity --n 2 --samples 5 --seed 3");
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(run("harmonicity --n 2 --samples 5 --seed 3").out, a.out);
  EXPECT_EQ(run("harmonicity --n 2 --samples 5 --seed 9", "QKCOMP_SEED=3").out, a.out);
  EXPECT_NE(run("harmonicity --n 2 --samples 5 --seed 9").out, a.out);
}

TEST(Output, OutFileReplacesStdout) {
  const auto path = scratch("out.json");
  const auto r = run("compare --n 2 --delta 1 --r-max 1 --steps 3 --out " + path.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(Json::parse(slurp(path))["command"], "compare");
}

TEST(Usage, ErrorsExitTwo) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("nonsense").status, 2);
  EXPECT_EQ(run("compare --format xml").status, 2);
  EXPECT_EQ(run("compare --delta 2").status, 2);
  EXPECT_EQ(run("compare --delta 1 --r-max 2").status, 2);
  EXPECT_EQ(run("model --scale 1/2").status, 2);
  EXPECT_EQ(run("model --scale abc").status, 2);
  EXPECT_EQ(run("lambda1 --mesh 10").status, 2);
  EXPECT_EQ(run("riccati --m 0").status, 2);
  EXPECT_EQ(run("harmonicity", "QKCOMP_SEED=abc").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Suite, OneLinePerCriterionAndDeterministic) {
  const auto a = run("suite");
  const auto b = run("suite");
  EXPECT_EQ(a.out, b.out);
  std::istringstream in(a.out);
  std::string line;
  int criteria = 0;
  while (std::getline(in, line))
    if (line.rfind("PASS criterion", 0) == 0 || line.rfind("FAIL criterion", 0) == 0) ++criteria;
  EXPECT_EQ(criteria, 8);
  // the e^{-5r} trial on [0, 14] lands at 26.18, over the 25.6 bound
  EXPECT_EQ(a.status, 1);
  EXPECT_NE(a.out.find("FAIL criterion 7"), std::string::npos);
  EXPECT_NE(a.out.find("PASS criterion 1"), std::string::npos);
}

TEST(Suite, InjectedStarFlipNamesIdentityOne) {
  const auto r = run("suite --inject-star-sign-flip");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL criterion 1"), std::string::npos);
  EXPECT_NE(r.out.find("identity (1)"), std::string::npos);
}
