#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

#include "entrolab/errors.hpp"
#include "entrolab/state_spec.hpp"
#include "entrolab/states.hpp"
#include "test_util.hpp"

using namespace entrolab;
using namespace entrolab::testing;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(StateSpec, Shorthands) {
  EXPECT_LT(max_abs(parse_state("bell").matrix() - make_bell().matrix()), 1e-15);
  EXPECT_EQ(parse_state("tms:r=1").dim(), 13 * 13);
  EXPECT_EQ(parse_state("tms:r=0.5,K=3").dim(), 16);
  EXPECT_EQ(parse_state("disc:n=4").dim(), 5);
  EXPECT_EQ(parse_state("maxent:d=3,dB=4").dims(), (std::vector<int>{3, 4}));
  auto cq = parse_state("cq:0,+;p=0.25,0.75");
  EXPECT_NEAR(cq.matrix()(0, 0).real(), 0.25, 1e-15);
  EXPECT_EQ(cq.subsystems()[0].label, "X");
  EXPECT_EQ(parse_state("maxmixed:d=2").dim(), 2);
}

TEST(StateSpec, RandomIsSeeded) {
  EXPECT_LT(max_abs(parse_state("random:dims=2x3,seed=5").matrix() - parse_state("random:dims=2x3,seed=5").matrix()),
            1e-15);
  EXPECT_GT(max_abs(parse_state("random:dims=2x2,seed=5").matrix() - parse_state("random:dims=2x2,seed=6").matrix()),
            1e-6);
}

TEST(StateSpec, JsonMatrixAndFile) {
  nlohmann::json j{{"type", "matrix"}, {"dims", {2}}, {"re", {0.75, 0, 0, 0.25}}};
  auto rho = state_from_json(j);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 0.75, 1e-15);
  const std::string path = ::testing::TempDir() + "entrolab_state.json";
  {
    std::ofstream f(path);
    f << nlohmann::json{{"type", "cq"},
                        {"ensemble",
                         {{{"p", 0.5}, {"state", {{"type", "pure"}, {"dims", {2}}, {"re", {1, 0}}}}},
                          {{"p", 0.5}, {"state", {{"type", "pure"}, {"dims", {2}}, {"re", {0, 1}}}}}}}}
                .dump();
  }
  auto cq = parse_state("@" + path);
  EXPECT_LT(max_abs(cq.matrix() - cq_uniform_orthogonal().matrix()), 1e-15);
  std::remove(path.c_str());
}

TEST(StateSpec, Malformed) {
  EXPECT_THROW(parse_state("nonsense"), InputError);
  EXPECT_THROW(parse_state("tms:K=3"), InputError);
  EXPECT_THROW(parse_state("tms:r=abc"), InputError);
  EXPECT_THROW(parse_state("cq:0,2"), InputError);
  EXPECT_THROW(parse_state("@/no/such/file.json"), InputError);
  EXPECT_THROW(parse_state("{\"type\": \"matrix\", \"dims\": [2], \"re\": [1, 0]}"), InputError);
  EXPECT_THROW(parse_state("{not json"), InputError);
}

TEST(Cli, ComputeBellTable) {
  auto r = run({"compute", "--state", "bell", "--quantity", "hmin,hmax"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("hmin"), std::string::npos);
  auto c = run({"--format", "csv", "compute", "--state", "bell", "--quantity", "hmin,hmax"});
  auto rows = csv_rows(c.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][2], "value");
  EXPECT_NEAR(std::stod(rows[1][2]), -1.0, 1e-6);
  EXPECT_NEAR(std::stod(rows[2][2]), -1.0, 1e-6);
}

TEST(Cli, NineSignificantDigits) {
  auto c = run({"--format", "csv", "compute", "--state", "disc:n=4", "--quantity", "hmax_uncond"});
  auto rows = csv_rows(c.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][2], "1.79993725");
}

TEST(Cli, LadderCsvColumnsAndMonotoneLambda) {
  auto r = run({"--format", "csv", "ladder", "--state", "tms:r=1,K=5", "--levels", "1..5", "--quantity", "hmin"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "trace", "lambda_projected", "h_projected", "h_normalized"}));
  double last = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double lam = std::stod(rows[i][2]);
    EXPECT_GE(lam, last - 1e-7);
    last = lam;
  }
}

TEST(Cli, AepJson) {
  auto r = run({"--format", "json", "aep", "--state", "bell", "--n", "1,2", "--eps", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["n"], 1);
  EXPECT_EQ(j[1]["certification"], "measured");
  EXPECT_TRUE(j[1]["lower_bound_holds"].get<bool>());
}

TEST(Cli, SmoothJson) {
  auto r = run({"--format", "json", "smooth", "--state", "bell", "--eps", "0,0.1", "--quantity", "hmin"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_LE(j[1]["purified_distance"].get<double>(), 0.1 + 1e-6);
}

TEST(Cli, DeterministicOutput) {
  std::vector<std::string> args{"--format", "json", "--seed", "9", "selftest", "--count", "2"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.out << a.err;
  EXPECT_EQ(a.out, b.out);
  std::vector<std::string> c{"--format", "csv", "compute", "--state", "random:dims=2x2,seed=3", "-q", "hmin,hmax,guess"};
  // guess on a non-cq state is an input error
  EXPECT_EQ(run(c).code, 2);
  c.back() = "hmin,hmax,decoupling,qcorr";
  EXPECT_EQ(run(c).out, run(c).out);
}

TEST(Cli, OutputFile) {
  const std::string path = ::testing::TempDir() + "entrolab_out.csv";
  auto r = run({"--format", "csv", "--output", path, "compute", "--state", "bell", "-q", "hmin_pure"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "state,quantity,value,method,status,iterations");
  std::remove(path.c_str());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"compute"}).code, 2);
  EXPECT_EQ(run({"compute", "--state", "tms:r=x"}).code, 2);
  EXPECT_EQ(run({"compute", "--state", "bell", "-q", "nope"}).code, 2);
  EXPECT_EQ(run({"smooth", "--state", "maxent:d=4,dB=10"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  // an iteration limit of one cannot reach optimality
  EXPECT_EQ(run({"--max-iter", "1", "compute", "--state", "bell", "-q", "hmin"}).code, 3);
}
