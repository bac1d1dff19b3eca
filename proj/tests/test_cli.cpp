#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "barron_pde/io.hpp"

using namespace barron_pde;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr together
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BARRON_PDE_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("barron_pde_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    write_text(path(name), text);
    return path(name);
  }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  const auto missing = run("solve heat --t 1");
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.out.find("--u0"), std::string::npos);
  EXPECT_EQ(run("solve screened-poisson --lambda 1 --rhs x.json --bogus").code, 2);
}

TEST_F(Cli, FileErrorsHaveDistinctMessages) {
  const auto v2 = write("v2.json", R"({"format":"barron-net/2","kind":"shallow","activation":"relu","input_dim":1,"atoms":[]})");
  const auto r1 = run("norm --net " + v2);
  EXPECT_EQ(r1.code, 2);
  EXPECT_NE(r1.out.find("version error"), std::string::npos);
  const auto bad = write("bad.json", R"({"format":"barron-net/1","kind":"shallow","activation":"relu","input_dim":1,"atoms":[{"a":1}]})");
  const auto r2 = run("norm --net " + bad);
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.out.find("format error"), std::string::npos);
  const auto dim = write("dim.json", R"({"format":"barron-net/1","kind":"shallow","activation":"relu","input_dim":2,"atoms":[{"a":1,"w":[1],"b":0}]})");
  const auto r3 = run("norm --net " + dim);
  EXPECT_EQ(r3.code, 2);
  EXPECT_NE(r3.out.find("dimension error"), std::string::npos);
}

TEST_F(Cli, ScreenedPoissonWritesNetAndReport) {
  const auto rhs = write("f.json", to_json(ShallowRep(2, Activation::relu, {Atom{1, {0.6, 0.8}, 0.1}, Atom{-2, {1, 0}, 0}})));
  const auto r = run("solve screened-poisson --lambda 2 --rhs " + rhs + " --out " + path("u.json") + " --report " +
                     path("u.csv") + " --nquad 256");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto u = read_shallow(path("u.json"));
  EXPECT_GT(u.size(), 256u);
  const auto csv = read_text(path("u.csv"));
  EXPECT_NE(csv.find("# config: lambda=2\n"), std::string::npos);
  EXPECT_NE(csv.find("atom_index,input_norm,output_norm,paper_bound,ratio\n"), std::string::npos);
  EXPECT_NE(csv.find("# paper_bound: (lambda^-2 + 2 lambda^-3) * ||f||"), std::string::npos);
}

TEST_F(Cli, PoissonPairRejectsRelu) {
  const auto rhs = write("f.json", to_json(ShallowRep(1, Activation::relu, {Atom{1, {1}, 0}})));
  const auto r = run("solve poisson-pair --rhs " + rhs);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("cubic"), std::string::npos);
  const auto sp = write("g.json", to_json(ShallowRep(1, Activation::softplus, {Atom{1, {2}, 0}})));
  EXPECT_EQ(run("solve poisson-pair --rhs " + sp + " --out " + path("u.json")).code, 0);
}

TEST_F(Cli, HeatAndVerify) {
  const auto u0 = write("u0.json", to_json(ShallowRep(1, Activation::tanh, {Atom{1, {0.6}, 0.2}})));
  ASSERT_EQ(run("solve heat --u0 " + u0 + " --t 1 --spacetime --out " + path("st.json") + " --report " + path("h.csv")).code, 0);
  const auto ok = run("verify --net " + path("st.json") + " --op heat --grid 0.2:1,-1:1@0.02 --tol 1e-2");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("max_residual"), std::string::npos);
  // the same net is not a screened solution
  EXPECT_EQ(run("verify --net " + path("st.json") + " --op screened --grid -1:1,-1:1@0.1 --tol 1e-2").code, 1);
  EXPECT_EQ(run("verify --net " + path("st.json") + " --op heat --grid -1:1@0.1").code, 2);
}

TEST_F(Cli, SeedRepeatedLastWins) {
  const auto net = write("n.json", to_json(ShallowRep(1, Activation::relu, {Atom{1, {1}, 0}, Atom{-1, {2}, 0.5}, Atom{0.3, {-1}, 1}})));
  const auto a = run("rates --net " + net + " --m 4,8 --seeds 3 --eval 50 --seed 7 --seed 9 --out " + path("a.csv"));
  ASSERT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("warning: --seed given 2 times"), std::string::npos);
  ASSERT_EQ(run("rates --net " + net + " --m 4,8 --seeds 3 --eval 50 --seed 9 --out " + path("b.csv")).code, 0);
  EXPECT_EQ(read_text(path("a.csv")), read_text(path("b.csv")));
  EXPECT_NE(read_text(path("a.csv")).find("# seed: 9\n"), std::string::npos);
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput) {
  const auto u0 = write("u0.json", to_json(ShallowRep(1, Activation::relu, {Atom{1, {1}, 1}, Atom{-1, {1}, -1}})));
  const std::string base = "solve hj --u0 " + u0 + " --mc 300 --exp-atoms 64 --log-atoms 64 --seed 3";
  ASSERT_EQ(run("--threads 1 " + base + " --out " + path("a.json") + " --report " + path("a.csv")).code, 0);
  ASSERT_EQ(run("--threads 8 " + base + " --out " + path("b.json") + " --report " + path("b.csv")).code, 0);
  EXPECT_EQ(read_text(path("a.json")), read_text(path("b.json")));
  EXPECT_EQ(read_text(path("a.csv")), read_text(path("b.csv")));
}

TEST_F(Cli, CounterexampleCommands) {
  const auto c = run("counterexample corner --k 1 --theta 4.71238898038469 --out " + path("c.csv"));
  ASSERT_EQ(c.code, 0) << c.out;
  EXPECT_NE(read_text(path("c.csv")).find("# fitted_exponent: -0.33333"), std::string::npos);
  const auto g = run("counterexample growth");
  EXPECT_EQ(g.code, 0);
  EXPECT_NE(g.out.find("# growth_exponent: 3"), std::string::npos);
  const auto u = run("counterexample ushape --probe 0.5,2");
  EXPECT_EQ(u.code, 0);
  EXPECT_NE(u.out.find("0.5,2,1,1,1,nan"), std::string::npos);
  const auto b = run("counterexample ball --d 3 --m 16,32 --seeds 2 --samples 500 --grid 60 --out " + path("b.csv"));
  EXPECT_EQ(b.code, 0) << b.out;
  EXPECT_NE(read_text(path("b.csv")).find("# control_slope:"), std::string::npos);
}

TEST_F(Cli, NormReport) {
  const auto net = write("n.json", to_json(ShallowRep(2, Activation::relu, {Atom{-2, {3, 4}, -1}})));
  const auto r = run("norm --net " + net);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0,-2,5,-1,12\n"), std::string::npos);
  EXPECT_NE(r.out.find("# norm_cert: 12"), std::string::npos);
}
