#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mstwist/cli.hpp"

using namespace mstwist;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mstwist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(MSTWIST_CONFIG_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, Invariants) {
  const auto r = run_cli({"invariants", "--config", config("zeta.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json f = r.doc()["functions"][0];
  EXPECT_NEAR(f["d"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(f["q"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(f["omega"][0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(f["omega"][1].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(f["xi"][0].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(f["xi"][1].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(f["structural"]["exact"], json({"1", "0", "0"}));
}

TEST(Cli, FullFunctionBlock) {
  const auto r = run_cli({"invariants", "--config", config("zeta_chi4.json"), "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = r.out.find("L(chi mod 4),1,");
  ASSERT_NE(row, std::string::npos) << r.out;
  EXPECT_NEAR(std::stod(r.out.substr(row + 15)), 4.0, 1e-12);
}

TEST(Cli, SpectrumCsv) {
  const auto r = run_cli({"spectrum", "--config", config("zetazeta.json"), "--alpha-max", "5", "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "alpha,witness_count,witnesses");
  std::vector<double> alphas;
  while (std::getline(in, line)) alphas.push_back(std::stod(line.substr(0, line.find(','))));
  const std::vector<double> expected = {2, 2 * std::sqrt(2.0), 2 * std::sqrt(3.0), 4, 2 * std::sqrt(5.0), 2 * std::sqrt(6.0)};
  ASSERT_EQ(alphas.size(), expected.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) EXPECT_NEAR(alphas[k], expected[k], 1e-12);
  EXPECT_NE(r.out.find("4.0000000000000009,3,\"(1,4) (2,2) (4,1)\""), std::string::npos) << r.out;
}

TEST(Cli, SpectrumCutoff) {
  const auto r = run_cli({"spectrum", "--config", config("zetazeta.json"), "--alpha-max", "5", "--n-max", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.doc()["error"]["type"], "cutoff");
  EXPECT_EQ(r.doc()["error"]["required"], 6.0);
}

TEST(Cli, EvalPointAndSegment) {
  auto r = run_cli({"eval", "--config", config("zeta.json"), "--s", "0", "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "s1_re,s1_im,value_re,value_im,ladder_diff");
  r = run_cli({"eval", "--config", config("zeta.json"), "--s", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.doc()["points"][0]["value"][0].get<double>(), pi * pi / 6, 1e-6);
  r = run_cli({"eval", "--config", config("zetazeta.json"), "--method", "series", "--alpha", "0.7", "--from", "1.5",
               "--from", "1.5", "--to", "2+1i", "--to", "2", "--steps", "3", "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST(Cli, EvalPoleIsAnError) {
  const auto r = run_cli({"eval", "--config", config("zetazeta.json"), "--s", "0.75", "--s", "0.75"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.doc()["error"]["type"], "pole");
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ConvergenceFailureExitsTwo) {
  const std::string path = write_temp("tight.json", R"({
    "functions": [{"preset": "zeta"}, {"preset": "zeta"}],
    "kappa": ["1/2", "1/2"], "alpha": 0.7,
    "params": {"x0": 10, "rungs": 5, "ladder_tol": 1e-15}
  })");
  const auto r = run_cli({"eval", "--config", path, "--s", "0.2", "--s", "0.3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.doc()["error"]["type"], "convergence");
  EXPECT_FALSE(r.doc()["error"]["history"].empty());
}

TEST(Cli, Residue) {
  const auto r = run_cli({"residue", "--config", config("zetazeta.json"), "--ell", "0", "--s", "0.75", "--s", "0.75"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json d = r.doc();
  EXPECT_NEAR(d["numeric"][0].get<double>(), 1.0, 1e-3);
  EXPECT_NEAR(d["numeric"][1].get<double>(), 1.0, 1e-3);
  EXPECT_EQ(d["seed"], 0);
}

TEST(Cli, VerifyIsDeterministic) {
  const std::vector<std::string> args = {"verify", "--config", config("zetazeta.json"), "--alpha", "2", "--ell", "0",
                                         "--samples", "2", "--out", "csv"};
  const auto a = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run_cli(args).out);
  std::istringstream in(a.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "sample,ell,s1_re,s1_im,s2_re,s2_im,numeric_re,numeric_im,analytic_re,analytic_im,rel_error,seed");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string x;
    while (std::getline(ss, x, ',')) f.push_back(x);
    ASSERT_EQ(f.size(), 12U);
    EXPECT_NEAR(std::stod(f[8]), 1.0, 1e-9);
    EXPECT_NEAR(std::stod(f[9]), 1.0, 1e-9);
    EXPECT_LT(std::stod(f[10]), 1e-3);
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST(Cli, VerifyNotInSpectrum) {
  const auto r = run_cli({"verify", "--config", config("zetazeta.json"), "--alpha", "0.7", "--ell", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.doc()["error"]["type"], "precondition");
}

TEST(Cli, Expand) {
  auto r = run_cli({"expand", "--form", "P", "--order", "1", "--lambdas", "1/2,1/2", "--out", "text"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "P0 = 1\nP1 = 1/2*a1^2 - a1*a2 + 1/2*a2^2 - 1/8\n");
  r = run_cli({"expand", "--form", "W", "--order", "2", "--config", config("zetazeta.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json d = r.doc();
  EXPECT_EQ(d["polynomials"][2]["degree"], 4);
  EXPECT_EQ(d["polynomials"][0]["text"], "1");
  r = run_cli({"expand", "--form", "R", "--order", "1", "--out", "text"});
  EXPECT_EQ(r.out, "R1 = -X1*A\n");
  r = run_cli({"expand", "--form", "V", "--order", "2"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, MalformedConfigs) {
  auto r = run_cli({"invariants", "--config", write_temp("bad1.json", "{\n  \"functions\": [\n    {\"preset\": \"zeta\"},\n  ]\n}")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.doc()["error"]["message"].get<std::string>().find("line 4"), std::string::npos) << r.out;

  r = run_cli({"invariants", "--config", write_temp("bad2.json", R"({"functions": [{"Q": 1, "omega": [1, 0], "factors": [{"lambda": 0.5}], "coefficients": {"kind": "zeta"}}]})")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("functions[0].factors[0].mu"), std::string::npos) << r.out;

  r = run_cli({"spectrum", "--config", write_temp("bad3.json", R"({"functions": [{"preset": "zeta"}, {"preset": "zeta"}], "kappa": ["1/2", "1/3"]})"), "--alpha-max", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("kappa"), std::string::npos);

  r = run_cli({"invariants", "--config", write_temp("bad4.json", R"({"functions": [{"preset": "zeta"}], "bogus": 1})")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("bogus"), std::string::npos);

  r = run_cli({"invariants", "--config", "/nonexistent/file.json"});
  EXPECT_EQ(r.code, 1);
  r = run_cli({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.doc()["error"]["type"], "usage");
}

TEST(Cli, ComplexParsing) {
  EXPECT_EQ(cli::parse_complex("1.5"), cplx(1.5, 0));
  EXPECT_EQ(cli::parse_complex("-2i"), cplx(0, -2));
  EXPECT_EQ(cli::parse_complex("0.5+0.3i"), cplx(0.5, 0.3));
  EXPECT_EQ(cli::parse_complex("1e-3-2e-1i"), cplx(1e-3, -0.2));
  EXPECT_EQ(cli::parse_complex("i"), cplx(0, 1));
  EXPECT_THROW(cli::parse_complex("abc"), precondition_error);
}
