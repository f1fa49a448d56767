#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dioph/polynomial.hpp"
#include "dioph/serialization.hpp"
#include "run.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dioph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    args.insert(args.begin(), "dioph");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return dioph::cli::main_entry(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, ConstructEstimateVerify) {
  write("plan.json", R"({"kind":"lambda1_cf","lambdas":["3"],"depth":4})");
  ASSERT_EQ(call({"construct", "--plan", path("plan.json"), "--out", path("c")}), 0) << err_.str();
  for (const char* f : {"construction.json", "source_1.json", "trace.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "c" / f)) << f;
  }
  json manifest = json::parse(read("c/manifest.json"));
  EXPECT_EQ(manifest["tool"], "dioph");
  EXPECT_EQ(manifest["version"], dioph::cli::kVersion);

  ASSERT_EQ(call({"--out", path("e"), "estimate", "--sources", path("c/source_1.json"), "--exponent", "lambda1",
                  "--depth", "6"}),
            0)
      << err_.str();
  ASSERT_EQ(call({"verify", path("c"), path("e")}), 0) << err_.str();
}

TEST_F(CliTest, TamperedTraceFailsVerification) {
  write("plan.json", R"({"kind":"lambda1_cf","lambdas":["2"],"depth":3})");
  ASSERT_EQ(call({"construct", "--plan", path("plan.json"), "--out", path("c")}), 0) << err_.str();
  json c = json::parse(read("c/construction.json"));
  c["trace"][0]["h"] = "999";
  write("c/construction.json", c.dump());
  EXPECT_EQ(call({"verify", path("c")}), dioph::cli::kVerificationFailure);
}

TEST_F(CliTest, VarietyScanAndReplay) {
  dioph::MultiPolynomial p = dioph::MultiPolynomial::from_terms(2, {{{2, 0}, 1}, {{0, 2}, 1}, {{0, 0}, -1}});
  write("circle.json", dioph::polynomial_to_json(p));
  ASSERT_EQ(call({"variety", "--poly", path("circle.json"), "--mu", "1.5", "--xmax", "50", "--box", "-1", "1", "-1",
                  "1", "--out", path("v")}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "v" / "scan.csv"));
  EXPECT_EQ(call({"verify", path("v")}), 0) << err_.str();
}

TEST_F(CliTest, EstimateChiOnTwoSources) {
  write("plan.json", R"({"kind":"vector","lambdas":["3","4"],"w":"2","depth":3})");
  ASSERT_EQ(call({"construct", "--plan", path("plan.json"), "--out", path("c")}), 0) << err_.str();
  ASSERT_EQ(call({"estimate", "--sources", path("c/source_1.json"), path("c/source_2.json"), "--exponent", "chi",
                  "--xmax", "5000", "--out", path("e")}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "e" / "estimate.json"));
  EXPECT_EQ(call({"verify", path("e")}), 0) << err_.str();
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(call({"estimate"}), dioph::cli::kInvalidConfig);
  EXPECT_EQ(call({"bogus"}), dioph::cli::kInvalidConfig);
  write("bad.json", R"({"kind":"lambda1_cf","lambdas":["1/2"]})");
  EXPECT_EQ(call({"construct", "--plan", path("bad.json"), "--out", path("c")}), dioph::cli::kInvalidConfig);
  EXPECT_EQ(call({"--precision", "8", "construct", "--plan", path("bad.json")}), dioph::cli::kInvalidConfig);
  dioph::MultiPolynomial p = dioph::MultiPolynomial::from_terms(2, {{{3, 0}, 1}, {{0, 3}, 1}, {{0, 0}, -1}});
  write("f.json", dioph::polynomial_to_json(p));
  EXPECT_EQ(call({"variety", "--poly", path("f.json"), "--mu", "2", "--xmax", "100000000", "--box", "-5", "5", "-5",
                  "5", "--out", path("v")}),
            dioph::cli::kCostGuard);
  EXPECT_EQ(call({"--version"}), 0);
}
