#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(RALG_BIN) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

nlohmann::json report(const Outcome& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, EnumerateTerms) {
  std::size_t total = 0;
  for (const char* sort : {"F", "V"}) {
    const Outcome r = run("enumerate-terms " + fixture("vspace_gf2.ralg") + " --sort " + sort + " --max-arity 1");
    ASSERT_EQ(r.code, 0);
    const auto j = report(r);
    EXPECT_EQ(j["command"], "enumerate-terms");
    EXPECT_EQ(j["outcome"], "ok");
    total += j["payload"]["count"].get<std::size_t>();
  }
  EXPECT_EQ(total, 2u);
  const Outcome r = run("enumerate-terms " + fixture("vspace_gf2.ralg") + " --sort 1 --max-arity 2 --max-size 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(report(r)["payload"]["count"], 3);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run("enumerate-terms /nonexistent.ralg --sort 0").code, 2);
  const auto bad = std::filesystem::temp_directory_path() / "ralg_cli_bad.ralg";
  std::ofstream(bad) << "phylum F = gf(4)\n";
  EXPECT_EQ(run("enumerate-terms " + bad.string() + " --sort 0").code, 2);
  std::ofstream(bad) << "phylum F = \n";
  EXPECT_EQ(run("enumerate-terms " + bad.string() + " --sort 0").code, 2);
  std::filesystem::remove(bad);
  EXPECT_EQ(run("search " + fixture("hindman_nat.ralg") + " --experiment missing").code, 2);
  EXPECT_EQ(run("verify " + fixture("katetov_identity.ralg") + " --experiment identity").code, 2);
  EXPECT_NE(run("frobnicate").code, 0);
}

TEST(Cli, WritesReportFile) {
  const auto out = std::filesystem::temp_directory_path() / "ralg_cli_report.json";
  std::filesystem::remove(out);
  const Outcome r = run("search " + fixture("hindman_nat.ralg") + " --experiment parity --out " + out.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["outcome"], "Found");
  EXPECT_EQ(j["schema_version"], 1);
  std::filesystem::remove(out);
}

TEST(Cli, SearchOutcomes) {
  EXPECT_EQ(run("search " + fixture("hindman_nat.ralg") + " --experiment thirds").code, 0);
  const Outcome ex = run("search " + fixture("egconstantbinary.ralg") + " --experiment homogeneous");
  EXPECT_EQ(ex.code, 3);
  EXPECT_EQ(report(ex)["outcome"], "Exhausted");
  EXPECT_EQ(run("search " + fixture("vspace_gf2.ralg") + " --experiment longproof --jobs 4").code, 0);
}

TEST(Cli, VerifyOutcomes) {
  EXPECT_EQ(run("verify " + fixture("beta.ralg") + " --experiment beta5").code, 0);
  EXPECT_EQ(run("verify " + fixture("katetov.ralg") + " --experiment cycles").code, 0);
  EXPECT_EQ(run("verify " + fixture("vspace_rationals.ralg") + " --experiment vspace_counterexample").code, 0);
  EXPECT_EQ(run("verify " + fixture("ksig_gf3.ralg") + " --experiment corteh").code, 0);
}

TEST(Cli, Classify) {
  const auto verdict = [](const std::string& file, const std::string& x) {
    const Outcome r = run("classify " + fixture(file) + " --experiment " + x);
    EXPECT_EQ(r.code, 0) << file << " " << x;
    return report(r)["payload"]["verdict"].get<std::string>();
  };
  EXPECT_EQ(verdict("vspace_gf2.ralg", "classify_alt"), "Ramsey");
  EXPECT_EQ(verdict("vspace_rationals.ralg", "classify_alt"), "NotRamsey");
  EXPECT_EQ(verdict("vspace_rationals.ralg", "classify_vectors"), "Ramsey");
  EXPECT_EQ(verdict("unary.ralg", "reach"), "Ramsey");
  EXPECT_EQ(verdict("unary.ralg", "swap"), "NotRamsey");
}

TEST(Cli, ReportsAreDeterministic) {
  for (const std::string& args : {"search " + fixture("vspace_gf2.ralg") + " --experiment longproof --jobs 3",
                                 "verify " + fixture("katetov.ralg") + " --experiment sweep --jobs 2 --seed 7"}) {
    auto a = report(run(args));
    auto b = report(run(args));
    a.erase("wall_ms");
    b.erase("wall_ms");
    EXPECT_EQ(a, b) << args;
  }
  auto a = report(run("search " + fixture("vspace_gf2.ralg") + " --experiment longproof --seed 1"));
  auto b = report(run("search " + fixture("vspace_gf2.ralg") + " --experiment longproof --seed 2"));
  EXPECT_NE(a["inputs_digest"], b["inputs_digest"]);
}
