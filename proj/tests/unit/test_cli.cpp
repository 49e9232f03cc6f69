#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "support.hpp"

namespace {

namespace fs = std::filesystem;

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + ESSAYLENS_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("features on a two-essay file") {
    const auto dir = testsupport::scratch("cli_features");
    nlohmann::json a = {{"id", "e1"}, {"essay_text", testsupport::filler(80, "alpha")}};
    nlohmann::json b = {{"id", "e2"}, {"essay_text", testsupport::filler(120, "beta")}};
    testsupport::write(dir / "in.jsonl", a.dump() + "\n" + b.dump() + "\n");
    const auto run_dir = dir / "run";
    REQUIRE(run("--run-dir " + run_dir.string() + " features --input " + (dir / "in.jsonl").string(), dir / "log") == 0);
    const auto csv = testsupport::slurp(run_dir / "features.csv");
    CHECK(lines(csv) == 3);
    CHECK(csv.rfind("id,n_tokens,n_words", 0) == 0);
    CHECK(csv.find("\ne1,") != std::string::npos);
    CHECK(fs::exists(run_dir / "manifests" / "features.json"));
  }

  TEST_CASE("unknown config keys are rejected") {
    const auto dir = testsupport::scratch("cli_config");
    testsupport::write(dir / "cfg.json", R"({"analysis": {"mediation": {"n_sim": 5}}})");
    const int rc = run("--config " + (dir / "cfg.json").string() + " --run-dir " + (dir / "run").string() +
                           " simulate --scale 0.01",
                       dir / "log");
    CHECK(rc == 2);
    CHECK(testsupport::slurp(dir / "log").find("n_sim") != std::string::npos);
  }

  TEST_CASE("missing input gives a nonzero exit") {
    const auto dir = testsupport::scratch("cli_missing");
    CHECK(run("--run-dir " + (dir / "run").string() + " ingest --input " + (dir / "nope.csv").string(), dir / "log") != 0);
    CHECK(run("--run-dir " + (dir / "run").string() + " analyze did", dir / "log") != 0);
    CHECK(run("--run-dir " + (dir / "run").string() + " frobnicate", dir / "log") != 0);
  }

  TEST_CASE("simulate then analyze interaction") {
    const auto dir = testsupport::scratch("cli_pipeline");
    const std::string rd = "--run-dir " + (dir / "run").string() + " --seed 5 ";
    REQUIRE(run(rd + "simulate --preset paper-shaped --scale 0.3 --no-text", dir / "log") == 0);
    REQUIRE(run(rd + "analyze interaction", dir / "log") == 0);
    const auto j = nlohmann::json::parse(testsupport::slurp(dir / "run" / "analysis" / "interaction.json"));
    CHECK(j.contains("beta2"));
    CHECK(j.contains("beta3"));
    CHECK(j.contains("total"));
    CHECK(j["alpha_source"].get<std::string>().find("truth.csv") != std::string::npos);
    const auto txt = testsupport::slurp(dir / "run" / "analysis" / "interaction.txt");
    CHECK(txt.find("***") != std::string::npos);
    CHECK(fs::exists(dir / "run" / "manifests" / "analyze-interaction.json"));
  }
}
