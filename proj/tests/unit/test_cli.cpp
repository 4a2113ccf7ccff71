#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "scorenet/cli.hpp"
#include "test_support.hpp"

namespace scorenet::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const CommandResult r = run_command(args, out, err);
  return {r.exit_code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"detect", "--help"}).code, 0);
}

TEST(Cli, UnknownFlagSuggestsNearestOption) {
  const std::string karate = testing::fixture("karate.edges").string();
  const Outcome r = run({"detect", "--input", karate, "--kk", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("did you mean --k"), std::string::npos) << r.err;
}

TEST(Cli, UnknownSubcommandSuggested) {
  const Outcome r = run({"detetc"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("detect"), std::string::npos) << r.err;
}

TEST(Cli, MissingFileIsUsageError) {
  const Outcome r = run({"detect", "--input", "/nonexistent/graph.edges", "--k", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/nonexistent/graph.edges"), std::string::npos);
}

TEST(Cli, InvalidArgumentMapsToUsageError) {
  const std::string karate = testing::fixture("karate.edges").string();
  EXPECT_EQ(run({"detect", "--input", karate, "--k", "2", "--method", "bogus"}).code, 2);
}

TEST(Cli, SuggestUsesEditDistance) {
  EXPECT_EQ(suggest("mixd", {"mixed", "detect", "hier"}), "mixed");
  EXPECT_EQ(suggest("zzzzzzzz", {"mixed", "detect"}), "");
}

TEST(Cli, DetectKarate) {
  const auto dir = testing::scratch_dir("cli_detect");
  const Outcome r = run({"detect", "--input", testing::fixture("karate.edges").string(), "--k", "2", "--truth",
                     testing::fixture("karate_factions.csv").string(), "--out-dir", dir.string(), "--report",
                     (dir / "report.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["command"], "detect");
  EXPECT_EQ(j["metrics"]["errors_vs_truth"], 0);
  EXPECT_EQ(j["config"]["k"], 2);
  EXPECT_TRUE(j.contains("wall_time_ms"));
  EXPECT_TRUE(std::filesystem::exists(dir / "labels.csv"));
  EXPECT_EQ(Json::parse(slurp(dir / "report.json"))["metrics"], j["metrics"]);
}

TEST(Cli, GenerateIsDeterministic) {
  const auto a = testing::scratch_dir("cli_gen_a");
  const auto b = testing::scratch_dir("cli_gen_b");
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(run({"generate", "dcmm", "--n", "150", "--k", "3", "--pure", "10", "--seed", "5", "--out-dir",
                   dir.string()})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(a / "graph.edges"), slurp(b / "graph.edges"));
  EXPECT_EQ(slurp(a / "memberships.csv"), slurp(b / "memberships.csv"));
}

TEST(Cli, MixedAndDynamicPipelines) {
  const auto dir = testing::scratch_dir("cli_mixed");
  ASSERT_EQ(run({"generate", "dcmm", "--n", "300", "--k", "3", "--pure", "20", "--theta-lo", "0.6", "--seed", "2",
                 "--out-dir", dir.string()})
                .code,
            0);
  const std::string edges = (dir / "graph.edges").string();
  const Outcome mixed = run({"mixed", "--input", edges, "--giant", "--k", "3", "--out-dir", dir.string()});
  ASSERT_EQ(mixed.code, 0) << mixed.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "memberships.csv"));
  const Outcome dyn = run({"dynamic", "--input", edges, "--input", edges, "--k", "3", "--out-dir", dir.string()});
  ASSERT_EQ(dyn.code, 0) << dyn.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "memberships_t2.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "trajectories.csv"));
}

TEST(Cli, InferenceCommands) {
  const std::string karate = testing::fixture("karate.edges").string();
  const auto dir = testing::scratch_dir("cli_inference");
  const Outcome global = run({"testglobal", "--input", karate});
  ASSERT_EQ(global.code, 0) << global.err;
  EXPECT_TRUE(global.json()["metrics"].contains("p_value"));
  const Outcome est = run({"estimate-k", "--input", karate, "--m-max", "3", "--bootstrap", "5"});
  ASSERT_EQ(est.code, 0) << est.err;
  EXPECT_EQ(run({"estimate-k", "--input", karate, "--m-max", "13"}).code, 2);
  const Outcome gof = run({"gof", "--input", karate, "--k", "2", "--bootstrap", "5"});
  ASSERT_EQ(gof.code, 0) << gof.err;
  const Outcome hier = run({"hier", "--input", karate, "--out-dir", dir.string()});
  ASSERT_EQ(hier.code, 0) << hier.err;
  EXPECT_EQ(slurp(dir / "tree.txt").rfind("C1 ", 0), 0u);
}

TEST(Cli, TopicsPipeline) {
  const auto dir = testing::scratch_dir("cli_topics");
  ASSERT_EQ(run({"generate", "plsi", "--n", "80", "--p", "40", "--k", "3", "--length", "500", "--out-dir",
                 dir.string()})
                .code,
            0);
  const Outcome r = run({"topics", "--counts", (dir / "corpus.txt").string(), "--vocab", (dir / "vocab.txt").string(),
                     "--k", "3", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "a_hat.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "w_hat.csv"));
}

TEST(Cli, BenchWritesLongCsvAndIsReproducible) {
  const auto dir = testing::scratch_dir("cli_bench");
  {
    std::ofstream cfg(dir / "sweep.json");
    cfg << R"({"scenario":"vertex_hunting","param":"beta","grid":[0.8],"methods":["sp"],"reps":2,"seed":3,)"
        << R"("fixed":{"n":200,"pure":20}})";
  }
  const std::vector<std::string> args{"bench", "--config", (dir / "sweep.json").string(), "--out-dir",
                                      dir.string()};
  ASSERT_EQ(run(args).code, 0);
  const std::string first = slurp(dir / "results.csv");
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(slurp(dir / "results.csv"), first);
  std::istringstream lines(first);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "param,method,rep,metric,value");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 6);

  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"scenario":"vertex_hunting","param":"beta","grid":[],"methods":["sp"],"reps":1})";
  }
  EXPECT_EQ(run({"bench", "--config", (dir / "bad.json").string(), "--out-dir", dir.string()}).code, 2);
}

}  // namespace
}  // namespace scorenet::cli
