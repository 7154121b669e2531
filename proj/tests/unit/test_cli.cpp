#include <sys/wait.h>

#include <cstdlib>

#include <gtest/gtest.h>

#include "cropyield/synth.hpp"
#include "fixtures.hpp"

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome cli(const std::string& args, const std::filesystem::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + CROPYIELD_CLI_PATH + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, fixtures::read_file(out), fixtures::read_file(err)};
}

std::filesystem::path write_spec(const std::filesystem::path& dir, std::size_t n,
                                 std::vector<double> weights = {0.25, 0.25, 0.25, 0.25}) {
  auto spec = fixtures::four_class_spec(n, 3);
  spec.weights = std::move(weights);
  auto path = dir / "spec.json";
  fixtures::write_file(path, cropyield::to_json(spec).dump(2));
  return path;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, SynthThenInspect) {
  const auto dir = fixtures::temp_dir("cli_synth");
  const auto spec = write_spec(dir, 100);
  const auto csv = dir / "data.csv";
  auto r = cli("synth --spec " + spec.string() + " --output " + csv.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(fixtures::read_file(csv)), 101u);
  EXPECT_TRUE(std::filesystem::exists(dir / "data.truth.json"));

  r = cli("inspect --input " + csv.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("validation").at("violations").empty());
}

TEST(Cli, InvalidSpecIsInputError) {
  const auto dir = fixtures::temp_dir("cli_bad_spec");
  const auto spec = write_spec(dir, 10, {0.5, 0.6, 0.0, 0.0});
  const auto r = cli("synth --spec " + spec.string() + " --output " + (dir / "x.csv").string(), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "InvalidSpec");
}

TEST(Cli, ExitCodes) {
  const auto dir = fixtures::temp_dir("cli_exit");
  // 1: missing file
  auto r = cli("inspect --input " + (dir / "missing.csv").string(), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("exit_code"), 1);

  // 1: unparsable number, with location
  fixtures::write_file(dir / "bad.csv", std::string(fixtures::kHeader) +
                                            "Rice,2000,Kharif,Assam,10,20,1200,50,abc,2\n");
  r = cli("inspect --input " + (dir / "bad.csv").string(), dir);
  EXPECT_EQ(r.code, 1);
  const auto rec = nlohmann::json::parse(r.err);
  EXPECT_EQ(rec.at("row"), 1);
  EXPECT_EQ(rec.at("token"), "abc");

  // 2: hard validation failure
  fixtures::write_file(dir / "neg.csv", std::string(fixtures::kHeader) +
                                            "Rice,2000,Kharif,Assam,-10,20,1200,50,1,2\n");
  EXPECT_EQ(cli("inspect --input " + (dir / "neg.csv").string(), dir).code, 2);

  // 3: unknown config key, unknown flag
  fixtures::write_file(dir / "run.cfg", "colour = blue\n");
  EXPECT_EQ(cli("run --config " + (dir / "run.cfg").string(), dir).code, 3);
  EXPECT_EQ(cli("inspect --bogus", dir).code, 3);
  EXPECT_EQ(cli("", dir).code, 3);
}

TEST(Cli, RunFlagsOverrideConfig) {
  const auto dir = fixtures::temp_dir("cli_run");
  const auto csv = dir / "data.csv";
  ASSERT_EQ(cli("synth --spec " + write_spec(dir, 300).string() + " --output " + csv.string(), dir).code, 0);
  fixtures::write_file(dir / "run.cfg",
                       "input = " + csv.string() + "\nmodels = tree,knn,svm\nseed = 1\nclasses = 4\n");
  const auto out = dir / "out";
  const auto r = cli("run --config " + (dir / "run.cfg").string() + " --outdir " + out.string() +
                         " --models naive_bayes,tree --classes 2",
                     dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(fixtures::read_file(out / "comparison.csv")), 3u);
  const auto resolved = fixtures::read_file(out / "resolved_config.txt");
  EXPECT_NE(resolved.find("models = naive_bayes,tree\n"), std::string::npos);
  EXPECT_NE(resolved.find("classes = 2\n"), std::string::npos);
  EXPECT_NE(resolved.find("seed = 1\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out / "manifest.json"));
  // Timings are reported on stdout only.
  EXPECT_NE(r.out.find("fit_seconds"), std::string::npos);
}
