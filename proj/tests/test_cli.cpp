#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kCli = EXTAUCTION_CLI_PATH;
const fs::path kFixtures = EXTAUCTION_FIXTURE_DIR;

struct CliResult
{
  int status;
  std::string out;
};

fs::path scratch_dir(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("extauction_cli_" + std::to_string(getpid()) + "_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run(const std::string &args)
{
  static int calls = 0;
  const fs::path out = fs::temp_directory_path() /
                       ("extauction_cli_" + std::to_string(getpid()) + "_" + std::to_string(calls++) + ".txt");
  const std::string command = kCli.string() + " " + args + " > " + out.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  CliResult result{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
  fs::remove(out);
  return result;
}

std::string fixture(const std::string &name) { return (kFixtures / name).string(); }

}  // namespace

TEST(Cli, HelpAndUsageErrors)
{
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("benchmark --instance " + fixture("additive_valid.json") + " --k 7").status, 2);
}

TEST(Cli, CheckReportsViolations)
{
  const CliResult ok = run("check --instance " + fixture("additive_valid.json"));
  EXPECT_EQ(ok.status, 0) << ok.out;
  const CliResult bad = run("check --instance " + fixture("table_not_monotone.json"));
  EXPECT_EQ(bad.status, 1) << bad.out;
  EXPECT_NE(bad.out.find("agent 0"), std::string::npos) << bad.out;
  EXPECT_EQ(run("check --instance " + fixture("nope.json")).status, 2);
}

TEST(Cli, BenchmarkMethodsAgree)
{
  const CliResult brute = run("benchmark --instance " + fixture("graph_concave.json") + " --method brute");
  const CliResult sweep = run("benchmark --instance " + fixture("graph_concave.json") + " --method sweep");
  ASSERT_EQ(brute.status, 0) << brute.out;
  ASSERT_EQ(sweep.status, 0) << sweep.out;
  const auto value_of = [](const std::string &s) {
    const auto pos = s.find("\"value\"");
    return pos == std::string::npos ? std::string() : s.substr(pos, s.find_first_of(",\n}", pos) - pos);
  };
  EXPECT_FALSE(value_of(brute.out).empty());
  EXPECT_EQ(value_of(brute.out), value_of(sweep.out));
}

TEST(Cli, RunIsDeterministic)
{
  const std::string args = "run --mechanism main --instance " + fixture("graph_concave.json") + " --seed 5";
  const CliResult a = run(args);
  const CliResult b = run(args);
  ASSERT_EQ(a.status, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("run --mechanism mechanism2 --instance " + fixture("additive_valid.json") + " --seed 5").status, 0);
  EXPECT_EQ(run("run --mechanism mechanism2 --instance " + fixture("graph_concave.json") + " --seed 5").status, 2);
}

TEST(Cli, VerifyExitCodes)
{
  const CliResult main = run("verify --mechanism main --instance " + fixture("graph_concave.json") +
                       " --seed 3 --misreports 100 --realizations 8");
  EXPECT_EQ(main.status, 0) << main.out;
  const CliResult broken = run("verify --mechanism broken --instance " + fixture("graph_concave.json") +
                         " --seed 3 --misreports 100 --realizations 8");
  EXPECT_EQ(broken.status, 1) << broken.out;
}

TEST(Cli, ExperimentOutputIsByteIdentical)
{
  const fs::path first = scratch_dir("exp1");
  const fs::path second = scratch_dir("exp2");
  const CliResult a = run("experiment --config " + fixture("experiment_small.json") + " --out " + first.string());
  const CliResult b = run("experiment --config " + fixture("experiment_small.json") + " --out " + second.string());
  ASSERT_EQ(a.status, 0) << a.out;
  ASSERT_EQ(b.status, 0) << b.out;
  std::size_t files = 0;
  for (const auto &entry : fs::directory_iterator(first))
  {
    ++files;
    const fs::path other = second / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path().filename();
  }
  EXPECT_GE(files, 12u);
  fs::remove_all(first);
  fs::remove_all(second);
}

TEST(Cli, Demos)
{
  const CliResult f2 = run("demo f2 --M 1 --M 10 --format csv");
  ASSERT_EQ(f2.status, 0) << f2.out;
  EXPECT_EQ(f2.out.rfind("M,f2,f3", 0), 0u) << f2.out;
  EXPECT_EQ(run("demo losing-value").status, 0);
}
