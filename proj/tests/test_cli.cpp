#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dhgp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("h1.dhg", "3 4\n1 1 2 0 1 2\n2 1 1 1 2\n1 1 1 3 0\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(DHGP_CLI_PATH) + " " + args + " >" + path("stdout.txt") + " 2>" +
                            path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(Cli, PartitionWritesFilesAndMetrics) {
  ASSERT_EQ(run("partition --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4 --out " + path("p.txt") +
                " --metrics " + path("m.json")),
            0);
  const auto metrics = nlohmann::json::parse(read("m.json"));
  EXPECT_EQ(metrics["num_partitions"], 2);
  EXPECT_EQ(metrics["valid"], true);
  EXPECT_TRUE(metrics.contains("levels"));
  EXPECT_TRUE(metrics.contains("connectivity_trace"));
  EXPECT_TRUE(metrics["phase_ms"].empty());
  std::istringstream lines(read("p.txt"));
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  EXPECT_EQ(count, 4);
  EXPECT_NE(read("stdout.txt").find("valid yes"), std::string::npos);
}

TEST_F(Cli, TimingsFillPhases) {
  ASSERT_EQ(run("partition --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4 --timings --metrics " +
                path("m.json")),
            0);
  const auto metrics = nlohmann::json::parse(read("m.json"));
  EXPECT_TRUE(metrics["phase_ms"].contains("total"));
}

TEST_F(Cli, ErrorExitCodes) {
  EXPECT_EQ(run("partition --input " + path("missing.dhg") + " --max-size 2 --max-inbound 4"), 1);
  write("bad.dhg", "1 4\n1 1 1 0 9\n");
  EXPECT_EQ(run("partition --input " + path("bad.dhg") + " --max-size 2 --max-inbound 4"), 1);
  EXPECT_NE(read("stderr.txt").find("line 2"), std::string::npos);
  EXPECT_EQ(run("partition --input " + path("h1.dhg") + " --max-size 2 --max-inbound 0"), 2);
  EXPECT_EQ(run("partition --input " + path("h1.dhg") + " --max-size 0 --max-inbound 4"), 2);
  EXPECT_EQ(run("partition --max-size 2"), 1);
  EXPECT_EQ(run("bogus"), 1);
}

TEST_F(Cli, EvalReportsViolations) {
  write("ok.txt", "0\n0\n1\n1\n");
  EXPECT_EQ(run("eval --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4 --parts " + path("ok.txt")), 0);
  EXPECT_NE(read("stdout.txt").find("connectivity 4"), std::string::npos);
  write("big.txt", "0\n0\n0\n1\n");
  EXPECT_EQ(run("eval --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4 --parts " + path("big.txt")), 3);
  EXPECT_NE(read("stdout.txt").find("violation part 0 size 3 > 2"), std::string::npos);
  write("short.txt", "0\n0\n1\n");
  EXPECT_EQ(run("eval --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4 --parts " + path("short.txt")),
            1);
  write("gap.txt", "0\n0\n2\n2\n");
  EXPECT_EQ(run("eval --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4 --parts " + path("gap.txt")), 3);
}

TEST_F(Cli, GenIsReproducible) {
  ASSERT_EQ(run("gen --nodes 50 --edges 60 --max-pins 4 --seed 9 --out " + path("a.dhg")), 0);
  ASSERT_EQ(run("gen --nodes 50 --edges 60 --max-pins 4 --seed 9 --out " + path("b.dhg")), 0);
  ASSERT_EQ(run("gen --nodes 50 --edges 60 --max-pins 4 --seed 10 --out " + path("c.dhg")), 0);
  EXPECT_EQ(read("a.dhg"), read("b.dhg"));
  EXPECT_NE(read("a.dhg"), read("c.dhg"));
  EXPECT_EQ(read("a.dhg").substr(0, 6), "60 50\n");
}

TEST_F(Cli, BaselinesAndOracle) {
  EXPECT_EQ(run("baseline --method onepass --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4 --out " +
                path("p.txt")),
            0);
  EXPECT_EQ(read("p.txt"), "0\n0\n1\n1\n");
  EXPECT_EQ(run("baseline --method overlap --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4"), 0);
  EXPECT_EQ(run("baseline --method nope --input " + path("h1.dhg") + " --max-size 2 --max-inbound 4"), 1);
  EXPECT_EQ(run("oracle --input " + path("h1.dhg") + " --max-size 2 --max-inbound 2 --out " + path("o.txt")), 0);
  EXPECT_EQ(read("o.txt"), "0\n1\n1\n0\n");
  EXPECT_NE(read("stdout.txt").find("connectivity 1"), std::string::npos);
  ASSERT_EQ(run("gen --nodes 12 --edges 10 --max-pins 3 --out " + path("twelve.dhg")), 0);
  EXPECT_EQ(run("oracle --input " + path("twelve.dhg") + " --max-size 4 --max-inbound 100"), 2);
}

TEST_F(Cli, ConvertHgr) {
  write("in.hgr", "2 4 1\n3 1 2 3\n1 4 1\n");
  ASSERT_EQ(run("convert --input " + path("in.hgr") + " --out " + path("out.dhg")), 0);
  EXPECT_EQ(read("out.dhg"), "2 4\n3 1 2 0 1 2\n1 1 1 3 0\n");
}

}  // namespace
