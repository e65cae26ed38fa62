// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.

#include <sys/wait.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dhgp/baselines.hpp"
#include "dhgp/driver.hpp"
#include "dhgp/io.hpp"
#include "fixtures.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dhgp;
using Clock = std::chrono::steady_clock;

// Tolerances.
constexpr double kGainTolerance = 1e-9;
constexpr double kValidityBudgetSeconds = 120.0;
constexpr double kOnePassRatio = 0.9;
constexpr double kOverlapRatio = 1.0;
constexpr double kNotWorseThanOnePassShare = 0.8;
constexpr double kDoublingBudget = 2.5;

constexpr std::size_t kValidityInstances = 200;
constexpr std::size_t kOracleInstances = 100;
constexpr std::size_t kBatchInstances = 20;
constexpr std::size_t kQualityInstances = 50;
constexpr std::size_t kTinyInstances = 30;
constexpr std::size_t kDeterminismInstances = 10;
constexpr int kDeterminismRepeats = 3;
constexpr int kScalingRuns = 5;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t failures = 0;
  std::string firstFailure;

  void fail(const std::string& what) {
    if (failures++ == 0) firstFailure = what;
    pass = false;
  }
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

std::string exact(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, r.ptr};
}

class Workspace {
 public:
  explicit Workspace(fs::path root) : root_(std::move(root)) {
    fs::remove_all(root_);
    fs::create_directories(root_);
  }

  std::string path(const std::string& name) const { return (root_ / name).string(); }

  int cli(const std::string& args) const {
    const std::string cmd = std::string(DHGP_CLI_PATH) + " " + args + " >/dev/null 2>>" + path("stderr.log");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  fs::path root_;
};

std::string genArgs(const GeneratorOptions& o, const std::string& out) {
  return "gen --nodes " + std::to_string(o.nodes) + " --edges " + std::to_string(o.edges) + " --max-pins " +
         std::to_string(o.maxPins) + " --seed " + std::to_string(o.seed) + " --locality " + exact(o.locality) +
         " --community " + std::to_string(o.communitySize) + " --out " + out;
}

std::string limitArgs(const Constraints& c) {
  return " --max-size " + std::to_string(c.maxSize) + " --max-inbound " + std::to_string(c.maxInbound);
}

// Materializes an instance through the CLI generator and reads it back.
struct CliInstance {
  std::string file;
  Hypergraph graph;
  Constraints constraints;
};

CliInstance generate(const Workspace& ws, const std::string& name, const testing::InstanceSpec& spec) {
  const std::string file = ws.path(name + ".dhg");
  if (ws.cli(genArgs(spec.opts, file)) != 0) throw std::runtime_error("gen failed for " + name);
  CliInstance inst{file, readDhgFile(file), {}};
  inst.constraints = testing::constraintsFor(inst.graph, spec);
  return inst;
}

struct CliRun {
  int exit = -1;
  Partitioning partitioning;
  nlohmann::json metrics;
};

CliRun partitionViaCli(const Workspace& ws, const CliInstance& inst, const std::string& tag) {
  const std::string parts = ws.path(tag + ".part"), metrics = ws.path(tag + ".json");
  CliRun run;
  run.exit = ws.cli("partition --input " + inst.file + limitArgs(inst.constraints) + " --out " + parts +
                    " --metrics " + metrics);
  if (run.exit == 0) {
    run.partitioning = readPartitionFile(parts);
    std::ifstream in(metrics);
    run.metrics = nlohmann::json::parse(in);
  }
  return run;
}

bool traceMonotone(const nlohmann::json& metrics) {
  for (const auto& level : metrics.at("connectivity_trace")) {
    const auto& trace = level.at("trace");
    for (std::size_t i = 1; i < trace.size(); ++i) {
      if (trace[i].get<double>() > trace[i - 1].get<double>()) return false;
    }
  }
  return true;
}

bool traceMonotone(const RunStats& stats) {
  for (const auto& trace : stats.connectivityTrace) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
      if (trace[i] > trace[i - 1]) return false;
    }
  }
  return true;
}

struct Report {
  Outcome validity, events, gains, monotone, matching, batch, quality, optimality, determinism, scaling;
};

void runValidity(const Workspace& ws, Report& r) {
  double seconds = 0;
  for (std::size_t i = 0; i < kValidityInstances; ++i) {
    const auto inst = generate(ws, "valid" + std::to_string(i), testing::randomSpec(1000 + i, 50, 2000, 4, 64));
    const auto start = Clock::now();
    const auto run = partitionViaCli(ws, inst, "valid" + std::to_string(i));
    seconds += std::chrono::duration<double>(Clock::now() - start).count();
    if (run.exit != 0) {
      r.validity.fail("instance " + std::to_string(i) + " exited " + std::to_string(run.exit));
      continue;
    }
    if (!isValid(inst.graph, run.partitioning, inst.constraints)) {
      r.validity.fail("instance " + std::to_string(i) + " invalid");
    }
    if (!traceMonotone(run.metrics)) r.monotone.fail("cli instance " + std::to_string(i));
  }
  if (seconds >= kValidityBudgetSeconds) r.validity.fail("partition time " + fmt(seconds) + " s");
  r.validity.detail = std::to_string(kValidityInstances) + " instances, partition time " + fmt(seconds, 3) + " s";
}

// Event pipeline, gains, monotonicity and matching structure through the
// driver observers on the same instance suite.
void runOracles(Report& r) {
  std::size_t rounds = 0, moves = 0, levels = 0;
  for (std::size_t i = 0; i < kOracleInstances; ++i) {
    const auto inst = testing::randomInstance(2000 + i, 50, 1500, 4, 64);
    const std::string tag = "instance " + std::to_string(i);
    Config cfg;
    cfg.constraints = inst.constraints;
    cfg.onCoarsenLevel = [&](std::size_t level, const Hypergraph& g, const NeighborSets&, const PairingForest& f) {
      ++levels;
      const auto problem = checkPairingForest(g, f, inst.constraints);
      if (!problem.empty()) r.matching.fail(tag + " level " + std::to_string(level) + ": " + problem);
    };
    cfg.onRefineRound = [&](std::size_t level, const Hypergraph& g, const Partitioning& before,
                            const RefineRound& round) {
      ++rounds;
      moves += round.moves.size();
      const std::string where = tag + " level " + std::to_string(level);
      const auto steps = simulateSequence(g, before, round.moves, inst.constraints);
      const auto& active = round.selection.activeViolations;
      if (active.size() != steps.size()) {
        r.events.fail(where + ": prefix count");
        return;
      }
      for (std::size_t j = 0; j < steps.size(); ++j) {
        if (active[j] != steps[j].violations) {
          r.events.fail(where + " prefix " + std::to_string(j));
          break;
        }
      }
      for (std::size_t j = 0; j < round.moves.size(); ++j) {
        const double delta = steps[j].connectivity - steps[j + 1].connectivity;
        if (std::abs(round.moves[j].gainSeq - delta) > kGainTolerance) {
          r.gains.fail(where + " move " + std::to_string(j));
          break;
        }
      }
      const std::size_t k = round.selection.applyCount;
      double applied = 0;
      for (std::size_t j = 0; j < k; ++j) applied += round.moves[j].gainSeq;
      const auto after = applyMoves(before, round.moves, k);
      const double drop = connectivity(g, before) - connectivity(g, after);
      if (std::abs(applied - drop) > kGainTolerance) r.gains.fail(where + " applied prefix");
    };
    const auto result = partition(inst.graph, cfg);
    if (!traceMonotone(result.stats)) r.monotone.fail(tag);
  }
  r.events.detail = std::to_string(rounds) + " rounds, " + std::to_string(moves) + " moves";
  r.gains.detail = r.events.detail;
  r.matching.detail = std::to_string(levels) + " matched levels";
}

void runBatchInvariance(Report& r) {
  std::size_t levels = 0;
  for (std::size_t i = 0; i < kBatchInstances; ++i) {
    const auto inst = testing::randomInstance(3000 + i, 100, 2000, 4, 64);
    Config cfg;
    cfg.constraints = inst.constraints;
    cfg.onCoarsenLevel = [&](std::size_t level, const Hypergraph& g, const NeighborSets& nbrs,
                             const PairingForest& matched) {
      ++levels;
      const auto problem = checkPairingForest(g, matched, inst.constraints);
      if (!problem.empty()) r.matching.fail("batch instance " + std::to_string(i) + ": " + problem);
      const auto reference = selectCandidates(g, nbrs, inst.constraints, 1);
      for (std::size_t b : {7u, 32u}) {
        const auto other = selectCandidates(g, nbrs, inst.constraints, b);
        if (other.pair != reference.pair || other.score != reference.score) {
          r.batch.fail("instance " + std::to_string(i) + " level " + std::to_string(level) + " batch " +
                       std::to_string(b));
        }
      }
    };
    partition(inst.graph, cfg);
  }
  r.batch.detail = std::to_string(levels) + " levels compared";
}

void runQuality(const Workspace& ws, Report& r) {
  double ours = 0, onePassSum = 0, overlapSum = 0;
  for (std::size_t i = 0; i < kQualityInstances; ++i) {
    const auto inst = generate(ws, "quality" + std::to_string(i), testing::randomSpec(4000 + i, 200, 2000, 4, 64));
    const auto run = partitionViaCli(ws, inst, "quality" + std::to_string(i));
    if (run.exit != 0) {
      r.quality.fail("instance " + std::to_string(i) + " exited " + std::to_string(run.exit));
      continue;
    }
    ours += connectivity(inst.graph, run.partitioning);
    onePassSum += connectivity(inst.graph, onePass(inst.graph, inst.constraints));
    overlapSum += connectivity(inst.graph, overlapGreedy(inst.graph, inst.constraints));
  }
  const double n = static_cast<double>(kQualityInstances);
  const double vsOnePass = onePassSum > 0 ? ours / onePassSum : 0;
  const double vsOverlap = overlapSum > 0 ? ours / overlapSum : 0;
  if (ours > kOnePassRatio * onePassSum) r.quality.fail("ratio vs one-pass " + fmt(vsOnePass));
  if (ours > kOverlapRatio * overlapSum) r.quality.fail("ratio vs overlap " + fmt(vsOverlap));
  r.quality.detail = "mean " + fmt(ours / n) + ", one-pass " + fmt(onePassSum / n) + ", overlap " +
                     fmt(overlapSum / n) + ", ratio vs one-pass " + fmt(vsOnePass) + ", ratio vs overlap " +
                     fmt(vsOverlap);
}

void runOptimality(const Workspace& ws, Report& r) {
  std::size_t notWorse = 0;
  for (std::size_t i = 0; i < kTinyInstances; ++i) {
    const auto inst = generate(ws, "tiny" + std::to_string(i), testing::randomSpec(5000 + i, 3, 8, 1, 4));
    const auto run = partitionViaCli(ws, inst, "tiny" + std::to_string(i));
    if (run.exit != 0) {
      r.optimality.fail("instance " + std::to_string(i) + " exited " + std::to_string(run.exit));
      continue;
    }
    const double ours = connectivity(inst.graph, run.partitioning);
    const double best = bruteForceOptimal(inst.graph, inst.constraints).connectivity;
    if (ours < best) r.optimality.fail("instance " + std::to_string(i) + " below the optimum");
    if (ours <= connectivity(inst.graph, onePass(inst.graph, inst.constraints))) ++notWorse;
  }
  const double share = static_cast<double>(notWorse) / static_cast<double>(kTinyInstances);
  if (share < kNotWorseThanOnePassShare) r.optimality.fail("share not worse than one-pass " + fmt(share));
  r.optimality.detail = "not worse than one-pass on " + std::to_string(notWorse) + "/" +
                        std::to_string(kTinyInstances);
}

void runDeterminism(const Workspace& ws, Report& r) {
  for (std::size_t i = 0; i < kDeterminismInstances; ++i) {
    const auto inst = generate(ws, "det" + std::to_string(i), testing::randomSpec(6000 + i, 200, 2000, 4, 64));
    std::string parts, metrics;
    for (int rep = 0; rep < kDeterminismRepeats; ++rep) {
      const std::string tag = "det" + std::to_string(i) + "_" + std::to_string(rep);
      if (partitionViaCli(ws, inst, tag).exit != 0) {
        r.determinism.fail(tag + " failed");
        break;
      }
      const auto p = ws.read(tag + ".part"), m = ws.read(tag + ".json");
      if (rep == 0) {
        parts = p;
        metrics = m;
      } else if (p != parts || m != metrics) {
        r.determinism.fail("instance " + std::to_string(i) + " run " + std::to_string(rep) + " differs");
      }
    }
  }
  r.determinism.detail = std::to_string(kDeterminismInstances) + " instances x " +
                         std::to_string(kDeterminismRepeats) + " runs";
}

void runScaling(const Workspace& ws, Report& r) {
  std::vector<double> medians;
  std::vector<std::size_t> pins;
  for (std::size_t target : {10000u, 20000u, 40000u}) {
    GeneratorOptions opts;
    opts.maxPins = 4;
    // About 2.77 distinct pins per edge at four pins max.
    opts.edges = target * 100 / 277;
    opts.nodes = opts.edges;
    opts.seed = 7;
    const std::string name = "scale" + std::to_string(target);
    const std::string file = ws.path(name + ".dhg");
    if (ws.cli(genArgs(opts, file)) != 0) {
      r.scaling.fail("gen failed");
      return;
    }
    const auto g = readDhgFile(file);
    pins.push_back(g.numPins());
    const Constraints c{32, std::max<std::uint64_t>(testing::maxInDegree(g), 64)};
    std::vector<double> times;
    for (int run = 0; run < kScalingRuns; ++run) {
      const auto start = Clock::now();
      if (ws.cli("partition --input " + file + limitArgs(c) + " --out " + ws.path(name + ".part")) != 0) {
        r.scaling.fail(name + " partition failed");
        return;
      }
      times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    }
    std::sort(times.begin(), times.end());
    medians.push_back(times[times.size() / 2]);
  }
  std::string detail;
  for (std::size_t i = 0; i < medians.size(); ++i) {
    detail += (i ? ", " : "") + std::to_string(pins[i]) + " pins " + fmt(medians[i], 3) + " ms";
    if (i > 0) {
      const double ratio = medians[i] / medians[i - 1];
      detail += " (x" + fmt(ratio, 3) + ")";
      if (ratio > kDoublingBudget) r.scaling.fail("doubling ratio " + fmt(ratio, 3));
    }
  }
  r.scaling.detail = detail;
}

void print(int id, const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << " " << name;
  if (!o.detail.empty()) std::cout << ": " << o.detail;
  if (!o.pass) std::cout << " [" << o.failures << " failures, first: " << o.firstFailure << "]";
  std::cout << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gate"};
  std::string workdir = (fs::temp_directory_path() / "dhgp_acceptance").string();
  app.add_option("--workdir", workdir, "scratch directory");
  CLI11_PARSE(app, argc, argv);

  try {
    const Workspace ws(workdir);
    Report r;
    runValidity(ws, r);
    runOracles(r);
    runBatchInvariance(r);
    runQuality(ws, r);
    runOptimality(ws, r);
    runDeterminism(ws, r);
    runScaling(ws, r);
    r.monotone.detail = "cli and in-process traces";

    print(1, "validity", r.validity);
    print(2, "event pipeline matches sequential simulation", r.events);
    print(3, "in-sequence gains exact", r.gains);
    print(4, "connectivity trace non-increasing", r.monotone);
    print(5, "matching structure", r.matching);
    print(6, "batch-size invariance", r.batch);
    print(7, "quality vs baselines", r.quality);
    print(8, "optimality sanity", r.optimality);
    print(9, "determinism", r.determinism);
    print(10, "scaling per pin doubling", r.scaling);

    const bool all = r.validity.pass && r.events.pass && r.gains.pass && r.monotone.pass && r.matching.pass &&
                     r.batch.pass && r.quality.pass && r.optimality.pass && r.determinism.pass && r.scaling.pass;
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
}
