// dhgp: partition directed hypergraphs under size and distinct-inbound limits.
//
// Exit codes: 0 success, 1 parse / IO / usage error, 2 infeasible input or
// oracle size guard, 3 evaluated partitioning violates constraints.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dhgp/baselines.hpp"
#include "dhgp/driver.hpp"
#include "dhgp/generator.hpp"
#include "dhgp/io.hpp"
#include "dhgp/metrics.hpp"

namespace {

using namespace dhgp;

constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;

struct CommonArgs {
  std::string input;
  std::uint64_t maxSize = 0;
  std::uint64_t maxInbound = 0;
  std::string out;
  std::string metrics;

  Constraints constraints() const { return {maxSize, maxInbound}; }
};

void addCommon(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--input", args.input, "input .dhg file")->required();
  cmd->add_option("--max-size", args.maxSize, "max fine nodes per partition")->required();
  cmd->add_option("--max-inbound", args.maxInbound, "max distinct inbound edges per partition")->required();
  cmd->add_option("--out", args.out, "partition output file");
  cmd->add_option("--metrics", args.metrics, "metrics JSON output file");
}

template <class Writer>
void writeFile(const std::string& path, Writer&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

void emitResult(const CommonArgs& args, const Hypergraph& g, const Partitioning& p,
                const std::optional<nlohmann::json>& extra) {
  auto doc = evaluationJson(g, p, args.constraints());
  if (extra) doc.update(*extra);
  if (!args.out.empty()) writeFile(args.out, [&](std::ostream& os) { writePartition(p, os); });
  if (!args.metrics.empty()) writeFile(args.metrics, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  std::cout << "connectivity " << formatWeight(doc["connectivity"].get<double>()) << "\n"
            << "partitions " << p.numParts << "\n"
            << "valid " << (doc["valid"].get<bool>() ? "yes" : "no") << "\n";
}

int runPartition(const CommonArgs& args, std::size_t rounds, std::size_t batch, std::uint64_t seed, bool timings,
                 bool serial) {
  const Hypergraph g = readDhgFile(args.input);
  Config cfg;
  cfg.constraints = args.constraints();
  cfg.maxRounds = rounds;
  cfg.batchSize = batch;
  cfg.seed = seed;
  cfg.exec = serial ? Exec::Serial : Exec::Parallel;
  const auto result = partition(g, cfg);
  emitResult(args, g, result.partitioning, runStatsJson(result.stats, timings));
  return 0;
}

int runEval(const CommonArgs& args, const std::string& partsPath) {
  const Hypergraph g = readDhgFile(args.input);
  const Partitioning p = readPartitionFile(partsPath);
  if (p.assign.size() != g.numNodes()) {
    std::cerr << "error: partition file has " << p.assign.size() << " entries for " << g.numNodes()
              << " nodes\n";
    return kExitError;
  }
  const auto c = args.constraints();
  std::cout << "connectivity " << formatWeight(connectivity(g, p)) << "\n"
            << "partitions " << p.numParts << "\n";
  const auto violations = checkValidity(g, p, c);
  for (const Violation& v : violations) {
    std::cout << "violation part " << v.part << " " << toString(v.kind) << " " << v.actual << " > " << v.limit
              << "\n";
  }
  std::vector<char> used(p.numParts, 0);
  for (PartId q : p.assign) used[q] = 1;
  bool hasEmpty = false;
  for (std::size_t q = 0; q < p.numParts; ++q) {
    if (!used[q]) {
      std::cout << "violation part " << q << " empty\n";
      hasEmpty = true;
    }
  }
  const bool valid = violations.empty() && !hasEmpty;
  std::cout << "valid " << (valid ? "yes" : "no") << "\n";
  if (!args.metrics.empty()) {
    writeFile(args.metrics, [&](std::ostream& os) { os << evaluationJson(g, p, c).dump(2) << '\n'; });
  }
  return valid ? 0 : kExitInvalid;
}

int runBaseline(const CommonArgs& args, const std::string& method) {
  const Hypergraph g = readDhgFile(args.input);
  const Partitioning p = method == "onepass" ? onePass(g, args.constraints()) : overlapGreedy(g, args.constraints());
  emitResult(args, g, p, nlohmann::json{{"method", method}});
  return 0;
}

int runOracle(const CommonArgs& args) {
  const Hypergraph g = readDhgFile(args.input);
  if (g.numNodes() > kBruteForceMaxNodes) {
    std::cerr << "error: oracle accepts at most " << kBruteForceMaxNodes << " nodes, input has " << g.numNodes()
              << "\n";
    return kExitInfeasible;
  }
  const auto best = bruteForceOptimal(g, args.constraints());
  emitResult(args, g, best.partitioning, nlohmann::json{{"method", "brute_force"}});
  return 0;
}

int runGen(const GeneratorOptions& opts, const std::string& out) {
  const Hypergraph g = generateHypergraph(opts);
  if (out.empty()) {
    writeDhg(g, std::cout);
  } else {
    writeFile(out, [&](std::ostream& os) { writeDhg(g, os); });
  }
  return 0;
}

int runConvert(const std::string& input, const std::string& out) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open " + input);
  const Hypergraph g = parseHgr(in);
  writeFile(out, [&](std::ostream& os) { writeDhg(g, os); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level partitioner for directed hypergraphs with size and inbound limits"};
  app.require_subcommand(1);

  CommonArgs common;
  std::size_t rounds = 8, batch = 32;
  std::uint64_t seed = 0;
  bool timings = false, serial = false;
  auto* partitionCmd = app.add_subcommand("partition", "multi-level partitioning");
  addCommon(partitionCmd, common);
  partitionCmd->add_option("--rounds", rounds, "refinement rounds per level")->capture_default_str();
  partitionCmd->add_option("--batch", batch, "histogram batch size")->capture_default_str();
  partitionCmd->add_option("--seed", seed, "reserved; results are deterministic")->capture_default_str();
  partitionCmd->add_flag("--timings", timings, "record wall times in phase_ms");
  partitionCmd->add_flag("--serial", serial, "use the serial reference kernels");

  std::string partsPath;
  auto* evalCmd = app.add_subcommand("eval", "evaluate a partition file");
  addCommon(evalCmd, common);
  evalCmd->add_option("--parts", partsPath, "partition file")->required();

  std::string method;
  auto* baselineCmd = app.add_subcommand("baseline", "run a baseline partitioner");
  addCommon(baselineCmd, common);
  baselineCmd->add_option("--method", method, "onepass or overlap")
      ->required()
      ->check(CLI::IsMember({"onepass", "overlap"}));

  auto* oracleCmd = app.add_subcommand("oracle", "exhaustive optimum for tiny inputs");
  addCommon(oracleCmd, common);

  GeneratorOptions gen;
  std::string genOut;
  auto* genCmd = app.add_subcommand("gen", "emit a seeded random .dhg");
  genCmd->add_option("--nodes", gen.nodes)->required();
  genCmd->add_option("--edges", gen.edges)->required();
  genCmd->add_option("--max-pins", gen.maxPins)->required();
  genCmd->add_option("--seed", gen.seed)->capture_default_str();
  genCmd->add_option("--locality", gen.locality)->capture_default_str();
  genCmd->add_option("--community", gen.communitySize)->capture_default_str();
  genCmd->add_option("--out", genOut, "output file (default stdout)");

  std::string convertIn, convertOut;
  auto* convertCmd = app.add_subcommand("convert", "convert hMETIS .hgr to .dhg");
  convertCmd->add_option("--input", convertIn)->required();
  convertCmd->add_option("--out", convertOut)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*partitionCmd) return runPartition(common, rounds, batch, seed, timings, serial);
    if (*evalCmd) return runEval(common, partsPath);
    if (*baselineCmd) return runBaseline(common, method);
    if (*oracleCmd) return runOracle(common);
    if (*genCmd) return runGen(gen, genOut);
    if (*convertCmd) return runConvert(convertIn, convertOut);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
