#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "simt/corpus.hpp"
#include "simt/program.hpp"

namespace simt::cli {

// Bad flag combinations detected after parsing.  Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The inputs were read but did not pass a check.  Exit code 1.
class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string manifest;
};

// Records what a run consumed so it can be replayed.
class RunManifest {
 public:
  explicit RunManifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}
  void recordInput(const std::string& path, const std::string& content);
  void recordConfig(const CLI::App& sub);
  nlohmann::ordered_json toJson(const GlobalOptions& global) const;

 private:
  std::string subcommand_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
};

std::string sha256Hex(const std::string& data);

// Everything a subcommand needs while running.
class Run {
 public:
  Run(const GlobalOptions& global, const CLI::App& sub);

  const GlobalOptions& global() const { return global_; }

  // "-" reads stdin (at most once per run).
  std::string read(const std::string& path);
  std::vector<Program> readPrograms(const std::string& path);

  // "-" is stdout.
  std::ostream& open(const std::string& path);

  // Where the manifest goes when --manifest is not given: "<primary>.run.json"
  // for a file output, stderr otherwise.
  void setPrimaryOutput(const std::string& path) { primary_ = path; }
  void finish();

 private:
  const GlobalOptions& global_;
  RunManifest manifest_;
  bool stdinUsed_ = false;
  std::string primary_ = "-";
  std::vector<std::unique_ptr<std::ofstream>> files_;
};

// Validator accepting an existing file or "-".
extern const CLI::Validator kInputPath;

using Action = std::function<int(Run&)>;

// Each register function adds one subcommand and wires its action into
// `actions`, keyed by subcommand name.
using ActionTable = std::vector<std::pair<CLI::App*, Action>>;

void registerSynth(CLI::App& app, ActionTable& actions);
void registerOracle(CLI::App& app, ActionTable& actions);
void registerValidate(CLI::App& app, ActionTable& actions);
void registerPerturb(CLI::App& app, ActionTable& actions);
void registerWaitK(CLI::App& app, ActionTable& actions);
void registerDelay(CLI::App& app, ActionTable& actions);
void registerMetrics(CLI::App& app, ActionTable& actions);
void registerTrace(CLI::App& app, ActionTable& actions);
void registerSimulate(CLI::App& app, ActionTable& actions);
void registerTrain(CLI::App& app, ActionTable& actions);
void registerEvaluate(CLI::App& app, ActionTable& actions);

// Parsed corpus side by side with the vocabularies used to read it.
struct LoadedCorpus {
  std::vector<SentencePair> pairs;
  Vocabulary sourceVocab;
  Vocabulary targetVocab;
};

LoadedCorpus loadCorpus(Run& run, const std::string& src, const std::string& tgt, const std::string& align = {});

// Fixed-point formatting used by every TSV report.
std::string fmt(double v, int precision = 4);

}  // namespace simt::cli
