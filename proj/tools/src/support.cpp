#include "support.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "simt/error.hpp"

namespace simt::cli {

std::string sha256Hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned int k = 0; k < length; ++k) {
    hex.push_back(kHex[digest[k] >> 4]);
    hex.push_back(kHex[digest[k] & 0xf]);
  }
  return hex;
}

void RunManifest::recordInput(const std::string& path, const std::string& content) {
  inputs_.push_back({{"path", path}, {"sha256", sha256Hex(content)}, {"bytes", content.size()}});
}

void RunManifest::recordConfig(const CLI::App& sub) {
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      config_[name] = opt->count() > 0;
      continue;
    }
    const auto results = opt->count() > 0 ? opt->reduced_results() : CLI::results_t{};
    if (results.empty()) {
      config_[name] = opt->get_default_str();
    } else if (results.size() == 1) {
      config_[name] = results.front();
    } else {
      config_[name] = results;
    }
  }
}

nlohmann::ordered_json RunManifest::toJson(const GlobalOptions& global) const {
  nlohmann::ordered_json j;
  j["tool"] = "simt";
  j["version"] = SIMT_VERSION;
  j["subcommand"] = subcommand_;
  j["seed"] = global.seed;
  j["jobs"] = global.jobs;
  j["config"] = config_;
  j["inputs"] = inputs_;
  return j;
}

Run::Run(const GlobalOptions& global, const CLI::App& sub) : global_(global), manifest_(sub.get_name()) {
  manifest_.recordConfig(sub);
}

std::string Run::read(const std::string& path) {
  std::string content;
  if (path == "-") {
    if (stdinUsed_) throw UsageError("only one input may be read from stdin");
    stdinUsed_ = true;
    content.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    content = readFile(path);
  }
  manifest_.recordInput(path, content);
  return content;
}

std::vector<Program> Run::readPrograms(const std::string& path) {
  const std::string text = read(path);
  std::vector<Program> programs;
  const auto lines = splitLines(text);
  programs.reserve(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    try {
      programs.push_back(Program::parse(lines[k]));
    } catch (const ParseError& e) {
      throw ParseError("program line " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  return programs;
}

std::ostream& Run::open(const std::string& path) {
  if (path == "-") return std::cout;
  auto file = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*file) throw Error("cannot open '" + path + "' for writing");
  files_.push_back(std::move(file));
  return *files_.back();
}

void Run::finish() {
  for (auto& f : files_) {
    f->flush();
    if (!*f) throw Error("write failed");
  }
  std::cout.flush();
  const std::string text = manifest_.toJson(global_).dump(2) + "\n";
  std::string target = global_.manifest;
  if (target.empty() && primary_ != "-") target = primary_ + ".run.json";
  if (target.empty()) {
    std::cerr << text;
    return;
  }
  std::ofstream out(target, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write manifest '" + target + "'");
}

const CLI::Validator kInputPath(
    [](std::string& path) -> std::string {
      if (path == "-") return {};
      return CLI::ExistingFile(path);
    },
    "FILE|-");

LoadedCorpus loadCorpus(Run& run, const std::string& src, const std::string& tgt, const std::string& align) {
  LoadedCorpus c;
  const std::string s = run.read(src);
  const std::string t = run.read(tgt);
  c.pairs = parseParallel(s, t, c.sourceVocab, c.targetVocab);
  if (!align.empty()) attachAlignments(c.pairs, run.read(align));
  return c;
}

std::string fmt(double v, int precision) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace simt::cli
