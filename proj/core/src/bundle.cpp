#include "simt/bundle.hpp"

#include <fstream>

#include <json.hpp>

#include "simt/corpus.hpp"
#include "simt/error.hpp"

namespace simt {
namespace {

using nlohmann::json;

json modelJson(const LinearSoftmax& m) {
  return {{"features", m.features()},
          {"classes", m.classes()},
          {"weights", std::vector<double>(m.weights().begin(), m.weights().end())}};
}

void loadModel(const json& j, LinearSoftmax& m, const char* name) {
  const auto features = j.at("features").get<std::size_t>();
  const auto classes = j.at("classes").get<std::size_t>();
  if (features != m.features() || classes != m.classes()) {
    throw ParseError(std::string("bundle ") + name + " shape " + std::to_string(features) + "x" +
                     std::to_string(classes) + " does not match feature map " + std::to_string(m.features()) + "x" +
                     std::to_string(m.classes()));
  }
  const auto& w = j.at("weights");
  if (w.size() != m.weights().size()) throw ParseError(std::string("bundle ") + name + " has wrong weight count");
  auto dst = m.weights();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = w[k].get<double>();
}

}  // namespace

std::string serializeBundle(const PolicyPair& pair) {
  nlohmann::ordered_json j;
  j["format"] = "simt-policy-bundle";
  j["version"] = kBundleFormatVersion;
  j["featureMap"] = std::string(kFeatureMapVersion);
  j["meanLengthRatio"] = pair.meanLengthRatio();
  j["sourceVocabulary"] = pair.sourceVocab().tokens();
  j["targetVocabulary"] = pair.targetVocab().tokens();
  j["programmer"] = modelJson(pair.programmer());
  j["interpreter"] = modelJson(pair.interpreter());
  return j.dump();
}

PolicyPair deserializeBundle(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy bundle is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "simt-policy-bundle") throw ParseError("not a policy bundle");
    if (j.at("version").get<int>() != kBundleFormatVersion) {
      throw ParseError("unsupported bundle version " + j.at("version").dump());
    }
    if (j.at("featureMap").get<std::string>() != kFeatureMapVersion) {
      throw ParseError("bundle feature map '" + j.at("featureMap").get<std::string>() + "' does not match '" +
                       std::string(kFeatureMapVersion) + "'");
    }
    PolicyPair pair(Vocabulary::fromTokens(j.at("sourceVocabulary").get<std::vector<std::string>>()),
                    Vocabulary::fromTokens(j.at("targetVocabulary").get<std::vector<std::string>>()),
                    j.at("meanLengthRatio").get<double>());
    loadModel(j.at("programmer"), pair.programmer(), "programmer");
    loadModel(j.at("interpreter"), pair.interpreter(), "interpreter");
    return pair;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed policy bundle: ") + e.what());
  }
}

void saveBundle(const PolicyPair& pair, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write bundle " + path.string());
  out << serializeBundle(pair) << '\n';
}

PolicyPair loadBundle(const std::filesystem::path& path) { return deserializeBundle(readFile(path)); }

}  // namespace simt
