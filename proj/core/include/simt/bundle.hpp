#pragma once

#include <filesystem>
#include <string>

#include "simt/imitation.hpp"

namespace simt {

inline constexpr int kBundleFormatVersion = 1;

// Policy bundle: a JSON document holding the format version, the feature map
// version tag, both vocabularies, the mean length ratio and both weight
// matrices.  Doubles are written with round-trip precision.
std::string serializeBundle(const PolicyPair& pair);
PolicyPair deserializeBundle(const std::string& text);

void saveBundle(const PolicyPair& pair, const std::filesystem::path& path);
PolicyPair loadBundle(const std::filesystem::path& path);

}  // namespace simt
