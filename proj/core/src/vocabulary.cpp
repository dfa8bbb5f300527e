#include "simt/vocabulary.hpp"

#include <fstream>

#include "simt/error.hpp"

namespace simt {

Vocabulary::Vocabulary() {
  intern(kUnkText);
  intern(kEosText);
}

TokenId Vocabulary::intern(std::string_view token) {
  if (auto it = index_.find(std::string(token)); it != index_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

TokenId Vocabulary::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

const std::string& Vocabulary::text(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw InvalidArgument("token id " + std::to_string(id) + " outside vocabulary of size " +
                          std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

Vocabulary Vocabulary::fromTokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < 2 || tokens[0] != kUnkText || tokens[1] != kEosText) {
    throw ParseError("vocabulary must start with the reserved tokens <unk> and </s>");
  }
  Vocabulary v;
  for (std::size_t k = 2; k < tokens.size(); ++k) {
    if (v.contains(tokens[k])) throw ParseError("duplicate vocabulary entry '" + tokens[k] + "'");
    v.intern(tokens[k]);
  }
  return v;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write vocabulary " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read vocabulary " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) tokens.push_back(line);
  return fromTokens(tokens);
}

}  // namespace simt
