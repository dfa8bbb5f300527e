#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simt {

using TokenId = std::int32_t;

// Interned token table.  Ids 0 and 1 are reserved for the unknown token and
// the end-of-sentence symbol; they exist in every vocabulary.
class Vocabulary {
 public:
  static constexpr TokenId kUnk = 0;
  static constexpr TokenId kEos = 1;
  static constexpr std::string_view kUnkText = "<unk>";
  static constexpr std::string_view kEosText = "</s>";

  Vocabulary();

  // Returns the id of `token`, adding it when absent.
  TokenId intern(std::string_view token);
  // Returns the id of `token`, or kUnk when absent.
  TokenId lookup(std::string_view token) const;
  const std::string& text(TokenId id) const;

  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  static Vocabulary fromTokens(const std::vector<std::string>& tokens);

  // One token per line; line number is the id.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

}  // namespace simt
