#include <algorithm>
#include <charconv>

#include "simt/corpus.hpp"
#include "simt/error.hpp"

namespace simt {
namespace {

bool linkLess(const Link& a, const Link& b) {
  return a.tgt != b.tgt ? a.tgt < b.tgt : a.src < b.src;
}

bool parseIndex(std::string_view digits, std::size_t& out) {
  if (digits.empty()) return false;
  for (char c : digits) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

}  // namespace

AlignmentSet::AlignmentSet(std::initializer_list<Link> links) {
  for (const auto& l : links) insert(l);
}

bool AlignmentSet::insert(Link link) {
  auto it = std::lower_bound(links_.begin(), links_.end(), link, linkLess);
  if (it != links_.end() && *it == link) return false;
  links_.insert(it, link);
  return true;
}

bool AlignmentSet::contains(Link link) const {
  return std::binary_search(links_.begin(), links_.end(), link, linkLess);
}

void AlignmentSet::checkRange(std::size_t srcLen, std::size_t tgtLen) const {
  for (const auto& l : links_) {
    if (l.src >= srcLen || l.tgt >= tgtLen) {
      throw InvalidArgument("alignment link " + std::to_string(l.src) + "-" + std::to_string(l.tgt) +
                            " outside sentence lengths (" + std::to_string(srcLen) + ", " +
                            std::to_string(tgtLen) + ")");
    }
  }
}

AlignmentSet parseAlignment(std::string_view line) {
  AlignmentSet out;
  for (auto token : splitTokens(line)) {
    const auto dash = token.find('-');
    std::size_t src = 0;
    std::size_t tgt = 0;
    if (dash == std::string_view::npos || !parseIndex(token.substr(0, dash), src) ||
        !parseIndex(token.substr(dash + 1), tgt)) {
      throw ParseError("malformed alignment pair '" + std::string(token) + "'");
    }
    out.insert({src, tgt});
  }
  return out;
}

std::string formatAlignment(const AlignmentSet& a) {
  std::string out;
  for (const auto& l : a.links()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l.src);
    out += '-';
    out += std::to_string(l.tgt);
  }
  return out;
}

}  // namespace simt
