#include <algorithm>
#include <sstream>

#include "simt/error.hpp"
#include "simt/simulate.hpp"

namespace simt {
namespace {

std::string join(std::span<const std::string> tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t k = begin; k < end && k < tokens.size(); ++k) {
    if (!out.empty()) out += ' ';
    out += tokens[k];
  }
  return out;
}

void writeRow(std::ostringstream& out, std::string_view label, const std::vector<std::string>& cells,
              const std::vector<std::size_t>& widths) {
  out << label;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    out << " | " << cells[c];
    if (c + 1 < cells.size()) out << std::string(widths[c] - cells[c].size(), ' ');
  }
  out << '\n';
}

}  // namespace

std::string renderTrace(const Program& program, std::span<const std::string> source,
                        std::span<const std::string> written, std::optional<std::span<const std::string>> reference) {
  std::vector<std::string> readCells;
  std::vector<std::string> writeCells;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t t = 0;
  while (t < program.size()) {
    const std::size_t readBegin = i;
    while (t < program.size() && program[t] == Action::Read) {
      ++i;
      ++t;
    }
    const std::size_t writeBegin = j;
    while (t < program.size() && program[t] == Action::Write) {
      ++j;
      ++t;
    }
    readCells.push_back(join(source, readBegin, i));
    writeCells.push_back(join(written, writeBegin, j));
  }
  std::vector<std::size_t> widths(readCells.size());
  for (std::size_t c = 0; c < widths.size(); ++c) widths[c] = std::max(readCells[c].size(), writeCells[c].size());

  std::ostringstream out;
  writeRow(out, "READ ", readCells, widths);
  writeRow(out, "WRITE", writeCells, widths);
  if (reference) out << "REF   | " << join(*reference, 0, reference->size()) << '\n';
  return out.str();
}

}  // namespace simt
