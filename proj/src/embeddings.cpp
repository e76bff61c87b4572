#include "dsel/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dsel/error.hpp"

namespace dsel {

void EmbeddingTable::add(std::string token, std::vector<double> vec) {
  if (vec.size() != dim_)
    throw ParameterError("embedding for '" + token + "' has " + std::to_string(vec.size()) +
                         " components, expected " + std::to_string(dim_));
  if (!rows_.emplace(std::move(token), std::move(vec)).second) throw ParameterError("duplicate embedding token");
}

std::optional<std::span<const double>> EmbeddingTable::lookup(std::string_view token) const {
  auto it = rows_.find(token);
  if (it == rows_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

}  // namespace

EmbeddingTable parse_embeddings(std::string_view text, const Vocabulary* restrict_to, bool lowercase) {
  std::optional<EmbeddingTable> table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError("embedding row has no vector components", line_no);
    const std::size_t dim = fields.size() - 1;
    if (!table) table.emplace(dim);
    if (dim != table->dim())
      throw ParseError("inconsistent embedding dimensionality: got " + std::to_string(dim) + ", expected " +
                           std::to_string(table->dim()),
                       line_no);
    std::string token(fields[0]);
    if (lowercase)
      for (char& c : token)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    std::vector<double> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      std::string_view f = fields[k + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), vec[k]);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw ParseError("non-numeric embedding field '" + std::string(f) + "'", line_no);
    }
    if (restrict_to && !restrict_to->contains(token)) continue;
    // Lowercasing can collapse "The" and "the"; the first row wins.
    if (table->lookup(token)) continue;
    table->add(std::move(token), std::move(vec));
  }
  if (!table) return EmbeddingTable(1);
  return std::move(*table);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary* restrict_to, bool lowercase) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open embeddings file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_embeddings(buffer.str(), restrict_to, lowercase);
}

}  // namespace dsel
