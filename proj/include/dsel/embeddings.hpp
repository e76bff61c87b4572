#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsel/corpus.hpp"

namespace dsel {

/// Pre-trained word vectors (GloVe-style text format). Immutable after load.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }

  /// Throws ParameterError on a wrong-length vector or duplicate token.
  void add(std::string token, std::vector<double> vec);

  /// Exact match; absent for unknown tokens.
  std::optional<std::span<const double>> lookup(std::string_view token) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>, Hash, std::equal_to<>> rows_;
};

/// Whitespace-separated "token v1 ... vdim" lines, no header. The dimension
/// comes from the first line; a row of different arity or a non-numeric field
/// is a ParseError naming the line. With `restrict_to`, only tokens in that
/// vocabulary are kept (`lowercase` folds file tokens before the check).
EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary* restrict_to = nullptr,
                               bool lowercase = true);
EmbeddingTable parse_embeddings(std::string_view text, const Vocabulary* restrict_to = nullptr,
                                bool lowercase = true);

}  // namespace dsel
