#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dsel {

enum class Label { negative, neutral, positive };

std::string_view to_string(Label label);
/// Parses "negative" / "neutral" / "positive"; anything else is absent.
std::optional<Label> parse_label(std::string_view text);

enum class Task { binary, ternary };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

/// Class list in prediction order for a task.
std::vector<Label> task_labels(Task task);

struct Document {
  std::string id;
  std::string text;
  std::string domain;
  std::optional<Label> label;
};

/// Labeled text grouped by domain. Immutable after construction.
class Corpus {
 public:
  Corpus() = default;
  /// Validates unique ids and non-empty domains.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  const Document& operator[](std::size_t i) const { return documents_[i]; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  /// Domain names in lexicographic order.
  const std::set<std::string>& domains() const { return domains_; }
  bool has_domain(const std::string& name) const { return domains_.contains(name); }

  /// Document positions belonging to a domain, in corpus order.
  std::vector<std::size_t> indices_of(const std::string& domain) const;

  std::optional<std::size_t> find(const std::string& id) const;

 private:
  std::vector<Document> documents_;
  std::set<std::string> domains_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Reads the canonical JSONL corpus (keys id, text, domain, label).
/// Throws ParseError (with line number) or ValidationError.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl);

/// Writes one JSON object per line, keys in canonical order.
void write_corpus(const std::filesystem::path& path, std::span<const Document> documents);
std::string format_corpus(std::span<const Document> documents);

// -- preprocessing ----------------------------------------------------------

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kUserToken = "<user>";
inline constexpr std::string_view kHashtagToken = "<hashtag>";

/// The shipped English stopword list.
std::span<const std::string_view> default_stopwords();
/// One token per line; blank lines and surrounding whitespace ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

struct PreprocessOptions {
  bool lowercase = true;
  bool replace_urls = true;
  bool replace_users = true;
  bool replace_hashtags = true;
  bool remove_stopwords = true;
  std::unordered_set<std::string> stopwords = default_stopword_set();

  static std::unordered_set<std::string> default_stopword_set();
};

/// Whitespace + punctuation tokenizer with placeholder substitution and
/// stopword removal. Apostrophes inside a word are kept; bytes >= 0x80 are
/// treated as word characters.
std::vector<std::string> preprocess(std::string_view text, const PreprocessOptions& options);

using TokenLists = std::vector<std::vector<std::string>>;

TokenLists preprocess_corpus(const Corpus& corpus, const PreprocessOptions& options);

// -- vocabulary ---------------------------------------------------------------

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Tokens must be unique; their order defines the index.
  explicit Vocabulary(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  std::optional<std::uint32_t> index(std::string_view token) const;
  bool contains(std::string_view token) const { return index(token).has_value(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
};

/// Top-`cap` tokens by total frequency, ties broken lexicographically.
Vocabulary build_vocabulary(const TokenLists& token_lists, std::size_t cap);
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t cap, const PreprocessOptions& options);

/// In-vocabulary counts of one token list. `total` includes OOV tokens.
struct SparseCounts {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;  // (index, count), index increasing
  std::uint64_t total = 0;

  std::uint64_t in_vocabulary() const;
};

SparseCounts term_counts(std::span<const std::string> tokens, const Vocabulary& vocab);
std::vector<SparseCounts> term_counts(const TokenLists& token_lists, const Vocabulary& vocab);

}  // namespace dsel
