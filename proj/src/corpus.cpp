#include "dsel/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dsel/error.hpp"

namespace dsel {

using nlohmann::json;

std::string_view to_string(Label label) {
  switch (label) {
    case Label::negative: return "negative";
    case Label::neutral: return "neutral";
    case Label::positive: return "positive";
  }
  return "negative";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "negative") return Label::negative;
  if (text == "neutral") return Label::neutral;
  if (text == "positive") return Label::positive;
  return std::nullopt;
}

std::string_view to_string(Task task) { return task == Task::binary ? "binary" : "ternary"; }

Task parse_task(std::string_view text) {
  if (text == "binary") return Task::binary;
  if (text == "ternary") return Task::ternary;
  throw ParameterError("unknown task '" + std::string(text) + "' (expected binary or ternary)");
}

std::vector<Label> task_labels(Task task) {
  if (task == Task::binary) return {Label::negative, Label::positive};
  return {Label::negative, Label::neutral, Label::positive};
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  by_id_.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const Document& d = documents_[i];
    if (d.domain.empty()) throw ValidationError("document '" + d.id + "' has an empty domain");
    if (!by_id_.emplace(d.id, i).second) throw ValidationError("duplicate document id '" + d.id + "'");
    domains_.insert(d.domain);
  }
}

std::vector<std::size_t> Corpus::indices_of(const std::string& domain) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < documents_.size(); ++i)
    if (documents_[i].domain == domain) out.push_back(i);
  return out;
}

std::optional<std::size_t> Corpus::find(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

namespace {

Document parse_document(std::string_view line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
  }
  if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);
  auto require_string = [&](const char* key) -> std::string {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
      throw ParseError(std::string("missing or non-string key '") + key + "'", line_no);
    return it->get<std::string>();
  };
  Document doc;
  doc.id = require_string("id");
  doc.text = require_string("text");
  doc.domain = require_string("domain");
  if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError("label must be a string or null", line_no);
    doc.label = parse_label(it->get<std::string>());
    if (!doc.label) throw ParseError("unknown label '" + it->get<std::string>() + "'", line_no);
  }
  return doc;
}

}  // namespace

Corpus parse_corpus(std::string_view jsonl) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    docs.push_back(parse_document(line, line_no));
  }
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open corpus file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus(buffer.str());
}

std::string format_corpus(std::span<const Document> documents) {
  std::string out;
  for (const Document& d : documents) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    obj["id"] = d.id;
    obj["text"] = d.text;
    obj["domain"] = d.domain;
    obj["label"] = d.label ? nlohmann::ordered_json(std::string(to_string(*d.label))) : nlohmann::ordered_json(nullptr);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, std::span<const Document> documents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_corpus(documents);
}

// -- preprocessing ------------------------------------------------------------

std::unordered_set<std::string> PreprocessOptions::default_stopword_set() {
  std::unordered_set<std::string> set;
  for (std::string_view w : default_stopwords()) set.emplace(w);
  return set;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stopword file " + path.string());
  std::unordered_set<std::string> set;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    set.insert(line.substr(b, e - b + 1));
  }
  return set;
}

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_url(std::string_view chunk) {
  return starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") || starts_with_ci(chunk, "www.");
}

// "@name" / "#tag" with at least one word byte after the sigil, possibly
// followed by trailing punctuation.
bool is_sigil_token(std::string_view chunk, char sigil) {
  return chunk.size() >= 2 && chunk[0] == sigil && is_word_byte(static_cast<unsigned char>(chunk[1]));
}

}  // namespace

std::vector<std::string> preprocess(std::string_view text, const PreprocessOptions& options) {
  std::vector<std::string> out;
  auto emit = [&](std::string token) {
    if (options.remove_stopwords && options.stopwords.contains(token)) return;
    out.push_back(std::move(token));
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos) break;
    std::string_view chunk = text.substr(pos, end - pos);
    pos = end;

    if (options.replace_urls && is_url(chunk)) {
      emit(std::string(kUrlToken));
      continue;
    }
    if (options.replace_users && is_sigil_token(chunk, '@')) {
      emit(std::string(kUserToken));
      continue;
    }
    if (options.replace_hashtags && is_sigil_token(chunk, '#')) {
      emit(std::string(kHashtagToken));
      continue;
    }
    std::string word;
    for (std::size_t i = 0; i <= chunk.size(); ++i) {
      const unsigned char c = i < chunk.size() ? static_cast<unsigned char>(chunk[i]) : ' ';
      const bool inner_apostrophe = c == '\'' && !word.empty() && i + 1 < chunk.size() &&
                                    is_word_byte(static_cast<unsigned char>(chunk[i + 1]));
      if (is_word_byte(c) || inner_apostrophe) {
        char ch = static_cast<char>(c);
        if (options.lowercase && c >= 'A' && c <= 'Z') ch = static_cast<char>(c - 'A' + 'a');
        word.push_back(ch);
      } else if (!word.empty()) {
        emit(std::move(word));
        word.clear();
      }
    }
  }
  return out;
}

TokenLists preprocess_corpus(const Corpus& corpus, const PreprocessOptions& options) {
  TokenLists lists(corpus.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < corpus.size(); ++i) lists[i] = preprocess(corpus[i].text, options);
  return lists;
}

// -- vocabulary ---------------------------------------------------------------

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::uint32_t>(i)).second)
      throw ValidationError("duplicate vocabulary token '" + tokens_[i] + "'");
  }
}

std::optional<std::uint32_t> Vocabulary::index(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const TokenLists& token_lists, std::size_t cap) {
  if (cap < 1) throw ParameterError("vocabulary cap must be >= 1");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& tokens : token_lists)
    for (const auto& t : tokens) ++freq[t];
  std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > cap) ranked.resize(cap);
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [tok, n] : ranked) tokens.push_back(std::move(tok));
  return Vocabulary(std::move(tokens));
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t cap, const PreprocessOptions& options) {
  return build_vocabulary(preprocess_corpus(corpus, options), cap);
}

std::uint64_t SparseCounts::in_vocabulary() const {
  std::uint64_t sum = 0;
  for (const auto& e : entries) sum += e.second;
  return sum;
}

SparseCounts term_counts(std::span<const std::string> tokens, const Vocabulary& vocab) {
  SparseCounts counts;
  counts.total = tokens.size();
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens)
    if (auto i = vocab.index(t)) ids.push_back(*i);
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size();) {
    std::size_t j = i;
    while (j < ids.size() && ids[j] == ids[i]) ++j;
    counts.entries.emplace_back(ids[i], static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return counts;
}

std::vector<SparseCounts> term_counts(const TokenLists& token_lists, const Vocabulary& vocab) {
  std::vector<SparseCounts> out(token_lists.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < token_lists.size(); ++i) out[i] = term_counts(token_lists[i], vocab);
  return out;
}

}  // namespace dsel
