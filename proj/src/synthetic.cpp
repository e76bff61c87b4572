#include "dsel/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "dsel/error.hpp"
#include "dsel/random.hpp"

namespace dsel {

void DomainSpec::validate() const {
  if (name.empty()) throw ParameterError("domain spec needs a name");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ParameterError("overlap must be in [0, 1] for " + name);
  if (shared_vocab_size < 1 || private_vocab_size < 1 || lexicon_size < 1)
    throw ParameterError("vocabulary sizes must be >= 1 for " + name);
  if (docs_per_label < 1) throw ParameterError("docs_per_label must be >= 1 for " + name);
  if (min_length < 1 || max_length < min_length) throw ParameterError("invalid length range for " + name);
  if (!(label_noise >= 0.0 && label_noise < 0.5)) throw ParameterError("label noise must be in [0, 0.5) for " + name);
  if (!(sentiment_rate >= 0.0 && sentiment_rate <= 1.0) || !(shared_rate >= 0.0 && shared_rate <= 1.0) ||
      !(blend >= 0.0 && blend <= 1.0))
    throw ParameterError("rates must be in [0, 1] for " + name);
}

namespace {

std::string_view lexicon_tag(Label label) {
  switch (label) {
    case Label::negative: return "_neg";
    case Label::neutral: return "_neu";
    case Label::positive: return "_pos";
  }
  return "_neg";
}

// Zipf(1) sampler over [0, n).
class Zipf {
 public:
  explicit Zipf(std::size_t n) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) cdf_[k] = acc += 1.0 / static_cast<double>(k + 1);
    for (double& c : cdf_) c /= acc;
  }
  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

// Slot k of a vocabulary belongs to the target for the first round(overlap * size) slots.
std::string slot_token(const DomainSpec& spec, const DomainSpec& target, std::string_view tag, std::size_t size,
                       std::size_t k) {
  const auto shared = static_cast<std::size_t>(std::llround(spec.overlap * static_cast<double>(size)));
  const std::string& owner = (&spec == &target || k < shared) ? target.name : spec.name;
  return owner + std::string(tag) + std::to_string(k);
}

struct DomainVocab {
  std::vector<std::string> privates;
  std::vector<std::vector<std::string>> lexicons;  // per task label
};

DomainVocab domain_vocab(const DomainSpec& spec, const DomainSpec& target, std::span<const Label> labels) {
  DomainVocab v;
  for (std::size_t k = 0; k < spec.private_vocab_size; ++k)
    v.privates.push_back(slot_token(spec, target, "_t", spec.private_vocab_size, k));
  for (Label l : labels) {
    std::vector<std::string> lex;
    for (std::size_t k = 0; k < spec.lexicon_size; ++k)
      lex.push_back(slot_token(spec, target, lexicon_tag(l), spec.lexicon_size, k));
    v.lexicons.push_back(std::move(lex));
  }
  return v;
}

void generate_domain(const DomainSpec& spec, const DomainSpec& target, std::span<const DomainVocab> others,
                     std::span<const Label> labels, std::vector<Document>& out) {
  const DomainVocab vocab = domain_vocab(spec, target, labels);
  Rng rng(derive_seed(spec.seed, "generator/" + spec.name));
  const Zipf shared_zipf(spec.shared_vocab_size), private_zipf(spec.private_vocab_size);

  std::vector<std::size_t> label_seq;
  for (std::size_t l = 0; l < labels.size(); ++l) label_seq.insert(label_seq.end(), spec.docs_per_label, l);
  rng.shuffle(label_seq);

  std::size_t serial = 0;
  for (std::size_t true_label : label_seq) {
    const std::size_t len = spec.min_length + rng.index(spec.max_length - spec.min_length + 1);
    std::string text;
    for (std::size_t t = 0; t < len; ++t) {
      std::string token;
      if (rng.bernoulli(spec.sentiment_rate)) {
        const auto& lex = vocab.lexicons[true_label];
        token = lex[rng.index(lex.size())];
      } else if (rng.bernoulli(spec.shared_rate)) {
        token = "w" + std::to_string(shared_zipf(rng));
      } else if (!others.empty() && rng.bernoulli(spec.blend)) {
        const auto& other = others[rng.index(others.size())];
        token = other.privates[std::min(private_zipf(rng), other.privates.size() - 1)];
      } else {
        token = vocab.privates[private_zipf(rng)];
      }
      if (!text.empty()) text += ' ';
      text += token;
    }
    std::size_t recorded = true_label;
    if (rng.bernoulli(spec.label_noise)) recorded = (true_label + 1 + rng.index(labels.size() - 1)) % labels.size();
    char id[32];
    std::snprintf(id, sizeof id, "-%05zu", serial++);
    out.push_back(Document{spec.name + id, std::move(text), spec.name, labels[recorded]});
  }
}

std::set<std::string> corpus_tokens(const Corpus& corpus) {
  std::set<std::string> tokens;
  for (const auto& doc : corpus.documents()) {
    std::size_t pos = 0;
    const std::string& text = doc.text;
    while (pos < text.size()) {
      std::size_t end = text.find(' ', pos);
      if (end == std::string::npos) end = text.size();
      if (end > pos) tokens.insert(text.substr(pos, end - pos));
      pos = end + 1;
    }
  }
  return tokens;
}

}  // namespace

Corpus generate(std::span<const DomainSpec> sources, const DomainSpec& target, const GeneratorOptions& options) {
  std::set<std::string> names{target.name};
  target.validate();
  for (const auto& s : sources) {
    s.validate();
    if (!names.insert(s.name).second) throw ValidationError("duplicate domain name '" + s.name + "'");
  }
  const auto labels = task_labels(options.task);
  std::vector<DomainVocab> source_vocabs;
  for (const auto& s : sources) source_vocabs.push_back(domain_vocab(s, target, labels));

  std::vector<Document> docs;
  generate_domain(target, target, {}, labels, docs);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::vector<DomainVocab> others;
    for (std::size_t j = 0; j < sources.size(); ++j)
      if (j != i) others.push_back(source_vocabs[j]);
    generate_domain(sources[i], target, others, labels, docs);
  }
  return Corpus(std::move(docs));
}

std::vector<Label> implied_labels(const Corpus& corpus) {
  std::vector<Label> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    std::size_t votes[3] = {0, 0, 0};
    std::size_t pos = 0;
    const std::string& text = doc.text;
    while (pos < text.size()) {
      std::size_t end = text.find(' ', pos);
      if (end == std::string::npos) end = text.size();
      const std::string_view tok(text.data() + pos, end - pos);
      for (Label l : {Label::negative, Label::neutral, Label::positive}) {
        const auto tag = lexicon_tag(l);
        const auto at = tok.rfind(tag);
        if (at != std::string_view::npos && at + tag.size() < tok.size() &&
            std::all_of(tok.begin() + static_cast<std::ptrdiff_t>(at + tag.size()), tok.end(),
                        [](char c) { return c >= '0' && c <= '9'; }))
          ++votes[static_cast<int>(l)];
      }
      pos = end + 1;
    }
    std::size_t best = 1;  // no sentiment tokens reads as neutral
    for (std::size_t l : {0u, 2u})
      if (votes[l] > votes[best]) best = l;
    if (votes[0] > 0 && votes[0] == votes[2] && votes[0] >= votes[1]) best = 1;
    out.push_back(static_cast<Label>(best));
  }
  return out;
}

std::vector<Scenario> benchmark_suite(std::uint64_t seed) {
  std::vector<Scenario> suite;

  Scenario a;
  a.name = "distinct";
  a.description = "5 clearly separated source domains with graded overlap to the target";
  a.options.task = Task::binary;
  a.target.name = "target";
  a.target.docs_per_label = 500;
  a.target.lexicon_size = 150;
  a.target.sentiment_rate = 0.15;
  a.target.shared_rate = 0.3;
  a.target.seed = seed;
  const std::pair<const char*, double> graded[] = {{"d90", 0.9}, {"d60", 0.6}, {"d40", 0.4}, {"d20", 0.2}, {"d00", 0.0}};
  for (const auto& [name, overlap] : graded) {
    DomainSpec s = a.target;
    s.name = name;
    s.overlap = overlap;
    s.docs_per_label = 1000;
    s.label_noise = 0.05;
    s.seed = seed;
    a.sources.push_back(s);
  }
  suite.push_back(std::move(a));

  Scenario b;
  b.name = "blended";
  b.description = "8 source domains with heavy topical mixing and weak boundaries";
  b.options.task = Task::ternary;
  b.target.name = "target";
  b.target.docs_per_label = 300;
  b.target.lexicon_size = 150;
  b.target.sentiment_rate = 0.15;
  b.target.shared_rate = 0.3;
  b.target.seed = seed;
  const double overlaps[] = {0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
  for (std::size_t i = 0; i < 8; ++i) {
    DomainSpec s = b.target;
    s.name = "b" + std::to_string(i);
    s.overlap = overlaps[i];
    s.docs_per_label = 400;
    s.blend = 0.6;
    s.label_noise = 0.05;
    s.seed = seed;
    b.sources.push_back(s);
  }
  suite.push_back(std::move(b));
  return suite;
}

EmbeddingTable synthetic_embeddings(const Corpus& corpus, std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw ParameterError("embedding dimension must be >= 1");
  const auto tokens = corpus_tokens(corpus);
  EmbeddingTable table(dim);
  const double inv = 1.0 / std::sqrt(static_cast<double>(dim));
  for (const auto& tok : tokens) {
    Rng rng(derive_seed(seed, "embedding/" + tok));
    std::vector<double> v(dim);
    for (double& x : v) x = rng.normal() * inv;
    if (tok.find("_pos") != std::string::npos) v[0] += 1.0;
    if (tok.find("_neg") != std::string::npos) v[0] -= 1.0;
    table.add(tok, std::move(v));
  }
  return table;
}

void write_embeddings(const std::filesystem::path& path, const Corpus& corpus, std::size_t dim, std::uint64_t seed) {
  const EmbeddingTable table = synthetic_embeddings(corpus, dim, seed);
  const auto tokens = corpus_tokens(corpus);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(9);
  for (const auto& tok : tokens) {
    out << tok;
    const auto row = table.lookup(tok);
    for (double x : *row) out << ' ' << x;
    out << '\n';
  }
}

}  // namespace dsel
