#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "dsel/corpus.hpp"
#include "dsel/error.hpp"
#include "dsel/random.hpp"
#include "dsel/tfidf.hpp"
#include "helpers.hpp"

using namespace dsel;

namespace {

PreprocessOptions keep_all() {
  PreprocessOptions o;
  o.remove_stopwords = false;
  return o;
}

}  // namespace

TEST_CASE("load_corpus reads three documents in two domains") {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "c.jsonl",
                      R"({"id":"d1","text":"good book","domain":"books","label":"positive"})"
                      "\n"
                      R"({"id":"d2","text":"bad book","domain":"books","label":"negative"})"
                      "\n"
                      R"({"id":"d3","text":"fine dvd","domain":"dvd","label":null})"
                      "\n");
  const Corpus c = load_corpus(dir / "c.jsonl");
  CHECK(c.size() == 3);
  CHECK(c.domains().size() == 2);
  CHECK(c[0].id == "d1");
  CHECK(c[2].label == std::nullopt);
  CHECK(c.indices_of("books") == std::vector<std::size_t>{0, 1});
  CHECK(c.find("d3") == std::optional<std::size_t>(2));
}

TEST_CASE("duplicate ids are rejected") {
  const std::string text = R"({"id":"d1","text":"a","domain":"x","label":"positive"})"
                           "\n"
                           R"({"id":"d1","text":"b","domain":"y","label":"negative"})";
  CHECK_THROWS_AS(parse_corpus(text), ValidationError);
}

TEST_CASE("empty file gives an empty corpus") {
  const Corpus c = parse_corpus("");
  CHECK(c.empty());
  CHECK(c.domains().empty());
}

TEST_CASE("malformed line names its line number") {
  const std::string text = R"({"id":"d1","text":"a","domain":"x","label":"positive"})"
                           "\n{not json\n";
  try {
    parse_corpus(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_corpus(R"({"id":"d1","text":"a","domain":"","label":null})"), Error);
  CHECK_THROWS_AS(parse_corpus(R"({"id":"d1","text":"a","domain":"x","label":"great"})"), ParseError);
  CHECK_THROWS_AS(parse_corpus(R"({"text":"a","domain":"x"})"), ParseError);
}

TEST_CASE("write then reload is byte-stable") {
  testing::TempDir dir("corpus-rt");
  std::vector<Document> docs{{"a", "caf\xc3\xa9 \"quoted\"", "x", Label::neutral}, {"b", "plain", "y", std::nullopt}};
  write_corpus(dir / "c.jsonl", docs);
  const Corpus c = load_corpus(dir / "c.jsonl");
  CHECK(c.documents().size() == 2);
  CHECK(c[0].text == docs[0].text);
  CHECK(c[1].label == std::nullopt);
  CHECK(format_corpus(c.documents()) == testing::read_file(dir / "c.jsonl"));
  CHECK(testing::read_file(dir / "c.jsonl").starts_with(R"({"id":"a","text":)"));
}

TEST_CASE("preprocess substitutes placeholders") {
  CHECK(preprocess("Check http://x.co @bob #win", keep_all()) ==
        std::vector<std::string>{"check", "<url>", "<user>", "<hashtag>"});
}

TEST_CASE("preprocess removes default stopwords") {
  CHECK(preprocess("the movie was the best", PreprocessOptions{}) == std::vector<std::string>{"movie", "best"});
  CHECK(preprocess("", PreprocessOptions{}).empty());
}

TEST_CASE("preprocess splits punctuation and keeps inner apostrophes") {
  const auto t = preprocess("Don't STOP, believin'!!", keep_all());
  CHECK(t == std::vector<std::string>{"don't", "stop", "believin"});
  PreprocessOptions cased = keep_all();
  cased.lowercase = false;
  CHECK(preprocess("Hello World", cased) == std::vector<std::string>{"Hello", "World"});
  CHECK(preprocess("www.example.com rocks", keep_all()) == std::vector<std::string>{"<url>", "rocks"});
}

TEST_CASE("stopword filter runs after placeholder substitution") {
  PreprocessOptions o;
  o.stopwords = {"<url>", "a"};
  CHECK(preprocess("a http://x", o) == std::vector<std::string>{});
  o.stopwords = {"a"};
  CHECK(preprocess("a http://x", o) == std::vector<std::string>{"<url>"});
}

TEST_CASE("build_vocabulary ranks by frequency then lexicographically") {
  const TokenLists lists{{"a", "b", "a"}, {"c", "a", "b"}};
  CHECK(build_vocabulary(lists, 2).tokens() == std::vector<std::string>{"a", "b"});
  const TokenLists tie{{"b", "a"}, {"a", "b"}};
  CHECK(build_vocabulary(tie, 1).tokens() == std::vector<std::string>{"a"});
  CHECK(build_vocabulary(TokenLists{}, 10).empty());
}

TEST_CASE("build_vocabulary is invariant to document order") {
  Rng rng(5);
  TokenLists lists;
  for (int d = 0; d < 50; ++d) {
    std::vector<std::string> doc;
    for (int t = 0; t < 10; ++t) doc.push_back("w" + std::to_string(rng.index(30)));
    lists.push_back(doc);
  }
  const auto v1 = build_vocabulary(lists, 12);
  rng.shuffle(lists);
  CHECK(build_vocabulary(lists, 12).tokens() == v1.tokens());
  CHECK(v1.size() == 12);
  for (std::uint32_t i = 0; i < v1.size(); ++i) CHECK(v1.index(v1.tokens()[i]) == i);
}

TEST_CASE("term_counts counts in-vocabulary tokens and tracks the total") {
  const Vocabulary v({"movie", "best"});
  const std::vector<std::string> toks{"movie", "movie", "best"};
  const auto c = term_counts(toks, v);
  CHECK(c.entries == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 2}, {1, 1}});
  CHECK(c.total == 3);
  const std::vector<std::string> oov{"x", "y"};
  CHECK(term_counts(oov, v).entries.empty());
  CHECK(term_counts(oov, v).total == 2);
  CHECK(term_counts(std::vector<std::string>{}, v).total == 0);
}

TEST_CASE("term_counts sum never exceeds the total") {
  Rng rng(9);
  const Vocabulary v({"a", "b", "c"});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> toks;
    const auto len = rng.index(12);
    for (std::uint64_t k = 0; k < len; ++k) toks.push_back(std::string(1, static_cast<char>('a' + rng.index(5))));
    const auto c = term_counts(toks, v);
    const bool has_oov = std::any_of(toks.begin(), toks.end(), [](const std::string& t) { return t > "c"; });
    CHECK(c.in_vocabulary() <= c.total);
    CHECK((c.in_vocabulary() == c.total) == !has_oov);
    for (std::size_t k = 1; k < c.entries.size(); ++k) CHECK(c.entries[k - 1].first < c.entries[k].first);
  }
}

TEST_CASE("tfidf on a single document has idf 1 and unit norm") {
  const TokenLists docs{{"good", "movie", "good"}};
  TfidfVectorizer v(2);
  v.fit(docs);
  for (double idf : v.idf()) CHECK(idf == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.transform(docs[0]).norm() == doctest::Approx(1.0));
}

TEST_CASE("identical documents get identical vectors") {
  const TokenLists docs{{"a", "b"}, {"a", "b"}, {"c"}};
  const auto f = tfidf_features(docs, std::vector<std::size_t>{0, 1, 2}, 2);
  CHECK(f[0] == f[1]);
}

TEST_CASE("tfidf matches a hand computation on three documents") {
  const TokenLists docs{{"a", "b", "a"}, {"b", "c"}, {"a", "c", "c", "d"}};
  TfidfVectorizer v(1);
  v.fit(docs);
  // Independent recomputation: df, idf = ln((1+N)/(1+df)) + 1, tf * idf, L2.
  std::map<std::string, int> df;
  for (const auto& d : docs) {
    std::map<std::string, int> seen;
    for (const auto& t : d) seen[t] = 1;
    for (const auto& [t, one] : seen) df[t] += one;
  }
  for (std::size_t k = 0; k < docs.size(); ++k) {
    std::map<std::string, double> w;
    for (const auto& t : docs[k]) w[t] += 1.0;
    double norm = 0.0;
    for (auto& [t, x] : w) {
      x *= std::log(4.0 / (1.0 + df[t])) + 1.0;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    const auto vec = v.transform(docs[k]);
    CHECK(vec.index.size() == w.size());
    for (const auto& [t, x] : w) {
      const auto idx = v.feature_index(t);
      REQUIRE(idx);
      const auto at = std::find(vec.index.begin(), vec.index.end(), *idx) - vec.index.begin();
      CHECK(std::abs(vec.value[at] - x / norm) < 1e-9);
    }
  }
}

TEST_CASE("tfidf bigrams, unseen n-grams, and empty input") {
  const TokenLists train{{"not", "good"}, {"very", "good"}};
  TfidfVectorizer v(2);
  v.fit(train);
  CHECK(v.feature_index("not good"));
  CHECK(v.feature_index("very good"));
  CHECK_FALSE(v.feature_index("good not"));
  const std::vector<std::string> unseen{"unknown", "words"};
  CHECK(v.transform(unseen).index.empty());
  CHECK(v.transform(std::vector<std::string>{}).index.empty());
  TfidfVectorizer empty(2);
  CHECK_THROWS_AS(empty.fit(TokenLists{}), ParameterError);
  CHECK_THROWS_AS(TfidfVectorizer(3), ParameterError);
}

TEST_CASE("tfidf restricted to a vocabulary keeps only in-vocabulary n-grams") {
  const Vocabulary vocab({"good", "movie"});
  const TokenLists train{{"good", "movie", "tonight"}};
  TfidfVectorizer v(2, &vocab);
  v.fit(train);
  CHECK(v.features() == std::vector<std::string>{"good", "good movie", "movie"});
}

TEST_CASE("tfidf vectors have unit norm for non-empty documents") {
  Rng rng(17);
  TokenLists docs;
  for (int d = 0; d < 40; ++d) {
    std::vector<std::string> doc;
    const auto len = 1 + rng.index(15);
    for (std::uint64_t t = 0; t < len; ++t) doc.push_back("w" + std::to_string(rng.index(25)));
    docs.push_back(doc);
  }
  TfidfVectorizer v(2);
  v.fit(docs);
  for (const auto& d : docs) CHECK(v.transform(d).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("load_stopwords ignores blank lines and whitespace") {
  testing::TempDir dir("stop");
  testing::write_file(dir / "s.txt", "  the \n\nwas\n");
  const auto s = load_stopwords(dir / "s.txt");
  CHECK(s.size() == 2);
  CHECK(s.contains("the"));
  CHECK(s.contains("was"));
  CHECK(default_stopwords().size() > 100);
}
