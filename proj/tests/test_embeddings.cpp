#include <doctest.h>

#include "dsel/embeddings.hpp"
#include "dsel/error.hpp"
#include "helpers.hpp"

using namespace dsel;

TEST_CASE("two-line file parses with dim 2") {
  const auto t = parse_embeddings("a 1 0\nb 0 1\n");
  CHECK(t.dim() == 2);
  CHECK(t.size() == 2);
  const auto a = t.lookup("a");
  REQUIRE(a);
  CHECK((*a)[0] == 1.0);
  CHECK((*a)[1] == 0.0);
  CHECK_FALSE(t.lookup("zzz"));
}

TEST_CASE("restriction keeps only vocabulary tokens and never changes vectors") {
  const Vocabulary vocab({"a"});
  const auto full = parse_embeddings("a 0.25 -1.5\nb 0 1\n");
  const auto t = parse_embeddings("a 0.25 -1.5\nb 0 1\n", &vocab);
  CHECK(t.size() == 1);
  CHECK_FALSE(t.lookup("b"));
  const auto a = t.lookup("a"), fa = full.lookup("a");
  CHECK(std::vector<double>(a->begin(), a->end()) == std::vector<double>(fa->begin(), fa->end()));
}

TEST_CASE("wrong arity is an error at its line") {
  try {
    parse_embeddings("a 1 0\nb 1 2 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("non-numeric field is an error") {
  CHECK_THROWS_AS(parse_embeddings("a 1 x\n"), ParseError);
  CHECK_THROWS_AS(parse_embeddings("a\n"), ParseError);
}

TEST_CASE("values round-trip the parsed decimals exactly") {
  const auto t = parse_embeddings("w 0.1 -2.5e-3 1e10\n");
  const auto w = t.lookup("w");
  CHECK((*w)[0] == 0.1);
  CHECK((*w)[1] == -2.5e-3);
  CHECK((*w)[2] == 1e10);
}

TEST_CASE("file tokens are lowercased; first duplicate wins") {
  const auto t = parse_embeddings("Good 1 1\ngood 2 2\n");
  CHECK(t.size() == 1);
  CHECK((*t.lookup("good"))[0] == 1.0);
  const auto cased = parse_embeddings("Good 1 1\n", nullptr, false);
  CHECK(cased.lookup("Good"));
  CHECK_FALSE(cased.lookup("good"));
}

TEST_CASE("load_embeddings reads a file and reports a missing one") {
  testing::TempDir dir("emb");
  testing::write_file(dir / "v.txt", "x 1 2 3\ny 4 5 6\n");
  CHECK(load_embeddings(dir / "v.txt").dim() == 3);
  CHECK_THROWS_AS(load_embeddings(dir / "missing.txt"), Error);
}

TEST_CASE("table rejects wrong-length vectors") {
  EmbeddingTable t(2);
  CHECK_THROWS_AS(t.add("a", {1.0}), ParameterError);
  t.add("a", {1.0, 2.0});
  CHECK_THROWS_AS(t.add("a", {1.0, 2.0}), ParameterError);
}
