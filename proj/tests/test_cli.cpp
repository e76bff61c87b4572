#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "helpers.hpp"

namespace {

struct Run {
  int code = -1;
  std::string err;
};

Run dsel(const std::string& args, const std::filesystem::path& scratch) {
  const auto err = scratch / "stderr.txt";
  const std::string cmd = std::string(DSEL_CLI) + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = testing::read_file(err);
  return r;
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

constexpr const char* kSpec = R"({
  "name": "pair", "task": "binary", "seed": 4,
  "target": {"name": "tgt", "docs_per_label": 40},
  "sources": [
    {"name": "near", "overlap": 0.8, "docs_per_label": 60},
    {"name": "far", "overlap": 0.0, "docs_per_label": 60}
  ]
})";

// A small generated corpus shared by the command tests.
struct Workspace {
  testing::TempDir dir{"cli"};
  std::filesystem::path corpus;
  Workspace() {
    testing::write_file(dir / "spec.json", kSpec);
    const auto r = dsel("generate --spec " + (dir / "spec.json").string() + " -o " + (dir / "gen").string(), dir.path());
    REQUIRE(r.code == 0);
    corpus = dir / "gen" / "corpus.jsonl";
  }
  std::string base(const std::string& out) const {
    return "--corpus " + corpus.string() + " --task binary --set m=40 --set vocab_size=3000 -o " + (dir / out).string();
  }
};

}  // namespace

TEST_CASE("generate writes one file per domain plus the corpus, byte-stable") {
  Workspace ws;
  for (const char* f : {"tgt.jsonl", "near.jsonl", "far.jsonl", "corpus.jsonl", "scenario.json"})
    CHECK(std::filesystem::exists(ws.dir / "gen" / f));
  const auto meta = nlohmann::json::parse(testing::read_file(ws.dir / "gen" / "scenario.json"));
  CHECK(meta["target"] == "tgt");
  CHECK(meta["documents"] == 320);
  REQUIRE(dsel("generate --spec " + (ws.dir / "spec.json").string() + " -o " + (ws.dir / "gen2").string(),
               ws.dir.path()).code == 0);
  CHECK(testing::read_file(ws.dir / "gen" / "corpus.jsonl") == testing::read_file(ws.dir / "gen2" / "corpus.jsonl"));
}

TEST_CASE("generate --builtin writes both scenarios") {
  testing::TempDir dir("cli-builtin");
  REQUIRE(dsel("generate --builtin --seed 1 --embedding-dim 4 -o " + (dir / "cat").string(), dir.path()).code == 0);
  for (const char* s : {"distinct", "blended"}) {
    CHECK(std::filesystem::exists(dir / "cat" / s / "corpus.jsonl"));
    CHECK(std::filesystem::exists(dir / "cat" / s / "embeddings.txt"));
  }
  CHECK(std::filesystem::exists(dir / "cat" / "distinct" / "d00.jsonl"));
  CHECK(std::filesystem::exists(dir / "cat" / "blended" / "b7.jsonl"));
}

TEST_CASE("invalid generate requests exit with a usage error") {
  testing::TempDir dir("cli-badspec");
  testing::write_file(dir / "bad.json", R"({"target": {"name": "t", "overlap": 3}, "sources": []})");
  CHECK(dsel("generate --spec " + (dir / "bad.json").string() + " -o " + (dir / "o").string(), dir.path()).code == 1);
  testing::write_file(dir / "typo.json", R"({"target": {"name": "t", "overlpa": 0.1}, "sources": []})");
  CHECK(dsel("generate --spec " + (dir / "typo.json").string() + " -o " + (dir / "o").string(), dir.path()).code == 1);
  CHECK(dsel("generate -o " + (dir / "o").string(), dir.path()).code == 1);
  CHECK(dsel("", dir.path()).code == 1);
  CHECK(dsel("frobnicate", dir.path()).code == 1);
}

TEST_CASE("select writes the id list and a report with iterations, deterministically") {
  Workspace ws;
  const auto args = "select " + ws.base("sel") + " -t tgt --strategy subset:term_dist:js -n 50 --seed 7";
  REQUIRE(dsel(args, ws.dir.path()).code == 0);
  const auto ids = testing::read_file(ws.dir / "sel" / "selection.ids");
  CHECK(line_count(ids) == 50);
  CHECK(ids.find("tgt-") == std::string::npos);
  const auto report = nlohmann::json::parse(testing::read_file(ws.dir / "sel" / "selection.json"));
  CHECK(report["iterations"].size() == 3);
  CHECK(report["config"]["seed"] == 7);
  CHECK(report["config"]["m"] == 40);
  const auto first = testing::read_file(ws.dir / "sel" / "selection.json");
  REQUIRE(dsel(args, ws.dir.path()).code == 0);
  CHECK(testing::read_file(ws.dir / "sel" / "selection.json") == first);
  CHECK(testing::read_file(ws.dir / "sel" / "selection.ids") == ids);
}

TEST_CASE("unknown target and missing embeddings are reported") {
  Workspace ws;
  const auto r = dsel("select " + ws.base("x") + " -t nowhere --strategy domain:term_dist:js", ws.dir.path());
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown target domain") != std::string::npos);
  const auto e = dsel("select " + ws.base("x") + " -t tgt --strategy instance:embedding:cos", ws.dir.path());
  CHECK(e.code == 1);
  CHECK(e.err.find("embeddings") != std::string::npos);
  CHECK(dsel("select " + ws.base("x") + " -t tgt --embeddings /no/such/file", ws.dir.path()).code == 1);
}

TEST_CASE("data errors exit with code 2") {
  testing::TempDir dir("cli-data");
  testing::write_file(dir / "c.jsonl", "{\"id\": \"a\", \"text\": \"x\", \"domain\": \"d\", \"label\": \"positive\"}\nnot json\n");
  const auto r = dsel("select --corpus " + (dir / "c.jsonl").string() + " -t d -o " + (dir / "o").string(), dir.path());
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("evaluate adds both baselines and is byte-identical on rerun") {
  Workspace ws;
  const auto args = "evaluate " + ws.base("ev") +
                    " -t tgt --strategy subset:term_dist:js --strategy domain:term_dist:js -n 60 --runs 3 --seed 2";
  REQUIRE(dsel(args, ws.dir.path()).code == 0);
  const auto tsv = testing::read_file(ws.dir / "ev" / "results.tsv");
  const auto json = testing::read_file(ws.dir / "ev" / "results.json");
  CHECK(line_count(tsv) == 5);
  CHECK(tsv.find("\nrand\t") == std::string::npos);
  CHECK(tsv.find("tgt\trand\t") != std::string::npos);
  CHECK(tsv.find("tgt\tall\t") != std::string::npos);
  REQUIRE(dsel(args, ws.dir.path()).code == 0);
  CHECK(testing::read_file(ws.dir / "ev" / "results.tsv") == tsv);
  CHECK(testing::read_file(ws.dir / "ev" / "results.json") == json);
  const auto j = nlohmann::json::parse(json);
  CHECK(j["config"]["runs"] == 3);
  CHECK(j["results"].size() == 4);
}

TEST_CASE("evaluate without a target covers every labeled domain") {
  Workspace ws;
  REQUIRE(dsel("evaluate " + ws.base("all") + " --strategy instance:term_dist:js -n 40 --runs 1", ws.dir.path()).code ==
          0);
  const auto tsv = testing::read_file(ws.dir / "all" / "results.tsv");
  CHECK(line_count(tsv) == 1 + 3 * 3);
  CHECK(tsv.find("insufficient runs") != std::string::npos);
}

TEST_CASE("sweep writes one row per size and strategy") {
  Workspace ws;
  REQUIRE(dsel("sweep " + ws.base("sw") +
                   " -t tgt --strategy rand --strategy all --strategy subset:term_dist:js --n-values 20,40,80 --runs 2",
               ws.dir.path()).code == 0);
  CHECK(line_count(testing::read_file(ws.dir / "sw" / "sweep.tsv")) == 10);
  REQUIRE(dsel("sweep " + ws.base("sw1") + " -t tgt --strategy rand --n-values 30 --runs 2", ws.dir.path()).code == 0);
  CHECK(line_count(testing::read_file(ws.dir / "sw1" / "sweep.tsv")) == 2);
  CHECK(dsel("sweep " + ws.base("sw2") + " -t tgt --n-values 40,20", ws.dir.path()).code == 1);
}

TEST_CASE("config file values are overridden by flags") {
  Workspace ws;
  testing::write_file(ws.dir / "run.cfg", "task = binary\ntarget = tgt\nstrategies = rand\nn = 30\nseed = 5\nm = 40\n");
  REQUIRE(dsel("select -c " + (ws.dir / "run.cfg").string() + " --corpus " + ws.corpus.string() + " -n 12 -o " +
                   (ws.dir / "cfg").string(),
               ws.dir.path()).code == 0);
  const auto report = nlohmann::json::parse(testing::read_file(ws.dir / "cfg" / "selection.json"));
  CHECK(report["config"]["n"] == 12);
  CHECK(report["config"]["seed"] == 5);
  CHECK(line_count(testing::read_file(ws.dir / "cfg" / "selection.ids")) == 12);
  testing::write_file(ws.dir / "bad.cfg", "task = binary\nwhat = 1\n");
  const auto r = dsel("select -c " + (ws.dir / "bad.cfg").string() + " --corpus " + ws.corpus.string(), ws.dir.path());
  CHECK(r.code == 1);
  CHECK(r.err.find("config line 2") != std::string::npos);
}
