#include <doctest.h>

#include <cmath>
#include <set>

#include "dsel/error.hpp"
#include "dsel/experiment.hpp"
#include "dsel/synthetic.hpp"

using namespace dsel;

namespace {

Scenario small_scenario(std::uint64_t seed) {
  auto s = benchmark_suite(seed)[0];
  s.target.docs_per_label = 60;
  for (auto& src : s.sources) src.docs_per_label = 80;
  return s;
}

ExperimentSettings small_settings() {
  ExperimentSettings st;
  st.task = Task::binary;
  st.vocab_size = 2000;
  st.ae.hidden = 16;
  st.ae.epochs = 2;
  st.ae.batch_size = 32;
  st.base_seed = 3;
  return st;
}

SelectionConfig strategy(const char* spec, std::size_t n, std::size_t m = 50) {
  auto c = parse_strategy_spec(spec);
  c.n = n;
  c.m = m;
  return c;
}

}  // namespace

TEST_CASE("instance-level term distributions give identical accuracies in every run") {
  ExperimentContext ctx(small_scenario(1).build(), small_settings());
  const auto r = run_experiment(ctx, "target", strategy("instance:term_dist:js", 100), 4, 3);
  REQUIRE(r.accuracies.size() == 4);
  for (double a : r.accuracies) CHECK(a == r.accuracies.front());
  CHECK(r.std == 0.0);
  CHECK(r.seeds == std::vector<std::uint64_t>{3, 4, 5, 6});
}

TEST_CASE("experiment mean equals the arithmetic mean of its runs") {
  ExperimentContext ctx(small_scenario(2).build(), small_settings());
  const auto r = run_experiment(ctx, "target", strategy("rand", 120), 5, 10);
  long double s = 0;
  for (double a : r.accuracies) {
    CHECK((a >= 0.0 && a <= 1.0));
    s += a;
  }
  CHECK(std::abs(r.mean - static_cast<double>(s / 5)) <= 1e-12);
  CHECK(r.selected == 120);
  std::set<double> distinct(r.accuracies.begin(), r.accuracies.end());
  CHECK(distinct.size() > 1);
}

TEST_CASE("experiments are deterministic per base seed") {
  const Corpus c = small_scenario(3).build();
  ExperimentContext a(c, small_settings()), b(c, small_settings());
  for (const char* spec : {"subset:term_dist:js", "domain:term_dist:js", "instance:autoencoder:cos", "all"}) {
    const auto ra = run_experiment(a, "target", strategy(spec, 80), 2, 7);
    const auto rb = run_experiment(b, "target", strategy(spec, 80), 2, 7);
    CHECK(ra.accuracies == rb.accuracies);
  }
}

TEST_CASE("domain strategy records the chosen domain per run") {
  ExperimentContext ctx(small_scenario(4).build(), small_settings());
  const auto r = run_experiment(ctx, "target", strategy("domain:term_dist:js", 50), 2, 0);
  REQUIRE(r.chosen_domains.size() == 2);
  CHECK(r.chosen_domains[0] == "d90");
}

TEST_CASE("embedding representation needs a table") {
  const Corpus c = small_scenario(5).build();
  ExperimentContext ctx(c, small_settings());
  CHECK_THROWS_AS(ctx.select("target", strategy("instance:embedding:cos", 20)), ParameterError);
  ctx.set_embeddings(synthetic_embeddings(c, 12, 1));
  CHECK(ctx.select("target", strategy("instance:embedding:cos", 20)).chosen.size() == 20);
  CHECK(ctx.embedding_reps().size() == c.size());
}

TEST_CASE("validation errors") {
  ExperimentContext ctx(small_scenario(6).build(), small_settings());
  CHECK_THROWS_AS(ctx.pool("nowhere"), ValidationError);
  CHECK_THROWS_AS(run_experiment(ctx, "nowhere", strategy("rand", 10), 1, 0), ValidationError);
  CHECK_THROWS_AS(run_experiment(ctx, "target", strategy("rand", 10), 0, 0), ParameterError);
  CHECK_THROWS_AS(ctx.select("target", strategy("subset:term_dist:proxy_a", 10)), ParameterError);
  CHECK(ctx.select("target", strategy("instance:term_dist:proxy_a", 10)).chosen.size() == 10);
  CHECK(ctx.evaluation_set("target").size() == 120);
  for (std::size_t k : ctx.pool("target").items) CHECK(ctx.corpus()[k].domain != "target");
}

TEST_CASE("proxy-A subset selection runs behind the opt-in flag") {
  auto st = small_settings();
  st.allow_proxy_subset = true;
  ExperimentContext ctx(small_scenario(7).build(), st);
  CHECK(ctx.select("target", strategy("subset:term_dist:proxy_a", 40, 20)).chosen.size() == 40);
}

TEST_CASE("random baseline does not get worse with more data") {
  auto s = benchmark_suite(8)[0];
  ExperimentContext ctx(s.build(), [] {
    auto st = small_settings();
    st.vocab_size = 10000;
    return st;
  }());
  const auto small = run_experiment(ctx, "target", strategy("rand", 500), 10, 0);
  const auto large = run_experiment(ctx, "target", strategy("rand", 2000), 10, 0);
  CHECK(large.mean >= small.mean - 0.03);
}
