#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dsel/error.hpp"
#include "dsel/random.hpp"
#include "dsel/similarity.hpp"

using namespace dsel;

namespace {

constexpr double kLn2 = std::numbers::ln2;

TermDistribution dist(std::vector<double> p) { return TermDistribution{std::move(p), false}; }

std::vector<double> random_simplex(Rng& rng, std::size_t n, double zero_rate) {
  std::vector<double> p(n);
  double s = 0.0;
  for (double& x : p) s += x = rng.bernoulli(zero_rate) ? 0.0 : rng.uniform();
  if (s == 0.0) s += p[0] = 1.0;
  for (double& x : p) x /= s;
  return p;
}

std::vector<SparseVector> gaussian_cloud(Rng& rng, std::size_t n, std::size_t dim, double shift) {
  std::vector<SparseVector> out;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.normal() + shift;
    out.push_back(SparseVector::from_dense(v));
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("kl divergence examples") {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(kl_divergence(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5}) == doctest::Approx(kLn2));
  // 50-digit summation oracle.
  CHECK(std::abs(kl_divergence(p, q) - 0.14384103622589046) < 1e-12);
  const std::vector<double> p3{0.2, 0.5, 0.3}, q3{0.1, 0.1, 0.8};
  CHECK(std::abs(kl_divergence(p3, q3) - 0.6490996164255214) < 1e-12);
}

TEST_CASE("kl support violation is infinite") {
  CHECK(std::isinf(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0})));
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}), ParameterError);
}

TEST_CASE("js divergence examples") {
  const auto p = dist({0.5, 0.5}), q = dist({0.25, 0.75});
  CHECK(js_divergence(p, p).value == 0.0);
  CHECK(js_divergence(dist({1.0, 0.0}), dist({0.0, 1.0})).value == doctest::Approx(kLn2).epsilon(1e-14));
  // 50-digit summation oracle; see the notes for the stated 0.033889.
  CHECK(std::abs(js_divergence(p, q).value - 0.0338220755686052) < 1e-12);
  CHECK(std::abs(js_divergence(dist({0.2, 0.5, 0.3}), dist({0.1, 0.1, 0.8})).value - 0.1402277525888790) < 1e-12);
  const auto s = js_divergence(p, q);
  CHECK(s.metric == Metric::jensen_shannon);
  CHECK(s.orientation == Orientation::lower_is_more_similar);
  CHECK(s.utility() == -s.value);
}

TEST_CASE("js with an empty input is the empty sentinel") {
  TermDistribution empty{std::vector<double>(2, 0.0), true};
  CHECK(js_divergence(empty, dist({0.5, 0.5})).empty);
  CHECK(js_divergence(dist({0.5, 0.5}), empty).empty);
}

TEST_CASE("js is symmetric, bounded, and zero only on equality") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(40);
    const auto p = random_simplex(rng, n, 0.4), q = random_simplex(rng, n, 0.4);
    const double a = js_divergence_values(p, q), b = js_divergence_values(q, p);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(a <= kLn2 + 1e-12);
    bool equal = true;
    for (std::size_t i = 0; i < n; ++i) equal = equal && std::abs(p[i] - q[i]) <= 1e-12;
    if (!equal) CHECK(a > 0.0);
    CHECK(kl_divergence(p, p) == 0.0);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = 0.5 * (p[i] + q[i]);
    CHECK(kl_divergence(p, m) >= -1e-12);
    CHECK(std::abs(a - 0.5 * (kl_divergence(p, m) + kl_divergence(q, m))) < 1e-12);
  }
}

TEST_CASE("cosine examples") {
  const std::vector<double> a{1.0, 0.0}, b{0.0, 1.0}, c{1.0, 1.0}, z{0.0, 0.0};
  CHECK(cosine_values(c, c) == doctest::Approx(1.0));
  CHECK(cosine_values(a, b) == 0.0);
  CHECK(cosine_values(a, c) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(cosine_values(a, z) == 0.0);
  CHECK_THROWS_AS(cosine_values(a, std::vector<double>{1.0}), ParameterError);
  const auto s = cosine(DenseRepresentation{a}, DenseRepresentation{c});
  CHECK(s.orientation == Orientation::higher_is_more_similar);
  CHECK(s.utility() == s.value);
}

TEST_CASE("cosine is symmetric, scale-invariant, and bounded") {
  Rng rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(20);
    std::vector<double> a(n), b(n);
    for (double& x : a) x = rng.normal();
    for (double& x : b) x = rng.normal();
    const double v = cosine_values(a, b);
    CHECK(v == cosine_values(b, a));
    CHECK(std::abs(v) <= 1.0 + 1e-12);
    const double alpha = rng.uniform(0.01, 100.0);
    std::vector<double> sa = a;
    for (double& x : sa) x *= alpha;
    CHECK(std::abs(cosine_values(sa, b) - v) < 1e-12);
  }
}

TEST_CASE("metric names round-trip") {
  for (Metric m : {Metric::jensen_shannon, Metric::cosine, Metric::proxy_a}) CHECK(parse_metric(to_string(m)) == m);
  CHECK(orientation_of(Metric::jensen_shannon) == Orientation::lower_is_more_similar);
  CHECK(orientation_of(Metric::cosine) == Orientation::higher_is_more_similar);
  CHECK(orientation_of(Metric::proxy_a) == Orientation::higher_is_more_similar);
  CHECK_THROWS_AS(parse_metric("euclid"), ParameterError);
  CHECK(more_similar(0.1, 0.2, Orientation::lower_is_more_similar));
  CHECK(more_similar(0.2, 0.1, Orientation::higher_is_more_similar));
}

TEST_CASE("proxy-A on indistinguishable classes scores near one half") {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    const auto src = gaussian_cloud(rng, 400, 5, 0.0);
    const auto tgt = gaussian_cloud(rng, 200, 5, 0.0);
    const auto r = proxy_a_scores(src, tgt, 5, seed);
    CHECK(r.scores.size() == 400);
    for (double s : r.scores) CHECK((s > 0.0 && s < 1.0));
    total += mean_of(r.scores);
  }
  const double m = total / 10.0;
  CHECK(m >= 0.45);
  CHECK(m <= 0.55);
}

TEST_CASE("proxy-A separates separable clusters") {
  Rng rng(5);
  auto src = gaussian_cloud(rng, 500, 3, -4.0);
  const auto near = gaussian_cloud(rng, 50, 3, 4.0);
  src.insert(src.end(), near.begin(), near.end());
  const auto tgt = gaussian_cloud(rng, 500, 3, 4.0);
  const auto r = proxy_a_scores(src, tgt, 3, 7);
  std::vector<double> far_side(r.scores.begin(), r.scores.begin() + 500);
  std::vector<double> target_side(r.scores.begin() + 500, r.scores.end());
  CHECK(mean_of(target_side) > 0.9);
  CHECK(mean_of(far_side) < 0.1);
}

TEST_CASE("a source copy of a target example outranks unrelated sources") {
  Rng rng(9);
  auto src = gaussian_cloud(rng, 60, 4, -1.0);
  const auto tgt = gaussian_cloud(rng, 60, 4, 1.0);
  src.push_back(tgt[3]);
  const auto r = proxy_a_scores(src, tgt, 4, 3);
  std::vector<double> unrelated(r.scores.begin(), r.scores.end() - 1);
  CHECK(r.scores.back() > mean_of(unrelated));
}

TEST_CASE("fewer sources than targets uses all sources") {
  Rng rng(2);
  const auto src = gaussian_cloud(rng, 10, 2, 0.0);
  const auto tgt = gaussian_cloud(rng, 30, 2, 1.0);
  const auto r = proxy_a_scores(src, tgt, 2, 1);
  CHECK_FALSE(r.subsampled);
  CHECK(r.scores.size() == 10);
  CHECK_THROWS_AS(proxy_a_scores(std::span(src).first(1), tgt, 2, 1), ParameterError);
}

TEST_CASE("constant feature leaves the proxy-A ranking unchanged") {
  Rng rng(12);
  const auto src = gaussian_cloud(rng, 80, 3, -0.5);
  const auto tgt = gaussian_cloud(rng, 40, 3, 0.5);
  auto widen = [](const std::vector<SparseVector>& rows) {
    std::vector<SparseVector> out;
    for (const auto& r : rows) {
      auto d = r.to_dense(4);
      d[3] = 2.5;
      out.push_back(SparseVector::from_dense(d));
    }
    return out;
  };
  LogisticConfig tight;
  tight.max_iterations = 5000;
  tight.gradient_tol = 1e-10;
  const auto a = proxy_a_scores(src, tgt, 3, 4, tight).scores;
  const auto b = proxy_a_scores(widen(src), widen(tgt), 4, 4, tight).scores;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) < 1e-4);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[i] - a[j] > 1e-3) CHECK(b[i] > b[j]);
  }
}

TEST_CASE("logistic objective never increases") {
  Rng rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = gaussian_cloud(rng, 50, 6, 0.3);
    const auto b = gaussian_cloud(rng, 50, 6, -0.3);
    std::vector<SparseVector> rows(a);
    rows.insert(rows.end(), b.begin(), b.end());
    std::vector<int> y(100, 0);
    std::fill(y.begin(), y.begin() + 50, 1);
    DomainDiscriminator d;
    d.fit(rows, y, 6);
    const auto& h = d.objective_history();
    REQUIRE(h.size() >= 2);
    for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1] + 1e-8);
    for (double w : d.weights()) CHECK(std::isfinite(w));
  }
}

TEST_CASE("proxy-A distance") {
  CHECK(proxy_a_from_error(0.5) == 0.0);
  CHECK(proxy_a_from_error(0.0) == 2.0);
  CHECK(proxy_a_from_error(0.7) == 0.0);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(500 + seed);
    const auto src = gaussian_cloud(rng, 500, 5, 0.0);
    const auto tgt = gaussian_cloud(rng, 500, 5, 0.0);
    const double d = proxy_a_distance(src, tgt, 5, 0.3, seed);
    CHECK((d >= 0.0 && d <= 2.0));
    total += d;
  }
  CHECK(std::abs(total / 10.0) < 0.2);
  Rng rng(3);
  const auto src = gaussian_cloud(rng, 200, 3, -4.0);
  const auto tgt = gaussian_cloud(rng, 200, 3, 4.0);
  CHECK(proxy_a_distance(src, tgt, 3, 0.3, 1) > 1.8);
  CHECK_THROWS_AS(proxy_a_distance(src, tgt, 3, 0.0, 1), ParameterError);
}

TEST_CASE("conversions to sparse keep nonzeros") {
  const auto s = to_sparse(dist({0.0, 0.4, 0.6}));
  CHECK(s.index == std::vector<std::uint32_t>{1, 2});
  CHECK(to_sparse(DenseRepresentation{{1.0, 0.0, -2.0}}).nnz() == 2);
}
