/* Copyright 2026 The DAF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <cmath>
#include <numeric>

#include "daf/common/rng.hpp"
#include "daf/common/error.hpp"
#include "daf/stats/correlation.hpp"
#include "daf/stats/distributions.hpp"
#include "daf/stats/histogram.hpp"
#include "daf/stats/ratings.hpp"
#include "daf/stats/report.hpp"
#include "daf/stats/ztest.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace daf;
using namespace daf::stats;

namespace {

std::vector<double> normals(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = standard_normal(rng);
  return v;
}

// Integers in [-2, 2], so ties are frequent.
std::vector<double> ordinal(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = std::floor(uniform(rng, -2.0, 3.0));
  return v;
}

RatingTable noisy_table(std::size_t n, std::size_t k, double noise_sd, Rng& rng) {
  RatingTable t{n, k, std::vector<double>(n * k), Attribute::kCA};
  for (std::size_t i = 0; i < n; ++i) {
    const double target = standard_normal(rng);
    for (std::size_t r = 0; r < k; ++r) t.values[i * k + r] = target + 0.3 * r + noise_sd * standard_normal(rng);
  }
  return t;
}

}  // namespace

TEST_CASE("F distribution against Boost") {
  for (double d1 : {1.0, 2.0, 5.0, 29.0, 1199.0}) {
    for (double d2 : {2.0, 7.0, 58.0, 2398.0}) {
      boost::math::fisher_f_distribution<long double> dist(d1, d2);
      for (double p : {0.025, 0.5, 0.975}) {
        const double q = static_cast<double>(boost::math::quantile(dist, static_cast<long double>(p)));
        CHECK(f_quantile(p, d1, d2) == doctest::Approx(q).epsilon(1e-10));
      }
      for (double x : {0.1, 1.0, 3.5}) {
        const double c = static_cast<double>(boost::math::cdf(dist, static_cast<long double>(x)));
        CHECK(std::fabs(f_cdf(x, d1, d2) - c) < 1e-12);
      }
    }
  }
}

TEST_CASE("normal tail and quantile against 50-digit erfc") {
  for (double z : {0.0, 0.3, 1.0, 1.959963984540054, 2.1809, 3.5, 6.0}) {
    const oracle::Big p = boost::math::erfc(oracle::Big(z) / boost::multiprecision::sqrt(oracle::Big(2)));
    CHECK(normal_two_sided_p(z) == doctest::Approx(static_cast<double>(p)).epsilon(1e-13));
    CHECK(normal_two_sided_p(-z) == normal_two_sided_p(z));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("average ranks handle ties") {
  const std::vector<double> v{3.0, 1.0, 3.0, 2.0, 3.0};
  CHECK(average_ranks(v) == std::vector<double>{4.0, 1.0, 4.0, 2.0, 4.0});
}

TEST_CASE("spearman: stated cases and brute-force oracle") {
  Rng rng(1);
  const auto a = normals(50, rng);
  std::vector<double> e(a.size());
  std::transform(a.begin(), a.end(), e.begin(), [](double x) { return std::exp(x); });
  CHECK(spearman_rho(a, e) == doctest::Approx(1.0).epsilon(1e-15));
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  auto reversed = sorted;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(spearman_rho(sorted, reversed) == doctest::Approx(-1.0).epsilon(1e-15));
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 60;
    const auto x = ordinal(n, rng);
    auto y = ordinal(n, rng);
    for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) continue;
    CHECK(std::fabs(spearman_rho(x, y) - oracle::spearman(x, y)) < 1e-12);
    // Strictly increasing transforms leave rho unchanged.
    std::vector<double> t(n);
    std::transform(x.begin(), x.end(), t.begin(), [](double v) { return std::cbrt(v) + 3 * v; });
    CHECK(spearman_rho(t, y) == spearman_rho(x, y));
  }
  CHECK_THROWS_AS(spearman_rho(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), NumericError);
}

TEST_CASE("pearson matrix: symmetric, unit diagonal, oracle, sampling bound") {
  Rng rng(2);
  std::array<std::vector<double>, 4> cols;
  for (auto& c : cols) c = normals(10000, rng);
  const auto m = pearson_matrix(cols);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(m[i][i] == 1.0);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(m[i][j] == m[j][i]);
      if (i != j) {
        CHECK(std::fabs(m[i][j]) < 0.05);
        CHECK(std::fabs(m[i][j] - static_cast<double>(oracle::pearson(cols[i], cols[j]))) < 1e-12);
      }
    }
  }
  cols[2].assign(10000, 0.5);
  CHECK_THROWS_AS(pearson_matrix(cols), NumericError);
}

TEST_CASE("standardize_labels: stated cases, oracle, per-rater moments") {
  RatingTable same{4, 3, {1, 1, 1, 2, 2, 2, -1, -1, -1, 0, 0, 0}, Attribute::kPV};
  const auto s = standardize_labels(same);
  const double mean = 0.5, sd = std::sqrt((0.25 + 2.25 + 2.25 + 0.25) / 4);
  const double col[] = {1, 2, -1, 0};
  for (int i = 0; i < 4; ++i) CHECK(s[i] == doctest::Approx((col[i] - mean) / sd).epsilon(1e-14));

  RatingTable unit{2, 2, {1, -1, -1, 1}, Attribute::kCA};
  CHECK(standardize_labels(unit) == std::vector<double>{0.0, 0.0});

  Rng rng(3);
  auto t = noisy_table(100, 3, 0.7, rng);
  const auto got = standardize_labels(t);
  std::vector<long double> expect(100, 0.0L);
  for (std::size_t r = 0; r < 3; ++r) {
    long double m = 0, ss = 0;
    for (std::size_t i = 0; i < 100; ++i) m += t.at(i, r);
    m /= 100;
    for (std::size_t i = 0; i < 100; ++i) ss += (t.at(i, r) - m) * (t.at(i, r) - m);
    const long double sdr = std::sqrt(ss / 100);
    long double zm = 0, zs = 0;
    for (std::size_t i = 0; i < 100; ++i) {
      const long double z = (t.at(i, r) - m) / sdr;
      expect[i] += z / 3;
      zm += z;
    }
    zm /= 100;
    for (std::size_t i = 0; i < 100; ++i) zs += ((t.at(i, r) - m) / sdr - zm) * ((t.at(i, r) - m) / sdr - zm);
    CHECK(std::fabs(static_cast<double>(zm)) < 1e-10);
    CHECK(std::fabs(static_cast<double>(std::sqrt(zs / 100)) - 1.0) < 1e-8);
  }
  for (std::size_t i = 0; i < 100; ++i) CHECK(std::fabs(got[i] - static_cast<double>(expect[i])) < 1e-12);

  RatingTable flat{3, 2, {1, 0, 1, 1, 1, 2}, Attribute::kCA};
  CHECK_THROWS_AS(standardize_labels(flat), NumericError);
}

TEST_CASE("icc: perfect agreement, ANOVA oracle, form ordering") {
  RatingTable same{4, 3, {1, 1, 1, 2, 2, 2, -1, -1, -1, 0, 0, 0}, Attribute::kCA};
  CHECK(icc(same, IccForm::kIcc31).estimate == 1.0);
  CHECK(icc(same, IccForm::kIcc3k).estimate == 1.0);
  RatingTable dead{3, 2, {1, 1, 1, 1, 1, 1}, Attribute::kCA};
  CHECK_THROWS_AS(icc(dead, IccForm::kIcc31), NumericError);

  Rng rng(4);
  // Signal variance 1, noise variance 0.25: SNR 4:1.
  const auto t = noisy_table(500, 3, 0.5, rng);
  const auto o = oracle::icc(t.values, 500, 3);
  const auto a = icc(t, IccForm::kIcc31), b = icc(t, IccForm::kIcc3k);
  CHECK(std::fabs(a.estimate - o.icc31) < 1e-12);
  CHECK(std::fabs(b.estimate - o.icc3k) < 1e-12);
  CHECK(std::fabs(a.ci_low - o.ci31_low) < 1e-9);
  CHECK(std::fabs(a.ci_high - o.ci31_high) < 1e-9);
  CHECK(std::fabs(b.ci_low - o.ci3k_low) < 1e-9);
  CHECK(std::fabs(b.ci_high - o.ci3k_high) < 1e-9);
  CHECK(a.estimate == doctest::Approx(0.8).epsilon(0.05));
  CHECK(b.estimate >= a.estimate);
  CHECK(a.ci_low < a.estimate);
  CHECK(a.estimate < a.ci_high);
}

TEST_CASE("z-test: equal correlations, erfc oracle, antisymmetry, a near-threshold comparison") {
  const auto eq = z_test_corr_diff(0.3, 0.3, 100);
  CHECK(eq.z == 0.0);
  CHECK(eq.p == 1.0);
  const auto t = z_test_corr_diff(0.5, 0.4, 1000);
  const auto o = oracle::fisher_z(0.5, 0.4, 1000);
  CHECK(std::fabs(t.p - o.p) < 1e-10);
  CHECK(std::fabs(t.z - o.z) < 1e-10);
  const auto s = z_test_corr_diff(0.4, 0.5, 1000);
  CHECK(s.z == -t.z);
  CHECK(s.p == t.p);
  // 54.7% vs 53.0% over 16593 instances: significant at 0.05 but not 0.001.
  const auto near = z_test_corr_diff(0.547, 0.530, 16593);
  CHECK(near.z == doctest::Approx(2.1809).epsilon(1e-3));
  CHECK(near.significant_05());
  CHECK_FALSE(near.significant_001());
  CHECK(near.dependent_samples);
  CHECK_THROWS_AS(z_test_corr_diff(1.0, 0.2, 100), NumericError);
  CHECK_THROWS_AS(z_test_corr_diff(0.1, 0.2, 3), ContractError);
}

TEST_CASE("histogram: constant input, one per bin, conservation") {
  const std::vector<double> c(7, 2.5);
  const auto hc = histogram(c, 4);
  CHECK(hc.counts[0] == 7);
  CHECK(std::count(hc.counts.begin(), hc.counts.end(), 0u) == 3);
  std::vector<double> grid(25);
  std::iota(grid.begin(), grid.end(), -3.0);
  for (std::size_t c : histogram(grid, 25).counts) CHECK(c == 1);
  Rng rng(5);
  const auto h = histogram(normals(10000, rng), 20);
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == 10000);
  CHECK(h.edges.size() == 21);
  CHECK(histogram_csv(hc).rfind("edge,count\n", 0) == 0);
  CHECK_THROWS_AS(histogram(std::vector<double>{}, 3), ContractError);
}

TEST_CASE("eval report arithmetic and JSON round-trip") {
  EvalReport r;
  r.model = "ATT(R)+DROP(CR)";
  r.task = "CA";
  r.fold_rho = {0.5, 0.6, 0.55, 0.45, 0.62};
  summarize(r);
  const long double m = (0.5L + 0.6L + 0.55L + 0.45L + 0.62L) / 5;
  long double ss = 0;
  for (double v : r.fold_rho) ss += (v - m) * (v - m);
  CHECK(std::fabs(r.mean_rho - static_cast<double>(m)) < 1e-12);
  CHECK(std::fabs(r.sd_rho - static_cast<double>(std::sqrt(ss / 4))) < 1e-12);
  r.pooled_rho = 0.54;
  r.pooled_n = 1200;
  const auto back = report_from_json(report_to_json(r));
  CHECK(back.fold_rho == r.fold_rho);
  CHECK(back.mean_rho == r.mean_rho);
  CHECK(back.pooled_n == 1200);
  auto other = r;
  other.model = "ATT(NO)+DROP(CR)";
  other.pooled_rho = 0.5;
  const auto rows = compare_reports({r, other});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].test.z == doctest::Approx(oracle::fisher_z(0.54, 0.5, 1200).z).epsilon(1e-12));
}

TEST_CASE("annotation CSV parsing") {
  const std::string csv =
      "instance_id,dyad_id,rater_id,CA,PA,CV,PV\n"
      "i2,d1,r1,1,0,-1,2\n"
      "i1,d1,r2,0,0,0,0\n"
      "i1,d1,r1,2,1,1,1\n"
      "i2,d1,r2,-2,1,0,0\n";
  const auto a = parse_annotations(csv);
  CHECK(a.instance_ids == std::vector<std::string>{"i1", "i2"});
  CHECK(a.rater_ids == std::vector<std::string>{"r1", "r2"});
  CHECK(a.tables[0].at(0, 0) == 2.0);
  CHECK(a.tables[0].at(1, 1) == -2.0);
  CHECK(a.tables[3].at(1, 0) == 2.0);
  CHECK_THROWS_AS(parse_annotations("instance_id,dyad_id,rater_id,CA,PA,CV,PV\ni1,d1,r1,3,0,0,0\n"), InputError);
  CHECK_THROWS_AS(parse_annotations("instance_id,dyad_id,rater_id,CA,PA,CV,PV\n"
                                    "i1,d1,r1,1,0,0,0\ni2,d1,r2,1,0,0,0\n"),
                  InputError);
  CHECK_THROWS_AS(parse_annotations("instance_id,dyad_id,CA,PA,CV,PV\ni1,d1,1,0,0,0\n"), InputError);
}
