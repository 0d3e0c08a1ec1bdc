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

#pragma once

// Independent reference computations for the statistics: brute-force ranks,
// long-double moments, ANOVA by total-sum-of-squares decomposition, and
// Boost quantiles and erfc in 50-digit arithmetic.

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <vector>

namespace daf::oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

// 1 + (# smaller) + (# equal - 1) / 2
inline std::vector<long double> brute_ranks(const std::vector<double>& v) {
  std::vector<long double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (double x : v) {
      less += x < v[i];
      equal += x == v[i];
    }
    r[i] = 1.0L + less + (equal - 1) / 2.0L;
  }
  return r;
}

template <class V>
long double pearson(const V& a, const V& b) {
  const std::size_t n = a.size();
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) ma += a[i], mb += b[i];
  ma /= n;
  mb /= n;
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return static_cast<double>(pearson(brute_ranks(a), brute_ranks(b)));
}

inline double ccc(const std::vector<double>& p, const std::vector<double>& t) {
  const std::size_t n = p.size();
  long double mp = 0, mt = 0;
  for (std::size_t i = 0; i < n; ++i) mp += p[i], mt += t[i];
  mp /= n;
  mt /= n;
  long double vp = 0, vt = 0, c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    vp += (p[i] - mp) * (p[i] - mp);
    vt += (t[i] - mt) * (t[i] - mt);
    c += (p[i] - mp) * (t[i] - mt);
  }
  vp /= n;
  vt /= n;
  c /= n;
  return static_cast<double>(2 * c / (vp + vt + (mp - mt) * (mp - mt)));
}

struct Icc {
  double icc31, icc3k;
  double ci31_low, ci31_high, ci3k_low, ci3k_high;
};

// Two-way ANOVA via SS_err = SS_total - SS_rows - SS_cols.
inline Icc icc(const std::vector<double>& values, std::size_t n, std::size_t k) {
  long double grand = 0;
  for (double v : values) grand += v;
  grand /= (n * k);
  long double ss_total = 0, ss_rows = 0, ss_cols = 0;
  for (double v : values) ss_total += (v - grand) * (v - grand);
  for (std::size_t i = 0; i < n; ++i) {
    long double m = 0;
    for (std::size_t r = 0; r < k; ++r) m += values[i * k + r];
    m /= k;
    ss_rows += k * (m - grand) * (m - grand);
  }
  for (std::size_t r = 0; r < k; ++r) {
    long double m = 0;
    for (std::size_t i = 0; i < n; ++i) m += values[i * k + r];
    m /= n;
    ss_cols += n * (m - grand) * (m - grand);
  }
  const long double df1 = n - 1.0L, df2 = (n - 1.0L) * (k - 1.0L);
  const long double bms = ss_rows / df1, ems = (ss_total - ss_rows - ss_cols) / df2;
  const long double f = bms / ems;
  boost::math::fisher_f_distribution<long double> f12(df1, df2), f21(df2, df1);
  const long double fl = f / boost::math::quantile(f12, 0.975L);
  const long double fu = f * boost::math::quantile(f21, 0.975L);
  const long double kk = k;
  Icc out;
  out.icc31 = static_cast<double>((bms - ems) / (bms + (kk - 1) * ems));
  out.icc3k = static_cast<double>((bms - ems) / bms);
  out.ci31_low = static_cast<double>((fl - 1) / (fl + kk - 1));
  out.ci31_high = static_cast<double>((fu - 1) / (fu + kk - 1));
  out.ci3k_low = static_cast<double>(1 - 1 / fl);
  out.ci3k_high = static_cast<double>(1 - 1 / fu);
  return out;
}

struct ZTest {
  double z, p;
};

inline ZTest fisher_z(double r1, double r2, std::size_t n) {
  const Big z1 = boost::multiprecision::atanh(Big(r1));
  const Big z2 = boost::multiprecision::atanh(Big(r2));
  const Big z = (z1 - z2) / boost::multiprecision::sqrt(Big(2) / Big(n - 3));
  const Big p = boost::math::erfc(boost::multiprecision::abs(z) / boost::multiprecision::sqrt(Big(2)));
  return {static_cast<double>(z), static_cast<double>(p)};
}

}  // namespace daf::oracle
