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

namespace daf::stats {

// Quantiles are found by bisection carried to full double precision.

// I_x(a, b), continued fraction (modified Lentz).
double regularized_incomplete_beta(double a, double b, double x);

double f_cdf(double x, double d1, double d2);
// Smallest x with f_cdf(x) >= p, by bisection on the beta variable.
double f_quantile(double p, double d1, double d2);

// P(|Z| >= |z|) for standard normal Z.
double normal_two_sided_p(double z);
double normal_cdf(double z);
// By bisection on erfc.
double normal_quantile(double p);

}  // namespace daf::stats
