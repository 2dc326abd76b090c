#pragma once

#include <cstddef>
#include <vector>

namespace stratrd {

// Standard normal quantile, Wichura's AS241 rational approximation
// (|error| well below 1e-10 across (0, 1)).
double normal_quantile(double p);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// Upper tail of the chi-square distribution with 1 df:
// P(X >= x) = erfc(sqrt(x / 2)).
double chi2_1_sf(double x);

double mean(const std::vector<double>& values);

// Sample variance with n-1 denominator; 0 for fewer than two values.
double sample_variance(const std::vector<double>& values);

// Round half-to-even at `decimals` places.
double round_half_even(double value, int decimals);

} // namespace stratrd
