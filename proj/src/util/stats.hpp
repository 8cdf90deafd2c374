#pragma once

#include <span>

namespace omicause::stats {

// Upper tail P(X > x) of a chi-square distribution. dof may be fractional.
// Returns 1 for dof <= 0 or x <= 0.
double chi2_sf(double x, double dof);

// Upper tail of Gamma(shape, scale).
double gamma_sf(double x, double shape, double scale);

// Standard normal upper tail.
double normal_sf(double z);

double digamma(double x);

double mean(std::span<const double> v);

// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> v);

double median(std::span<const double> v);

}  // namespace omicause::stats
