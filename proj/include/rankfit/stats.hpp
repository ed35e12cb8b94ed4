#pragma once

#include "rankfit/rng.hpp"

namespace rankfit {

/// Standard normal CDF, accurate in both tails.
double normal_cdf(double z);

/// Upper tail probability P(Z > z).
double normal_sf(double z);

/// log of the standard normal CDF; safe for z far into the left tail where
/// normal_cdf underflows to zero.
double log_normal_cdf(double z);

/// Standard normal quantile (inverse CDF). Wichura's AS 241 rational
/// approximations; relative error below 1e-15 over the full double range.
double normal_quantile(double p);

/// One draw from Normal(mean, sd^2) conditioned to the open interval
/// (lo, hi). Either bound may be infinite. Remains well-behaved for
/// intervals far into a tail: the quantile is formed on whichever tail is
/// better conditioned, and one-sided draws 8+ deviations out switch to an
/// exponential rejection sampler.
double truncated_normal_sample(double mean, double sd, double lo, double hi, Rng& rng);

}  // namespace rankfit
