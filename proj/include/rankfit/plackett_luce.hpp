#pragma once

#include <cstdint>
#include <vector>

#include "rankfit/types.hpp"

namespace rankfit {

/// Plackett-Luce parameters: positive strengths normalized to sum 1.
struct PLParams {
    std::vector<double> strengths;

    /// Log-strengths, the Gumbel location parameters.
    std::vector<double> means() const;
};

/// Minorization-maximization MLE. Iterates
///   gamma_j <- W_j / sum_i sum_{t : j in R_{i,t}} (sum_{k in R_{i,t}} gamma_k)^{-1}
/// with W_j the number of times j is chosen first among a remaining set,
/// renormalizing each round, and stops when the relative NLL change drops
/// below tol or after max_iter rounds. The NLL never increases between
/// rounds; per-round values are appended to *nll_trace when provided.
/// Data whose beats-digraph is not strongly connected has no finite MLE and
/// raises a degenerate-data error naming an alternative in a losing group.
PLParams fit_pl_mm(const Dataset& data, double tol = 1e-9,
                   int max_iter = 10000,
                   std::vector<double>* nll_trace = nullptr);

/// Exact negative log likelihood,
/// sum_i sum_{t=1}^{m-1} [log sum_{k in R_{i,t}} gamma_k - log gamma_{sigma_i(t)}].
double pl_nll(const Dataset& data, const PLParams& params);

/// Marginal pairwise probabilities, entry (j, k) = gamma_j / (gamma_j + gamma_k).
PairwiseMatrix pl_pairwise(const PLParams& params);

/// I.i.d. samples by sequential choice without replacement proportional to
/// the strengths. Deterministic given the seed; one stream per sample.
std::vector<Ranking> sample_pl(const PLParams& params, int count,
                               std::uint64_t seed);

}  // namespace rankfit
