#pragma once

#include <cstdint>
#include <vector>

#include "rankfit/rng.hpp"
#include "rankfit/types.hpp"

namespace rankfit {

/// Mallows model: P(sigma) decays geometrically in the Kendall-tau distance
/// from a reference ranking sigma*, with noise p in (0.5, 1] and derived
/// dispersion phi = (1 - p) / p.
struct MallowsParams {
    Ranking reference;
    double p = 1.0;
    double phi = 0.0;
    /// True when the data pushed p to the open boundary just above 0.5.
    bool clamped = false;
};

enum class KemenyMethod { exact, local_search, auto_choose };

/// Ranking minimizing the total Kendall-tau distance to the dataset. Exact
/// mode runs a subset dynamic program, feasible for m <= 16; local-search
/// mode refines a Borda-count start by adjacent transpositions. Ties are
/// broken toward the lexicographically smallest index sequence.
Ranking kemeny_rank(const Dataset& data,
                    KemenyMethod method = KemenyMethod::auto_choose);

/// Total Kendall-tau distance from every ranking in the dataset to order.
long long total_kendall_distance(const Dataset& data, const Ranking& order);

/// log Z_m(phi), Z_m(phi) = prod_{i=1}^{m} sum_{z=0}^{i-1} phi^z.
double mallows_log_z(double phi, int m);

/// MLE of the noise parameter given a fixed reference, by golden-section
/// search on phi in [0, 1) to relative tolerance 1e-9. If the mean observed
/// distance reaches the uniform-limit expectation m(m-1)/4, p is clamped to
/// the boundary and flagged.
MallowsParams fit_phi(const Dataset& data, const Ranking& reference);

/// Two-stage MLE: Kemeny reference first, then the dispersion.
MallowsParams fit_mallows(const Dataset& data,
                          KemenyMethod method = KemenyMethod::auto_choose);

/// Exact negative log likelihood, sum_i [log Z_m(phi) - d(sigma_i, sigma*)
/// log phi]. When phi = 0 and some ranking differs from the reference the
/// likelihood is zero; returns a maximal finite value and sets *degenerate
/// when provided.
double mallows_nll(const Dataset& data, const MallowsParams& params,
                   bool* degenerate = nullptr);

/// Marginal pairwise probabilities. The pair at reference positions (k, l),
/// c = l - k > 0, gets
///   [sum_{z=1}^{c} z phi^{z-1}] /
///   ([sum_{z=1}^{c} phi^{z-1}] * [sum_{z=0}^{c} phi^z]),
/// which depends only on c; the transpose holds the complements.
PairwiseMatrix mallows_pairwise(const MallowsParams& params);

/// I.i.d. Mallows samples by repeated insertion: the item at reference
/// position i is inserted at displacement j above its reference slot with
/// probability proportional to phi^j. Deterministic given the seed; sample t
/// uses its own stream so partitioned generation matches serial output.
std::vector<Ranking> sample_mallows(const MallowsParams& params, int count,
                                    std::uint64_t seed);

}  // namespace rankfit
