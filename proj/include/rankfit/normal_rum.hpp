#pragma once

#include <cstdint>
#include <vector>

#include "rankfit/rng.hpp"
#include "rankfit/types.hpp"

namespace rankfit {

/// Normal random utility model: alternative j realizes x_j = mu_j + eps_j
/// with eps_j ~ Normal(0, sd_j^2); sorting the realized utilities yields the
/// ranking. One reference alternative is pinned to mean 0, sd 1 to remove
/// the affine indeterminacy.
struct NormalRUMParams {
    std::vector<double> means;
    std::vector<double> sds;
    int reference = 0;
    /// True when some fitted sd hit the 1e-6 floor.
    bool sd_floored = false;
};

struct MCEMConfig {
    int gibbs_samples = 50;
    double gibbs_growth = 1.5;
    int gibbs_cap = 2000;
    int burn_in = 10;
    int max_em_iters = 200;
    double rel_tol = 1e-4;
    std::uint64_t seed = 0;
    int reference = 0;
};

/// Per-alternative sample mean and mean square of the latent utilities.
struct GibbsStats {
    std::vector<double> mean;
    std::vector<double> mean_sq;
};

/// Gibbs sweep chain over latent utilities consistent with the ranking:
/// x_{sigma(t)} is resampled from its normal truncated to the open interval
/// between the neighbours' current values (unbounded at the extremes).
/// Discards cfg.burn_in sweeps, then averages cfg.gibbs_samples sweeps.
/// When state is provided and sized m it warm-starts the chain and receives
/// the final utilities back.
GibbsStats gibbs_estep(const Ranking& ranking, const NormalRUMParams& params,
                       const MCEMConfig& cfg, Rng& rng,
                       std::vector<double>* state = nullptr);

/// Monte Carlo EM. E-step Gibbs chains are warm-started across iterations
/// and their per-iteration sample count ramps by cfg.gibbs_growth up to
/// cfg.gibbs_cap; the M-step pools means and variances; after each M-step
/// the parameters are re-pinned by the affine map sending the reference to
/// (0, 1), which leaves all predicted probabilities unchanged. Stops when
/// the largest relative parameter change drops below cfg.rel_tol or after
/// cfg.max_em_iters iterations. Deterministic given cfg.seed. Appends the
/// parameters after every iteration to *trace when provided.
NormalRUMParams fit_normal_mcem(const Dataset& data,
                                const MCEMConfig& cfg = {},
                                std::vector<NormalRUMParams>* trace = nullptr);

/// Marginal pairwise probabilities,
/// entry (j, k) = Phi((mu_j - mu_k) / sqrt(sd_j^2 + sd_k^2)).
PairwiseMatrix normal_pairwise(const NormalRUMParams& params);

struct LoglikEstimate {
    double estimate;
    double std_error;
};

/// Monte Carlo log probability of one ranking. Sequential importance
/// sampler over the utility chain: x_{sigma(1)} is drawn from its marginal,
/// each later x_{sigma(t)} from its normal truncated above by the previous
/// draw, and the truncation probabilities accumulate as the likelihood
/// weight (unbiased in weight space). Particles are resampled between
/// stages when the effective sample size halves, which keeps the weight
/// variance bounded on improbable rankings. The draw budget is split into
/// 10 independent replicates; the estimate is the log mean weight across
/// replicates and the standard error is the delta-method spread. draws must
/// be at least 100.
LoglikEstimate normal_ranking_loglik(const Ranking& ranking,
                                     const NormalRUMParams& params,
                                     int draws = 5000, std::uint64_t seed = 0);

/// Negative log likelihood of a dataset, summing normal_ranking_loglik over
/// rankings on independent per-ranking streams; std_error combines the
/// per-ranking errors in quadrature.
LoglikEstimate normal_dataset_nll(const Dataset& data,
                                  const NormalRUMParams& params,
                                  int draws = 5000, std::uint64_t seed = 0);

/// I.i.d. rankings: realize every utility independently and argsort
/// descending. Deterministic given the seed; one stream per sample.
std::vector<Ranking> sample_normal_rum(const NormalRUMParams& params,
                                       int count, std::uint64_t seed);

}  // namespace rankfit
