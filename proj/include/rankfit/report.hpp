#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankfit/mallows.hpp"
#include "rankfit/normal_rum.hpp"
#include "rankfit/plackett_luce.hpp"
#include "rankfit/types.hpp"

namespace rankfit {

enum class ModelKind { mallows, pl, normal };

std::string model_name(ModelKind kind);

/// Everything the diagnostic figures need for one fitted model.
struct FitReport {
    std::string model;
    double nll = 0.0;
    double nll_std_error = 0.0;  // zero for exact likelihoods
    Ranking modal;
    PairwiseMatrix pairwise;
    PairwiseMatrix empirical;
    /// Row-major m x m, model minus empirical, original coordinates.
    std::vector<double> deviation;
    /// Model probability of each adjacent pair of the modal ordering.
    std::vector<double> adjacent_probs;
    /// Summary over the strict upper triangle in modal ordering.
    double mean_abs_deviation = 0.0;
    double max_abs_deviation = 0.0;
    std::optional<MallowsParams> mallows_params;
    std::optional<PLParams> pl_params;
    std::optional<NormalRUMParams> normal_params;
};

Ranking modal_ordering(const MallowsParams& params);
Ranking modal_ordering(const PLParams& params);
Ranking modal_ordering(const NormalRUMParams& params);

/// Most frequent ranking among sampled ones; intended for m small enough
/// that the mode is actually visited (the reported orderings use the
/// means-sorted rule instead). Ties go to the lexicographically smallest.
Ranking monte_carlo_modal(const NormalRUMParams& params, int samples = 100000,
                          std::uint64_t seed = 0);

/// Elementwise model minus empirical; antisymmetric, entries in [-1, 1].
std::vector<double> deviation_matrix(const PairwiseMatrix& model,
                                     const PairwiseMatrix& empirical);

/// Model probability of each pair (ordering[i], ordering[i+1]).
std::vector<double> adjacent_pair_report(const PairwiseMatrix& pairwise,
                                         const Ranking& ordering);
std::vector<double> adjacent_pair_report(const MallowsParams& params,
                                         const Ranking& ordering);
std::vector<double> adjacent_pair_report(const PLParams& params,
                                         const Ranking& ordering);
std::vector<double> adjacent_pair_report(const NormalRUMParams& params,
                                         const Ranking& ordering);

struct CompareOptions {
    int draws = 5000;
    KemenyMethod kemeny = KemenyMethod::auto_choose;
    double pl_tol = 1e-9;
    int pl_max_iter = 10000;
    /// Gibbs schedule and reference pin for the normal fit; its seed field
    /// is ignored in favor of the seed passed to compare_models.
    MCEMConfig mcem;
};

/// Fits each requested model and assembles its report. Exact NLL for the
/// Mallows and Plackett-Luce models, Monte Carlo NLL with standard error
/// for the normal model.
std::vector<FitReport> compare_models(const Dataset& data,
                                      const std::vector<ModelKind>& kinds,
                                      std::uint64_t seed,
                                      const CompareOptions& options = {});

struct DifficultyLevel {
    std::string label;
    FitReport report;
};

struct DifficultySweep {
    std::vector<DifficultyLevel> levels;
    /// Per level, the m-1 adjacent probabilities along the display ordering.
    std::vector<std::vector<double>> adjacent_prob_lines;
};

/// Fits one model per labelled group. When truth is provided it is used as
/// the display ordering for the adjacent-probability lines; otherwise each
/// level uses its own modal ordering.
DifficultySweep difficulty_sweep(
    const std::vector<std::pair<std::string, Dataset>>& groups, ModelKind kind,
    std::uint64_t seed, const CompareOptions& options = {},
    const Ranking* truth = nullptr);

enum class HeatmapFormat { csv, svg };

/// Writes a matrix reordered by the given ordering. CSV carries a label
/// header row and column and 6-decimal fixed-point cells, upper triangle
/// only when probability is set; SVG annotates cells to 3 decimals with a
/// sequential palette for probabilities and a diverging one for signed
/// matrices.
void heatmap_emit(const std::vector<double>& values, int m, bool probability,
                  const Ranking& ordering,
                  const std::vector<std::string>& labels,
                  const std::string& path, HeatmapFormat format);
void heatmap_emit(const PairwiseMatrix& mat, const Ranking& ordering,
                  const std::vector<std::string>& labels,
                  const std::string& path, HeatmapFormat format);

}  // namespace rankfit
