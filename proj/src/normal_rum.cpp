#include "rankfit/normal_rum.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "rankfit/errors.hpp"
#include "rankfit/stats.hpp"

namespace rankfit {

namespace {

constexpr double kSdFloor = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_params(const NormalRUMParams& params, int m) {
    if (static_cast<int>(params.means.size()) != m ||
        static_cast<int>(params.sds.size()) != m) {
        throw DimensionError("parameter count does not match alternative count");
    }
    for (double sd : params.sds) {
        if (!(sd > 0.0)) throw ValidationError("sds must be positive");
    }
}

int ramped_samples(const MCEMConfig& cfg, int iter) {
    double raw = cfg.gibbs_samples * std::pow(cfg.gibbs_growth, iter);
    if (raw >= cfg.gibbs_cap) return cfg.gibbs_cap;
    return std::max(1, static_cast<int>(std::lround(raw)));
}

// Stratified resampling: one uniform per replicate, offsets evenly spaced.
void systematic_resample(const std::vector<double>& weights, double u0,
                         std::vector<int>& indices) {
    const size_t r = weights.size();
    double total = 0.0;
    for (double w : weights) total += w;
    indices.resize(r);
    double cum = weights[0];
    size_t j = 0;
    for (size_t i = 0; i < r; ++i) {
        double target = (u0 + static_cast<double>(i)) / static_cast<double>(r) * total;
        while (cum < target && j + 1 < r) cum += weights[++j];
        indices[i] = static_cast<int>(j);
    }
}

}  // namespace

GibbsStats gibbs_estep(const Ranking& ranking, const NormalRUMParams& params,
                       const MCEMConfig& cfg, Rng& rng,
                       std::vector<double>* state) {
    const int m = ranking.size();
    check_params(params, m);
    if (cfg.gibbs_samples < 1) throw ValidationError("gibbs_samples must be >= 1");
    if (cfg.burn_in < 0) throw ValidationError("burn_in must be >= 0");

    std::vector<double> x;
    if (state && static_cast<int>(state->size()) == m) {
        x = *state;
    } else {
        x.assign(static_cast<size_t>(m), 0.0);
        for (int t = 0; t < m; ++t) {
            x[static_cast<size_t>(ranking.at(t))] = 0.5 * m - t;
        }
    }

    std::vector<double> sum(static_cast<size_t>(m), 0.0);
    std::vector<double> sum_sq(static_cast<size_t>(m), 0.0);
    const int sweeps = cfg.burn_in + cfg.gibbs_samples;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int t = 0; t < m; ++t) {
            const int j = ranking.at(t);
            const double lo = t + 1 < m ? x[static_cast<size_t>(ranking.at(t + 1))] : -kInf;
            const double hi = t > 0 ? x[static_cast<size_t>(ranking.at(t - 1))] : kInf;
            x[static_cast<size_t>(j)] = truncated_normal_sample(
                params.means[static_cast<size_t>(j)],
                params.sds[static_cast<size_t>(j)], lo, hi, rng);
        }
#ifndef NDEBUG
        for (int t = 0; t + 1 < m; ++t) {
            assert(x[static_cast<size_t>(ranking.at(t))] >
                   x[static_cast<size_t>(ranking.at(t + 1))]);
        }
#endif
        if (sweep >= cfg.burn_in) {
            for (int j = 0; j < m; ++j) {
                sum[static_cast<size_t>(j)] += x[static_cast<size_t>(j)];
                sum_sq[static_cast<size_t>(j)] +=
                    x[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
            }
        }
    }

    if (state) *state = x;
    GibbsStats stats;
    stats.mean.resize(static_cast<size_t>(m));
    stats.mean_sq.resize(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        stats.mean[static_cast<size_t>(j)] =
            sum[static_cast<size_t>(j)] / cfg.gibbs_samples;
        stats.mean_sq[static_cast<size_t>(j)] =
            sum_sq[static_cast<size_t>(j)] / cfg.gibbs_samples;
    }
    return stats;
}

NormalRUMParams fit_normal_mcem(const Dataset& data, const MCEMConfig& cfg,
                                std::vector<NormalRUMParams>* trace) {
    const int m = data.m();
    const int n = data.n();
    if (n < 2) throw ValidationError("MC-EM needs at least 2 rankings");
    if (cfg.reference < 0 || cfg.reference >= m) {
        throw ValidationError("reference alternative out of range");
    }
    if (cfg.max_em_iters < 1) throw ValidationError("max_em_iters must be >= 1");

    NormalRUMParams params;
    params.means.assign(static_cast<size_t>(m), 0.0);
    params.sds.assign(static_cast<size_t>(m), 1.0);
    params.reference = cfg.reference;

    std::vector<Rng> rngs;
    rngs.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        rngs.push_back(Rng::stream(cfg.seed, static_cast<std::uint64_t>(i)));
    }
    std::vector<std::vector<double>> states(static_cast<size_t>(n));

    std::vector<double> mean_acc(static_cast<size_t>(m));
    std::vector<double> sq_acc(static_cast<size_t>(m));
    for (int iter = 0; iter < cfg.max_em_iters; ++iter) {
        MCEMConfig step_cfg = cfg;
        step_cfg.gibbs_samples = ramped_samples(cfg, iter);

        std::fill(mean_acc.begin(), mean_acc.end(), 0.0);
        std::fill(sq_acc.begin(), sq_acc.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            GibbsStats stats =
                gibbs_estep(data.ranking(i), params, step_cfg,
                            rngs[static_cast<size_t>(i)], &states[static_cast<size_t>(i)]);
            for (int j = 0; j < m; ++j) {
                mean_acc[static_cast<size_t>(j)] += stats.mean[static_cast<size_t>(j)];
                sq_acc[static_cast<size_t>(j)] += stats.mean_sq[static_cast<size_t>(j)];
            }
        }

        NormalRUMParams next;
        next.means.resize(static_cast<size_t>(m));
        next.sds.resize(static_cast<size_t>(m));
        next.reference = cfg.reference;
        for (int j = 0; j < m; ++j) {
            const double mu = mean_acc[static_cast<size_t>(j)] / n;
            const double var = sq_acc[static_cast<size_t>(j)] / n - mu * mu;
            double sd = std::sqrt(std::max(var, 0.0));
            if (sd < kSdFloor) {
                sd = kSdFloor;
                next.sd_floored = true;
            }
            next.means[static_cast<size_t>(j)] = mu;
            next.sds[static_cast<size_t>(j)] = sd;
        }

        // Re-pin the reference to (0, 1); the same affine map keeps the warm
        // chain states consistent with the new parameterization.
        const double shift = next.means[static_cast<size_t>(cfg.reference)];
        const double scale = next.sds[static_cast<size_t>(cfg.reference)];
        for (int j = 0; j < m; ++j) {
            next.means[static_cast<size_t>(j)] =
                (next.means[static_cast<size_t>(j)] - shift) / scale;
            next.sds[static_cast<size_t>(j)] /= scale;
        }
        next.means[static_cast<size_t>(cfg.reference)] = 0.0;
        next.sds[static_cast<size_t>(cfg.reference)] = 1.0;
        for (auto& x : states) {
            for (double& v : x) v = (v - shift) / scale;
        }

        double span = 1.0;
        double change = 0.0;
        for (int j = 0; j < m; ++j) {
            span = std::max({span, std::abs(params.means[static_cast<size_t>(j)]),
                             params.sds[static_cast<size_t>(j)]});
            change = std::max({change,
                               std::abs(next.means[static_cast<size_t>(j)] -
                                        params.means[static_cast<size_t>(j)]),
                               std::abs(next.sds[static_cast<size_t>(j)] -
                                        params.sds[static_cast<size_t>(j)])});
        }
        params = next;
        if (trace) trace->push_back(params);
        if (iter > 0 && change < cfg.rel_tol * span) break;
    }
    return params;
}

PairwiseMatrix normal_pairwise(const NormalRUMParams& params) {
    const int m = static_cast<int>(params.means.size());
    check_params(params, m);
    PairwiseMatrix out(m);
    for (int j = 0; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
            const double gap = params.means[static_cast<size_t>(j)] -
                               params.means[static_cast<size_t>(k)];
            const double spread =
                std::sqrt(params.sds[static_cast<size_t>(j)] * params.sds[static_cast<size_t>(j)] +
                          params.sds[static_cast<size_t>(k)] * params.sds[static_cast<size_t>(k)]);
            out.set_pair(j, k, normal_cdf(gap / spread));
        }
    }
    return out;
}

LoglikEstimate normal_ranking_loglik(const Ranking& ranking,
                                     const NormalRUMParams& params,
                                     int draws, std::uint64_t seed) {
    const int m = ranking.size();
    check_params(params, m);
    if (draws < 100) throw ValidationError("draws must be >= 100");

    constexpr int kReplicates = 10;
    const int r = std::max(10, draws / kReplicates);

    std::vector<double> prev(static_cast<size_t>(r));
    std::vector<double> logw(static_cast<size_t>(r));
    std::vector<double> trunc(static_cast<size_t>(r));
    std::vector<double> weights(static_cast<size_t>(r));
    std::vector<double> buffer(static_cast<size_t>(r));
    std::vector<int> picks;
    std::vector<double> replicate_logp(kReplicates);

    for (int k = 0; k < kReplicates; ++k) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k), 0x4c4cULL);
        double acc = 0.0;
        {
            const double mu = params.means[static_cast<size_t>(ranking.at(0))];
            const double sd = params.sds[static_cast<size_t>(ranking.at(0))];
            for (int i = 0; i < r; ++i) {
                prev[static_cast<size_t>(i)] = mu + sd * normal_quantile(rng.uniform_open());
                logw[static_cast<size_t>(i)] = 0.0;
            }
        }
        for (int t = 1; t < m; ++t) {
            const double mu = params.means[static_cast<size_t>(ranking.at(t))];
            const double sd = params.sds[static_cast<size_t>(ranking.at(t))];
            for (int i = 0; i < r; ++i) {
                double p = normal_cdf((prev[static_cast<size_t>(i)] - mu) / sd);
                trunc[static_cast<size_t>(i)] = std::max(p, 1e-300);
                logw[static_cast<size_t>(i)] += std::log(trunc[static_cast<size_t>(i)]);
            }
            if (t + 1 < m) {
                double peak = *std::max_element(logw.begin(), logw.end());
                double total = 0.0;
                double total_sq = 0.0;
                for (int i = 0; i < r; ++i) {
                    double w = std::exp(logw[static_cast<size_t>(i)] - peak);
                    weights[static_cast<size_t>(i)] = w;
                    total += w;
                    total_sq += w * w;
                }
                if (total * total / total_sq < 0.5 * r) {
                    acc += peak + std::log(total / r);
                    systematic_resample(weights, rng.uniform(), picks);
                    for (int i = 0; i < r; ++i) {
                        buffer[static_cast<size_t>(i)] =
                            prev[static_cast<size_t>(picks[static_cast<size_t>(i)])];
                    }
                    prev.swap(buffer);
                    for (int i = 0; i < r; ++i) {
                        buffer[static_cast<size_t>(i)] =
                            trunc[static_cast<size_t>(picks[static_cast<size_t>(i)])];
                    }
                    trunc.swap(buffer);
                    std::fill(logw.begin(), logw.end(), 0.0);
                }
                for (int i = 0; i < r; ++i) {
                    double q = rng.uniform_open() * trunc[static_cast<size_t>(i)];
                    prev[static_cast<size_t>(i)] = mu + sd * normal_quantile(q);
                }
            }
        }
        double peak = *std::max_element(logw.begin(), logw.end());
        double total = 0.0;
        for (int i = 0; i < r; ++i) total += std::exp(logw[static_cast<size_t>(i)] - peak);
        replicate_logp[static_cast<size_t>(k)] = acc + peak + std::log(total / r);
    }

    const double peak =
        *std::max_element(replicate_logp.begin(), replicate_logp.end());
    double mean_w = 0.0;
    for (double lp : replicate_logp) mean_w += std::exp(lp - peak);
    mean_w /= kReplicates;
    double var_w = 0.0;
    for (double lp : replicate_logp) {
        const double d = std::exp(lp - peak) - mean_w;
        var_w += d * d;
    }
    var_w /= kReplicates - 1;

    LoglikEstimate out;
    out.estimate = peak + std::log(mean_w);
    out.std_error = std::sqrt(var_w / kReplicates) / mean_w;
    return out;
}

LoglikEstimate normal_dataset_nll(const Dataset& data,
                                  const NormalRUMParams& params,
                                  int draws, std::uint64_t seed) {
    double nll = 0.0;
    double var = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        LoglikEstimate est = normal_ranking_loglik(
            data.ranking(i), params, draws,
            derive_seed(seed, static_cast<std::uint64_t>(i)));
        nll -= est.estimate;
        var += est.std_error * est.std_error;
    }
    return LoglikEstimate{nll, std::sqrt(var)};
}

std::vector<Ranking> sample_normal_rum(const NormalRUMParams& params,
                                       int count, std::uint64_t seed) {
    const int m = static_cast<int>(params.means.size());
    check_params(params, m);
    std::vector<Ranking> samples;
    samples.reserve(static_cast<size_t>(std::max(count, 0)));
    std::vector<double> x(static_cast<size_t>(m));
    for (int t = 0; t < count; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        for (int j = 0; j < m; ++j) {
            x[static_cast<size_t>(j)] = params.means[static_cast<size_t>(j)] +
                                        params.sds[static_cast<size_t>(j)] * rng.normal();
        }
        std::vector<int> order(static_cast<size_t>(m));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (x[static_cast<size_t>(a)] != x[static_cast<size_t>(b)]) {
                return x[static_cast<size_t>(a)] > x[static_cast<size_t>(b)];
            }
            return a < b;
        });
        samples.emplace_back(std::move(order));
    }
    return samples;
}

}  // namespace rankfit
