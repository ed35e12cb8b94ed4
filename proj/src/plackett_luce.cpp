#include "rankfit/plackett_luce.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankfit/errors.hpp"
#include "rankfit/rng.hpp"

namespace rankfit {

namespace {

void check_params(const Dataset& data, const PLParams& params) {
    if (static_cast<int>(params.strengths.size()) != data.m()) {
        throw DimensionError("strength count does not match dataset");
    }
}

// Tarjan SCC; components are emitted sinks-first, so the first component of
// a non-strongly-connected beats-digraph never beats anything outside it.
struct SccFinder {
    const std::vector<long long>& wins;
    int m;
    std::vector<int> index, low, stack;
    std::vector<bool> on_stack;
    std::vector<int> first_component;
    int counter = 0;

    explicit SccFinder(const std::vector<long long>& w, int m_)
        : wins(w), m(m_), index(static_cast<size_t>(m_), -1),
          low(static_cast<size_t>(m_), 0),
          on_stack(static_cast<size_t>(m_), false) {}

    void visit(int v) {
        index[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = counter++;
        stack.push_back(v);
        on_stack[static_cast<size_t>(v)] = true;
        for (int w = 0; w < m; ++w) {
            if (w == v || wins[static_cast<size_t>(v) * m + w] == 0) continue;
            if (index[static_cast<size_t>(w)] < 0) {
                visit(w);
                low[static_cast<size_t>(v)] =
                    std::min(low[static_cast<size_t>(v)], low[static_cast<size_t>(w)]);
            } else if (on_stack[static_cast<size_t>(w)]) {
                low[static_cast<size_t>(v)] =
                    std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
            }
        }
        if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
            std::vector<int> component;
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[static_cast<size_t>(w)] = false;
                component.push_back(w);
            } while (w != v);
            if (first_component.empty()) first_component = std::move(component);
        }
    }

    // Returns an alternative from a sink component, or -1 when strongly
    // connected.
    int losing_alternative() {
        for (int v = 0; v < m; ++v) {
            if (index[static_cast<size_t>(v)] < 0) visit(v);
        }
        if (static_cast<int>(first_component.size()) == m) return -1;
        return *std::min_element(first_component.begin(), first_component.end());
    }
};

void check_connected(const Dataset& data) {
    if (data.m() < 2) return;
    const auto wins = data.win_counts();
    SccFinder scc(wins, data.m());
    int loser = scc.losing_alternative();
    if (loser >= 0) {
        throw DegenerateDataError(
            "comparison graph is not strongly connected; alternative '" +
                data.labels()[static_cast<size_t>(loser)] +
                "' is never ranked above the rest",
            loser);
    }
}

void normalize(std::vector<double>& gamma) {
    double total = 0.0;
    for (double g : gamma) total += g;
    for (double& g : gamma) g /= total;
}

}  // namespace

std::vector<double> PLParams::means() const {
    std::vector<double> mu(strengths.size());
    for (size_t j = 0; j < strengths.size(); ++j) mu[j] = std::log(strengths[j]);
    return mu;
}

PLParams fit_pl_mm(const Dataset& data, double tol, int max_iter,
                   std::vector<double>* nll_trace) {
    const int m = data.m();
    const int n = data.n();
    check_connected(data);
    if (m == 1) {
        PLParams trivial;
        trivial.strengths = {1.0};
        if (nll_trace) nll_trace->push_back(0.0);
        return trivial;
    }

    // W_j = number of stages where j is the first choice of a remaining set;
    // only the last-placed item of a ranking is never chosen.
    std::vector<double> w(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < n; ++i) {
        const Ranking& r = data.ranking(i);
        for (int t = 0; t + 1 < m; ++t) w[static_cast<size_t>(r.at(t))] += 1.0;
    }

    PLParams params;
    params.strengths.assign(static_cast<size_t>(m), 1.0 / m);
    double prev_nll = pl_nll(data, params);
    if (nll_trace) nll_trace->push_back(prev_nll);

    std::vector<double> denom(static_cast<size_t>(m));
    std::vector<double> suffix(static_cast<size_t>(m));
    for (int iter = 0; iter < max_iter; ++iter) {
        std::fill(denom.begin(), denom.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            const Ranking& r = data.ranking(i);
            double total = 0.0;
            for (int t = m - 1; t >= 0; --t) {
                total += params.strengths[static_cast<size_t>(r.at(t))];
                suffix[static_cast<size_t>(t)] = total;
            }
            // inv_prefix(t) = sum_{s<=t} 1/suffix(s) for choice stages s.
            double inv_prefix = 0.0;
            std::vector<double>& cum = suffix;  // reuse in place
            for (int t = 0; t + 1 < m; ++t) {
                inv_prefix += 1.0 / suffix[static_cast<size_t>(t)];
                cum[static_cast<size_t>(t)] = inv_prefix;
            }
            for (int t = 0; t < m; ++t) {
                int stage = std::min(t, m - 2);
                denom[static_cast<size_t>(r.at(t))] += cum[static_cast<size_t>(stage)];
            }
        }
        for (int j = 0; j < m; ++j) {
            params.strengths[static_cast<size_t>(j)] =
                w[static_cast<size_t>(j)] / denom[static_cast<size_t>(j)];
        }
        normalize(params.strengths);

        double nll = pl_nll(data, params);
        if (nll_trace) nll_trace->push_back(nll);
        if (std::abs(prev_nll - nll) < tol * std::max(1.0, std::abs(nll))) break;
        prev_nll = nll;
    }
    return params;
}

double pl_nll(const Dataset& data, const PLParams& params) {
    check_params(data, params);
    const int m = data.m();
    double nll = 0.0;
    for (const Ranking& r : data.rankings()) {
        double suffix = 0.0;
        for (int t = m - 1; t >= 0; --t) {
            suffix += params.strengths[static_cast<size_t>(r.at(t))];
            if (t + 1 < m) {
                // log-sum over the remaining set minus log of the choice
                nll += std::log(suffix) -
                       std::log(params.strengths[static_cast<size_t>(r.at(t))]);
            }
        }
    }
    return nll;
}

PairwiseMatrix pl_pairwise(const PLParams& params) {
    const int m = static_cast<int>(params.strengths.size());
    PairwiseMatrix out(m);
    for (int j = 0; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
            double gj = params.strengths[static_cast<size_t>(j)];
            double gk = params.strengths[static_cast<size_t>(k)];
            out.set_pair(j, k, gj / (gj + gk));
        }
    }
    return out;
}

std::vector<Ranking> sample_pl(const PLParams& params, int count,
                               std::uint64_t seed) {
    const int m = static_cast<int>(params.strengths.size());
    std::vector<Ranking> samples;
    samples.reserve(static_cast<size_t>(std::max(count, 0)));
    for (int t = 0; t < count; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        std::vector<int> remaining(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) remaining[static_cast<size_t>(j)] = j;
        std::vector<int> order;
        order.reserve(static_cast<size_t>(m));
        while (!remaining.empty()) {
            double total = 0.0;
            for (int j : remaining) total += params.strengths[static_cast<size_t>(j)];
            double u = rng.uniform() * total;
            size_t pick = 0;
            double cum = params.strengths[static_cast<size_t>(remaining[0])];
            while (pick + 1 < remaining.size() && u > cum) {
                ++pick;
                cum += params.strengths[static_cast<size_t>(remaining[pick])];
            }
            order.push_back(remaining[pick]);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        samples.emplace_back(std::move(order));
    }
    return samples;
}

}  // namespace rankfit
