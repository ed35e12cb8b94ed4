#include "rankfit/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rankfit/errors.hpp"

namespace rankfit {

namespace {

// Cost of placing j directly after the alternatives in prefix (bitmask):
// every ranking that puts a still-unplaced k above j disagrees once.
long long placement_cost(const std::vector<long long>& wins, int m,
                         unsigned prefix, int j) {
    long long cost = 0;
    for (int k = 0; k < m; ++k) {
        if (k == j || ((prefix >> k) & 1u)) continue;
        cost += wins[static_cast<size_t>(k) * m + j];
    }
    return cost;
}

Ranking kemeny_exact(const Dataset& data) {
    const int m = data.m();
    if (m > 16) {
        throw CapacityError(
            "exact Kemeny is limited to m <= 16; use local-search");
    }
    const auto wins = data.win_counts();
    const unsigned full = (1u << m) - 1u;

    // g[S] = optimal remaining cost once the set S is already placed on top.
    std::vector<long long> g(static_cast<size_t>(full) + 1);
    g[full] = 0;
    for (unsigned s = full; s-- > 0;) {
        long long best = std::numeric_limits<long long>::max();
        for (int j = 0; j < m; ++j) {
            if ((s >> j) & 1u) continue;
            long long c = placement_cost(wins, m, s, j) + g[s | (1u << j)];
            best = std::min(best, c);
        }
        g[s] = best;
    }

    std::vector<int> order;
    order.reserve(static_cast<size_t>(m));
    unsigned s = 0;
    while (s != full) {
        for (int j = 0; j < m; ++j) {
            if ((s >> j) & 1u) continue;
            if (placement_cost(wins, m, s, j) + g[s | (1u << j)] == g[s]) {
                order.push_back(j);
                s |= 1u << j;
                break;
            }
        }
    }
    return Ranking(std::move(order));
}

Ranking kemeny_local_search(const Dataset& data) {
    const int m = data.m();
    const auto wins = data.win_counts();

    // Borda start: sort by total rank position, ties toward smaller index.
    std::vector<long long> score(static_cast<size_t>(m), 0);
    for (const Ranking& r : data.rankings()) {
        for (int pos = 0; pos < m; ++pos) score[static_cast<size_t>(r.at(pos))] += pos;
    }
    std::vector<int> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return score[static_cast<size_t>(a)] < score[static_cast<size_t>(b)];
    });

    // Adjacent transpositions; on equal cost prefer the smaller index first,
    // so (cost, sequence) strictly decreases and the loop terminates.
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i + 1 < m; ++i) {
            int a = order[static_cast<size_t>(i)];
            int b = order[static_cast<size_t>(i) + 1];
            long long delta = wins[static_cast<size_t>(a) * m + b] -
                              wins[static_cast<size_t>(b) * m + a];
            if (delta < 0 || (delta == 0 && b < a)) {
                std::swap(order[static_cast<size_t>(i)],
                          order[static_cast<size_t>(i) + 1]);
                moved = true;
            }
        }
    }
    return Ranking(std::move(order));
}

}  // namespace

Ranking kemeny_rank(const Dataset& data, KemenyMethod method) {
    switch (method) {
        case KemenyMethod::exact:
            return kemeny_exact(data);
        case KemenyMethod::local_search:
            return kemeny_local_search(data);
        case KemenyMethod::auto_choose:
        default:
            return data.m() <= 16 ? kemeny_exact(data)
                                  : kemeny_local_search(data);
    }
}

long long total_kendall_distance(const Dataset& data, const Ranking& order) {
    if (order.size() != data.m()) {
        throw DimensionError("ranking length does not match dataset");
    }
    long long total = 0;
    for (const Ranking& r : data.rankings()) total += kendall_tau(r, order);
    return total;
}

double mallows_log_z(double phi, int m) {
    double log_z = 0.0;
    double partial = 0.0;
    double power = 1.0;
    for (int i = 1; i <= m; ++i) {
        partial += power;  // now sum_{z=0}^{i-1} phi^z
        power *= phi;
        log_z += std::log(partial);
    }
    return log_z;
}

MallowsParams fit_phi(const Dataset& data, const Ranking& reference) {
    const int m = data.m();
    const int n = data.n();
    const long long dist = total_kendall_distance(data, reference);

    if (dist == 0) {
        return MallowsParams{reference, 1.0, 0.0, false};
    }

    const double uniform_mean = m * (m - 1) / 4.0;
    const double hi = 1.0 - 1e-9;
    if (static_cast<double>(dist) / n >= uniform_mean) {
        return MallowsParams{reference, 1.0 / (1.0 + hi), hi, true};
    }

    const auto nll = [&](double phi) {
        return n * mallows_log_z(phi, m) - dist * std::log(phi);
    };

    // Golden-section minimization; the objective is unimodal on (0, 1).
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-15;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = nll(c);
    double fd = nll(d);
    for (int it = 0; it < 400 && (b - a) > 1e-12 + 1e-9 * a; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = nll(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = nll(d);
        }
    }
    const double phi = 0.5 * (a + b);
    return MallowsParams{reference, 1.0 / (1.0 + phi), phi, false};
}

MallowsParams fit_mallows(const Dataset& data, KemenyMethod method) {
    return fit_phi(data, kemeny_rank(data, method));
}

double mallows_nll(const Dataset& data, const MallowsParams& params,
                   bool* degenerate) {
    if (degenerate) *degenerate = false;
    const long long dist = total_kendall_distance(data, params.reference);
    if (params.phi == 0.0) {
        if (dist == 0) return 0.0;
        if (degenerate) *degenerate = true;
        return std::numeric_limits<double>::max();
    }
    return data.n() * mallows_log_z(params.phi, data.m()) -
           dist * std::log(params.phi);
}

PairwiseMatrix mallows_pairwise(const MallowsParams& params) {
    const int m = params.reference.size();
    const double phi = params.phi;
    PairwiseMatrix out(m);

    // h[c] depends only on the reference-position distance c.
    std::vector<double> h(static_cast<size_t>(m), 0.0);
    double numer = 0.0;   // sum_{z=1}^{c} z phi^{z-1}
    double denom1 = 0.0;  // sum_{z=1}^{c} phi^{z-1}
    double denom2 = 1.0;  // sum_{z=0}^{c} phi^z
    double power = 1.0;   // phi^{c-1} entering iteration c
    for (int c = 1; c < m; ++c) {
        numer += c * power;
        denom1 += power;
        power *= phi;
        denom2 += power;
        h[static_cast<size_t>(c)] = numer / (denom1 * denom2);
    }

    for (int k = 0; k < m; ++k) {
        for (int l = k + 1; l < m; ++l) {
            out.set_pair(params.reference.at(k), params.reference.at(l),
                         h[static_cast<size_t>(l - k)]);
        }
    }
    return out;
}

std::vector<Ranking> sample_mallows(const MallowsParams& params, int count,
                                    std::uint64_t seed) {
    const int m = params.reference.size();
    const double phi = params.phi;

    std::vector<Ranking> samples;
    samples.reserve(static_cast<size_t>(std::max(count, 0)));
    for (int t = 0; t < count; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        std::vector<int> list;
        list.reserve(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            // Displacement j in 0..i, P(j) proportional to phi^j; j = 0 keeps
            // the item below everything inserted so far (reference slot).
            double total = 1.0;
            double power = 1.0;
            for (int j = 1; j <= i; ++j) {
                power *= phi;
                total += power;
            }
            double u = rng.uniform() * total;
            int j = 0;
            double cum = 1.0;
            power = 1.0;
            while (j < i && u > cum) {
                power *= phi;
                cum += power;
                ++j;
            }
            list.insert(list.end() - j, params.reference.at(i));
        }
        samples.emplace_back(std::move(list));
    }
    return samples;
}

}  // namespace rankfit
