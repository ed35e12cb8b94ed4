#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rankfit/errors.hpp"
#include "rankfit/plackett_luce.hpp"
#include "rankfit/rng.hpp"

using namespace rankfit;

namespace {

Ranking random_ranking(int m, Rng& rng) {
    std::vector<int> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    for (int i = m - 1; i > 0; --i) {
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    return Ranking(std::move(order));
}

Dataset random_dataset(int m, int n, Rng& rng) {
    std::vector<Ranking> rows;
    rows.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rows.push_back(random_ranking(m, rng));
    return Dataset::from_rankings(std::move(rows));
}

PLParams random_params(int m, Rng& rng) {
    PLParams params{std::vector<double>(static_cast<size_t>(m))};
    double total = 0.0;
    for (double& g : params.strengths) {
        g = 0.1 + rng.uniform();
        total += g;
    }
    for (double& g : params.strengths) g /= total;
    return params;
}

}  // namespace

TEST_CASE("likelihood of single rankings") {
    PLParams uniform{{1.0 / 3, 1.0 / 3, 1.0 / 3}};
    Dataset one = Dataset::from_rankings({Ranking({2, 0, 1})});
    CHECK(pl_nll(one, uniform) == doctest::Approx(std::log(6.0)).epsilon(1e-12));

    PLParams skewed{{0.5, 1.0 / 3, 1.0 / 6}};
    Dataset id = Dataset::from_rankings({Ranking({0, 1, 2})});
    CHECK(pl_nll(id, skewed) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("two-alternative fit has the closed form") {
    std::vector<Ranking> rows(3, Ranking({0, 1}));
    rows.push_back(Ranking({1, 0}));
    PLParams fitted = fit_pl_mm(Dataset::from_rankings(rows));
    CHECK(fitted.strengths[0] == doctest::Approx(0.75).epsilon(1e-8));
    CHECK(fitted.strengths[1] == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("strengths stay normalized") {
    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        int m = 2 + static_cast<int>(rng.below(5));
        Dataset data = random_dataset(m, 30, rng);
        PLParams fitted = fit_pl_mm(data);
        double total = std::accumulate(fitted.strengths.begin(),
                                       fitted.strengths.end(), 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        for (double g : fitted.strengths) CHECK(g > 0.0);
    }
}

TEST_CASE("mm iterations never increase the likelihood") {
    Rng rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        int m = 2 + static_cast<int>(rng.below(5));
        int n = 5 + static_cast<int>(rng.below(40));
        Dataset data = random_dataset(m, n, rng);
        std::vector<double> trace;
        fit_pl_mm(data, 1e-10, 10000, &trace);
        REQUIRE(trace.size() >= 2);
        for (size_t i = 1; i < trace.size(); ++i) {
            CHECK(trace[i] <= trace[i - 1] + 1e-9 * std::abs(trace[i - 1]));
        }
    }
}

TEST_CASE("fixed point is a stationary point") {
    Rng rng(43);
    Dataset data = random_dataset(4, 60, rng);
    PLParams fitted = fit_pl_mm(data, 1e-12);
    double base = pl_nll(data, fitted);
    for (size_t j = 0; j < fitted.strengths.size(); ++j) {
        for (double step : {1e-4, -1e-4}) {
            PLParams moved = fitted;
            moved.strengths[j] *= std::exp(step);
            double total = std::accumulate(moved.strengths.begin(),
                                           moved.strengths.end(), 0.0);
            for (double& g : moved.strengths) g /= total;
            CHECK(pl_nll(data, moved) >= base - 1e-7);
        }
    }
}

TEST_CASE("unanimous data is degenerate") {
    std::vector<Ranking> rows(5, Ranking({0, 1, 2}));
    Dataset data = Dataset::from_rankings(std::move(rows));
    CHECK_THROWS_AS(fit_pl_mm(data), DegenerateDataError);
    try {
        fit_pl_mm(data);
    } catch (const DegenerateDataError& e) {
        CHECK(e.alternative() == 2);
        CHECK(std::string(e.what()).find("a2") != std::string::npos);
    }
}

TEST_CASE("item that always loses its appearances is degenerate") {
    Dataset data = Dataset::from_rankings(
        {Ranking({0, 1, 2}), Ranking({1, 0, 2}), Ranking({0, 1, 2})});
    CHECK_THROWS_AS(fit_pl_mm(data), DegenerateDataError);
}

TEST_CASE("cyclic preferences stay estimable") {
    Dataset data = Dataset::from_rankings(
        {Ranking({0, 1, 2}), Ranking({1, 2, 0}), Ranking({2, 0, 1})});
    PLParams fitted = fit_pl_mm(data);
    CHECK(std::isfinite(pl_nll(data, fitted)));
    for (double g : fitted.strengths) {
        CHECK(g == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    }
}

TEST_CASE("pairwise marginals") {
    PLParams params{{0.5, 1.0 / 3, 1.0 / 6}};
    PairwiseMatrix p = pl_pairwise(params);
    p.validate();
    CHECK(p(0, 1) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p(0, 2) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(p(1, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("pairwise matrix is monotone for sorted strengths") {
    Rng rng(44);
    std::vector<double> strengths(6);
    double total = 0.0;
    for (double& g : strengths) {
        g = 0.05 + rng.uniform();
        total += g;
    }
    for (double& g : strengths) g /= total;
    std::sort(strengths.rbegin(), strengths.rend());
    PairwiseMatrix p = pl_pairwise(PLParams{strengths});
    for (int j = 0; j < 6; ++j) {
        for (int k = 0; k + 1 < 6; ++k) {
            if (j == k || j == k + 1) continue;
            CHECK(p(j, k) < p(j, k + 1));
            CHECK(p(k, j) > p(k + 1, j));
        }
    }
}

TEST_CASE("sampler matches first-place and pairwise marginals") {
    Rng rng(45);
    PLParams params = random_params(5, rng);
    const int n = 100000;
    std::vector<Ranking> draws = sample_pl(params, n, 46);
    std::vector<int> first(5, 0);
    for (const Ranking& r : draws) first[static_cast<size_t>(r.at(0))] += 1;
    for (int j = 0; j < 5; ++j) {
        double prob = params.strengths[static_cast<size_t>(j)];
        double se = std::sqrt(prob * (1.0 - prob) / n);
        CHECK(std::abs(first[static_cast<size_t>(j)] / double(n) - prob) <
              3.5 * se);
    }
    PairwiseMatrix expected = pl_pairwise(params);
    PairwiseMatrix observed =
        empirical_pairwise(Dataset::from_rankings(std::move(draws)));
    for (int j = 0; j < 5; ++j) {
        for (int k = j + 1; k < 5; ++k) {
            double se = std::sqrt(expected(j, k) * (1.0 - expected(j, k)) / n);
            CHECK(std::abs(observed(j, k) - expected(j, k)) < 3.5 * se);
        }
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    PLParams params{{0.4, 0.3, 0.2, 0.1}};
    CHECK(sample_pl(params, 40, 9) == sample_pl(params, 40, 9));
    CHECK(sample_pl(params, 40, 9) != sample_pl(params, 40, 10));
}

TEST_CASE("fit recovers the generating strengths") {
    PLParams truth{{0.35, 0.25, 0.18, 0.12, 0.10}};
    Dataset data = Dataset::from_rankings(sample_pl(truth, 5000, 47));
    PLParams fitted = fit_pl_mm(data);
    for (size_t j = 0; j < truth.strengths.size(); ++j) {
        CHECK(std::abs(fitted.strengths[j] - truth.strengths[j]) < 0.02);
    }
}

TEST_CASE("means are the log strengths") {
    PLParams params{{0.5, 0.25, 0.25}};
    std::vector<double> means = params.means();
    CHECK(means[0] == doctest::Approx(std::log(0.5)));
    CHECK(means[1] == doctest::Approx(std::log(0.25)));
    CHECK(means[0] - means[1] == doctest::Approx(std::log(2.0)));
}
