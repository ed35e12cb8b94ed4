#include "rankfit/types.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "rankfit/errors.hpp"

namespace rankfit {

namespace {

void check_permutation(const std::vector<int>& order) {
    int m = static_cast<int>(order.size());
    std::vector<char> seen(static_cast<size_t>(m), 0);
    for (int v : order) {
        if (v < 0 || v >= m) {
            throw ValidationError("ranking entry " + std::to_string(v) +
                                  " out of range [0, " + std::to_string(m) + ")");
        }
        if (seen[static_cast<size_t>(v)]) {
            throw ValidationError("ranking repeats alternative " + std::to_string(v));
        }
        seen[static_cast<size_t>(v)] = 1;
    }
}

}  // namespace

Ranking::Ranking(std::vector<int> order) : order_(std::move(order)) {
    check_permutation(order_);
}

Ranking Ranking::identity(int m) {
    std::vector<int> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    return Ranking(std::move(order));
}

std::vector<int> Ranking::positions() const {
    std::vector<int> pos(order_.size());
    for (int i = 0; i < size(); ++i) pos[static_cast<size_t>(order_[i])] = i;
    return pos;
}

Dataset::Dataset(std::vector<std::string> labels, std::vector<Ranking> rankings)
    : labels_(std::move(labels)), rankings_(std::move(rankings)) {
    if (rankings_.empty()) throw EmptyInputError("dataset has no rankings");
    int m = static_cast<int>(labels_.size());
    for (const Ranking& r : rankings_) {
        if (r.size() != m) {
            throw DimensionError("ranking of length " + std::to_string(r.size()) +
                                 " in dataset with m=" + std::to_string(m));
        }
    }
    for (size_t j = 0; j < labels_.size(); ++j) {
        for (size_t k = j + 1; k < labels_.size(); ++k) {
            if (labels_[j] == labels_[k]) {
                throw ValidationError("duplicate alternative label '" + labels_[j] + "'");
            }
        }
    }
}

Dataset Dataset::from_rankings(std::vector<Ranking> rankings) {
    if (rankings.empty()) throw EmptyInputError("dataset has no rankings");
    int m = rankings.front().size();
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) labels.push_back("a" + std::to_string(j));
    return Dataset(std::move(labels), std::move(rankings));
}

std::vector<long long> Dataset::win_counts() const {
    int mm = m();
    std::vector<long long> wins(static_cast<size_t>(mm) * mm, 0);
    for (const Ranking& r : rankings_) {
        for (int i = 0; i < mm; ++i) {
            for (int j = i + 1; j < mm; ++j) {
                wins[static_cast<size_t>(r.at(i)) * mm + r.at(j)] += 1;
            }
        }
    }
    return wins;
}

PairwiseMatrix::PairwiseMatrix(int m)
    : m_(m), p_(static_cast<size_t>(m) * m, 0.5) {
    if (m < 1) throw DimensionError("pairwise matrix needs m >= 1");
}

void PairwiseMatrix::set_pair(int j, int k, double p_jk) {
    if (j == k) throw DimensionError("set_pair on the diagonal");
    if (!(p_jk >= 0.0 && p_jk <= 1.0)) {
        throw ValidationError("pairwise probability " + std::to_string(p_jk) +
                              " outside [0, 1]");
    }
    p_[static_cast<size_t>(j) * m_ + k] = p_jk;
    p_[static_cast<size_t>(k) * m_ + j] = 1.0 - p_jk;
}

void PairwiseMatrix::validate(double tol) const {
    for (int j = 0; j < m_; ++j) {
        if ((*this)(j, j) != 0.5) throw ValidationError("pairwise diagonal not 0.5");
        for (int k = 0; k < m_; ++k) {
            double v = (*this)(j, k);
            if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("pairwise entry outside [0, 1]");
            if (j != k && std::fabs(v + (*this)(k, j) - 1.0) > tol) {
                throw ValidationError("pairwise complement invariant violated");
            }
        }
    }
}

int kendall_tau(const Ranking& r1, const Ranking& r2) {
    if (r1.size() != r2.size()) {
        throw DimensionError("kendall_tau: rankings of length " + std::to_string(r1.size()) +
                             " and " + std::to_string(r2.size()));
    }
    std::vector<int> pos2 = r2.positions();
    int m = r1.size();
    int discordant = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (pos2[static_cast<size_t>(r1.at(i))] > pos2[static_cast<size_t>(r1.at(j))]) {
                ++discordant;
            }
        }
    }
    return discordant;
}

PairwiseMatrix empirical_pairwise(const Dataset& data) {
    int m = data.m();
    std::vector<long long> wins = data.win_counts();
    PairwiseMatrix out(m);
    double n = static_cast<double>(data.n());
    for (int j = 0; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
            out.set_pair(j, k, static_cast<double>(wins[static_cast<size_t>(j) * m + k]) / n);
        }
    }
    return out;
}

PairwiseMatrix permute_matrix(const PairwiseMatrix& mat, const Ranking& order) {
    if (order.size() != mat.size()) {
        throw DimensionError("permute_matrix: order length " + std::to_string(order.size()) +
                             " for matrix of size " + std::to_string(mat.size()));
    }
    int m = mat.size();
    PairwiseMatrix out(m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            out.set_pair(i, j, mat(order.at(i), order.at(j)));
        }
    }
    return out;
}

}  // namespace rankfit
