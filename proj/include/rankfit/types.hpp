#pragma once

#include <string>
#include <vector>

namespace rankfit {

/// An alternative: a dense index in [0, m) plus a display label.
struct AlternativeId {
    int index = 0;
    std::string label;
};

/// A full ranking over m alternatives, most preferred first. Entries are a
/// permutation of 0..m-1; validated on construction. Immutable afterwards.
class Ranking {
public:
    explicit Ranking(std::vector<int> order);

    static Ranking identity(int m);

    int size() const { return static_cast<int>(order_.size()); }

    /// Alternative at rank position pos (0 = most preferred).
    int at(int pos) const { return order_[static_cast<size_t>(pos)]; }

    const std::vector<int>& order() const { return order_; }

    /// Inverse permutation: positions()[j] = rank position of alternative j.
    std::vector<int> positions() const;

    bool operator==(const Ranking& other) const { return order_ == other.order_; }
    bool operator!=(const Ranking& other) const { return !(*this == other); }
    bool operator<(const Ranking& other) const { return order_ < other.order_; }

private:
    std::vector<int> order_;
};

/// A bag of n full rankings over a shared alternative set.
class Dataset {
public:
    Dataset(std::vector<std::string> labels, std::vector<Ranking> rankings);

    /// Labels defaulted to a0, a1, ...
    static Dataset from_rankings(std::vector<Ranking> rankings);

    int m() const { return static_cast<int>(labels_.size()); }
    int n() const { return static_cast<int>(rankings_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Ranking>& rankings() const { return rankings_; }
    const Ranking& ranking(int i) const { return rankings_[static_cast<size_t>(i)]; }

    /// wins()[j*m+k] = number of rankings placing j above k.
    std::vector<long long> win_counts() const;

private:
    std::vector<std::string> labels_;
    std::vector<Ranking> rankings_;
};

/// m x m matrix of marginal probabilities that the row alternative is ranked
/// above the column alternative. Off-diagonal complements sum to 1; the
/// diagonal is fixed at 0.5 by convention.
class PairwiseMatrix {
public:
    explicit PairwiseMatrix(int m);

    int size() const { return m_; }

    double operator()(int j, int k) const {
        return p_[static_cast<size_t>(j) * m_ + k];
    }

    /// Sets entry (j, k) and its complement (k, j) together. j != k.
    void set_pair(int j, int k, double p_jk);

    /// Throws ValidationError if any invariant is violated beyond tol.
    void validate(double tol = 1e-9) const;

    const std::vector<double>& data() const { return p_; }

private:
    int m_;
    std::vector<double> p_;
};

/// Number of unordered pairs ordered oppositely by the two rankings.
/// Symmetric; ranges over [0, m(m-1)/2].
int kendall_tau(const Ranking& r1, const Ranking& r2);

/// Fraction of rankings placing each alternative above each other one.
PairwiseMatrix empirical_pairwise(const Dataset& data);

/// Reorders rows and columns so that row i of the result corresponds to
/// alternative order.at(i).
PairwiseMatrix permute_matrix(const PairwiseMatrix& mat, const Ranking& order);

}  // namespace rankfit
