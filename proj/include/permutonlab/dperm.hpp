#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permutonlab/common.hpp"

namespace permutonlab {

/// Default cap on pattern size for exhaustive occurrence counting; beyond it
/// callers must use the sampled estimator. C(n,k) grows too fast otherwise.
inline constexpr int kDefaultKMax = 4;

/// A d-dimensional permutation of size n: a map [n] -> [n]^(d-1) whose
/// restriction to every coordinate is a permutation. Stored 0-based; all
/// constructors and serialized forms are 1-based.
///
/// Immutable after construction; safe to share across threads.
class DPermutation {
public:
    /// cols[j][i] = sigma(i+1)^(j+1), 1-based values. Throws ValidationError
    /// if any column is not a permutation of {1..n}.
    static DPermutation from_one_based(const std::vector<std::vector<int>>& cols);

    static DPermutation identity(int n, int d);

    int dim() const { return static_cast<int>(cols_.size()) + 1; }
    int size() const { return n_; }

    /// 0-based value of column j (0 <= j <= d-2) at index i (0 <= i < n).
    int value(int i, int j) const { return cols_[j][i]; }

    const std::vector<int>& column(int j) const { return cols_[j]; }

    /// 1-based copy of the columns, for serialization.
    std::vector<std::vector<int>> one_based_cols() const;

    bool operator==(const DPermutation& o) const { return cols_ == o.cols_; }
    bool operator!=(const DPermutation& o) const { return !(*this == o); }
    bool operator<(const DPermutation& o) const;

    /// "1,3,2|2,1,3" — columns 1-based, joined by '|'.
    std::string to_string() const;
    static DPermutation parse(const std::string& text);

private:
    DPermutation(std::vector<std::vector<int>> zero_based_cols, int n)
        : cols_(std::move(zero_based_cols)), n_(n) {}

    std::vector<std::vector<int>> cols_; // 0-based values
    int n_ = 0;
};

/// Convenience for literals in tests and tools: dperm({{1,5,2,3,4},{3,2,5,1,4}}).
DPermutation dperm(const std::vector<std::vector<int>>& one_based_cols);

/// Sign sequence s = (s_1, ..., s_{d-1}), entries +1/-1.
struct SignSequence {
    std::vector<int> signs;

    explicit SignSequence(std::vector<int> s);
    int length() const { return static_cast<int>(signs.size()); }
};

/// Strictly increasing 1-based indices.
struct IndexSet {
    std::vector<int> indices;

    explicit IndexSet(std::vector<int> idx);
    int size() const { return static_cast<int>(indices.size()); }
};

/// Structural check on raw 1-based columns. Empty result means valid;
/// otherwise each entry names the first problem found per column.
std::vector<std::string> validate_columns(const std::vector<std::vector<int>>& cols);

/// Pattern of sigma on I: the unique tau of size |I| in the same relative
/// order as sigma restricted to I, coordinate by coordinate.
DPermutation pattern_at(const DPermutation& sigma, const IndexSet& I);

/// Number of k-subsets I of [n] with pattern_at(sigma, I) == tau.
/// Enumerates all C(n,k) subsets; k is capped by k_max.
BigInt occ(const DPermutation& tau, const DPermutation& sigma, int k_max = kDefaultKMax);

/// occ / C(n,k), exact. Zero when |tau| > |sigma|.
Rational freq(const DPermutation& tau, const DPermutation& sigma, int k_max = kDefaultKMax);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    long long trials = 0;
};

/// Unbiased Monte Carlo estimate of freq(tau, sigma) by uniform k-subset
/// sampling. Deterministic given the seed.
McEstimate freq_sampled(const DPermutation& tau, const DPermutation& sigma,
                        long long trials, std::uint64_t seed);

/// Block sum sigma1 (s) sigma2: coordinate-wise direct sum when s_j = +1 and
/// skew sum when s_j = -1.
DPermutation block_sum(const DPermutation& a, const DPermutation& b, const SignSequence& s);

/// Inverse of column j (1 <= j <= d-1) as a plain 1-based permutation.
std::vector<int> inverse_marginal(const DPermutation& sigma, int j);

/// Ranks a cloud of d-dimensional points into the unique d-permutation in the
/// same relative order. Ties within a coordinate are an error, never broken
/// silently.
DPermutation perm_of_points(const std::vector<std::vector<double>>& points);

/// Projection of sigma onto a coordinate subset (0 = index coordinate,
/// j = column j for 1 <= j <= d-1). coords must be strictly increasing with
/// at least two entries; the smallest coordinate becomes the new index.
DPermutation marginal(const DPermutation& sigma, const std::vector<int>& coords);

/// Number of inversions of column j, i.e. occ((2,1), .) of that marginal,
/// computed in O(n log n).
long long inversion_count(const DPermutation& sigma, int j);

} // namespace permutonlab
