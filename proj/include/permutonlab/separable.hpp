#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permutonlab/common.hpp"
#include "permutonlab/dperm.hpp"
#include "permutonlab/rng.hpp"

namespace permutonlab {

/// Rooted plane tree with labeled internal vertices, vector-backed. Vertex 0
/// is the root; leaves carry no label. Used for both sign trees (labels in
/// {+1,-1}^(d-1)) and swap trees (root signs, other labels in {0,1}^(d-1)).
struct LabeledPlaneTree {
    struct Node {
        std::vector<int> children;
        std::vector<int> label; // empty for leaves
    };
    std::vector<Node> nodes;
    int d = 2;

    bool is_leaf(int v) const { return nodes[v].children.empty(); }
    int leaf_count() const;
    int add_node() {
        nodes.emplace_back();
        return static_cast<int>(nodes.size()) - 1;
    }
};

struct SignTree {
    LabeledPlaneTree tree;
};
struct SwapTree {
    LabeledPlaneTree tree;
};

/// Sign-tree invariants: >= 2 children per internal vertex, labels are
/// +-1 sequences of length d-1, no vertex repeats its parent's label.
std::vector<std::string> validate_sign_tree(const SignTree& t);
/// Swap-tree invariants: root labeled by signs, every other internal vertex
/// by a nonzero binary string of length d-1, >= 2 children each.
std::vector<std::string> validate_swap_tree(const SwapTree& t);

/// True iff sigma decomposes fully into block sums of trivial permutations.
bool is_separable(const DPermutation& sigma);

/// The canonical sign tree S(sigma) of a separable permutation (throws
/// ValidationError otherwise), and its inverse. The inverse only needs the
/// first two sign-tree conditions, so it also accepts trees with repeated
/// labels (as produced by pattern extraction and the Brownian sampler).
SignTree sign_tree(const DPermutation& sigma);
DPermutation sign_tree_inverse(const SignTree& t);

SwapTree swap_tree(const DPermutation& sigma);
SignTree swap_to_sign(const SwapTree& t);
SwapTree sign_to_swap(const SignTree& t);
DPermutation swap_tree_inverse(const SwapTree& t);

/// Pattern of the encoded permutation on leaf indices I, built from the
/// induced subtree on those leaves and their closest common ancestors.
/// Equals pattern_at(sign_tree_inverse(t), I).
DPermutation pattern_from_tree(const SignTree& t, const IndexSet& I);

/// Critical offspring law for conditioned Galton-Watson sampling of swap
/// trees: P(xi = r) = a b^(r-1) for r >= 2 with a = 2^(d-1)-1 and
/// b = 1 - sqrt(a/(a+1)); P(xi = 1) = 0.
struct OffspringLaw {
    int d = 2;
    double a = 0.0;
    double b = 0.0;

    double pmf(int r) const;
    double mean() const;
    double second_moment() const; // a b (b^2 - 3b + 4) / (1-b)^3
    double variance() const { return second_moment() - mean() * mean(); }

    int sample(Rng& rng) const;
};

OffspringLaw offspring_law(int d);

/// Uniform swap tree with n leaves: GW(xi) rejection-sampled on leaf count,
/// root sign uniform among 2^(d-1), other internal labels uniform among the
/// 2^(d-1)-1 swap sequences. Expected retries grow like n^(3/2).
SwapTree sample_uniform_swap_tree(int n, int d, Rng& rng, long long max_attempts);

/// Uniform d-separable permutation of size n via the swap-tree bijection.
DPermutation sample_uniform_separable(int n, int d, std::uint64_t seed,
                                      long long max_attempts = 400'000'000, int max_n = 5000);

/// Brute-force list of all d-separable permutations of size n (filters the
/// full enumeration through is_separable).
std::vector<DPermutation> enumerate_separable(int n, int d, int max_n = 6, int max_d = 3);

/// Uniform rooted binary plane tree with k leaves (Remy-style growth),
/// unlabeled; exposed for the uniformity validation against enumeration.
/// Encoded like LabeledPlaneTree with empty labels.
LabeledPlaneTree uniform_binary_plane_tree(int k, Rng& rng);

/// Exact sampler of P_{mu^B_p}[k]: uniform binary plane tree with k leaves,
/// internal vertices labeled with independent signs (+1 w.p. p[i]), then the
/// sign-tree inverse.
DPermutation sample_brownian_pattern(int k, const std::vector<double>& p, std::uint64_t seed);

/// Large-k pattern used as a permuton surrogate for point-cloud exports.
DPermutation sample_brownian_cloud(int size, const std::vector<double>& p, std::uint64_t seed);

} // namespace permutonlab
