#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "permutonlab/common.hpp"
#include "permutonlab/dperm.hpp"

namespace permutonlab {

/// Caps for the exhaustive enumerators and the verification manifest.
struct EnumerationBudget {
    int max_perm_size = 5;       // n cap for all_d_permutations-based sweeps
    int max_dim = 3;             // d cap
    int max_pattern_size = 3;    // k cap
    int max_schnyder_size = 4;   // wood size cap inside cmd_verify
    long long max_states = 50'000'000; // generic element cap

    void require_positive() const;
};

/// Visits every element of S_{d,n} exactly once, in lexicographic order of the
/// concatenated columns. Throws BudgetError if (n!)^(d-1) exceeds max_states.
void for_each_d_permutation(int n, int d, long long max_states,
                            const std::function<void(const DPermutation&)>& fn);

/// Materialized variant of the above.
std::vector<DPermutation> all_d_permutations(int n, int d,
                                             long long max_states = 50'000'000);

/// Exact law of the two-stage sampler behind the Brownian separable
/// d-permuton patterns: a uniform rooted binary plane tree with k leaves,
/// internal vertices labeled with independent signs (+1 in coordinate i with
/// probability p[i]). Returns pattern -> exact mass; masses sum to 1.
std::map<DPermutation, Rational> exact_pattern_law(int k, const std::vector<Rational>& p,
                                                   int k_max = 4);

/// Independent characterization of d-separability (d <= 3) via pattern
/// avoidance on marginals: every 3-dimensional marginal avoids
/// ((1,3,2),(2,1,3)) and its cube symmetries, and every 2-dimensional marginal
/// avoids (2,4,1,3) and (3,1,4,2). Used as a cross-check oracle against the
/// block-decomposition route.
bool is_separable_by_avoidance(const DPermutation& sigma);

/// All rooted binary plane trees with k leaves, encoded as a vector of
/// left-subtree leaf counts in preorder (empty for k = 1). Used to validate
/// the uniform tree grower and to build exact pattern laws.
struct BinaryTreeShape {
    // children[v] = {left, right} for internal vertices; leaves have none.
    // Vertex 0 is the root. Vertices are in preorder.
    std::vector<std::array<int, 2>> children;
    std::vector<bool> is_leaf;
    int leaves = 0;
};
std::vector<BinaryTreeShape> enumerate_binary_plane_trees(int k);

/// Lexicographic code of a small pattern: each column contributes its
/// lexicographic rank among S_k, column 1 most significant. Codes enumerate
/// S_{d,k} in lexicographic order of the concatenated columns, which is the
/// tabulation order used everywhere patterns are listed.
long long pattern_code(const DPermutation& p);
DPermutation pattern_from_code(long long code, int k, int d);
long long pattern_code_count(int k, int d);

/// One oracle cross-check in the verification manifest.
struct CheckResult {
    std::string name;
    bool pass = false;
    double millis = 0.0;
    std::string detail;
};

/// Runs the full battery of oracle/primary cross-checks at the given budget.
std::vector<CheckResult> run_verification(const EnumerationBudget& budget);

} // namespace permutonlab
