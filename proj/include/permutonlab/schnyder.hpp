#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "permutonlab/common.hpp"
#include "permutonlab/dperm.hpp"

namespace permutonlab {

/// Structural check of a Schnyder wood string: equal counts of g/b/r, every
/// prefix with #g >= #b >= #r, and no 'r' immediately followed by 'b'.
/// Empty result means valid; otherwise the first failing prefix is named.
std::vector<std::string> validate_string(const std::string& s);

/// 2n-step walk with increments (1,-1) and (-k,1), k >= 0, starting and
/// ending at the origin and confined to {x >= 0, y >= -1}.
struct ConeWalk {
    std::vector<std::pair<int, int>> steps;

    int length() const { return static_cast<int>(steps.size()); }
    int wood_size() const { return length() / 2; }
};

std::vector<std::string> validate_walk(const ConeWalk& w);

/// The string <-> walk bijection: the leading 'g' moves to the end, each 'b'
/// becomes (1,-1) and each run of k 'r's plus the following 'g' becomes
/// (-k,1). walk_to_string restores the final 'g' to the front.
ConeWalk string_to_walk(const std::string& s);
std::string walk_to_string(const ConeWalk& w);

enum class WalkVariant { green, red };

/// Forest on labels 1..n; parent 0 denotes the root. children[0] lists the
/// root's children; all child lists are in clockwise order.
struct RootedForest {
    int n = 0;
    std::vector<int> parent;                 // index 1..n
    std::vector<std::vector<int>> children;  // index 0..n

    static RootedForest empty(int n);
};

std::vector<std::string> validate_forest(const RootedForest& f);

/// Clockwise depth-first traversal: root children in order, vertex before its
/// children. For the green tree of a wood this reads off (sigma^g)^{-1}.
std::vector<int> forest_traversal(const RootedForest& f);

/// A green or red coalescent-walk process driven by a cone walk (the green
/// variant is driven by the time-reversal, per its definition). Paths start
/// at 0 on their starting time and evolve by the variant's case rules;
/// non-crossing and coalescence are consequences of the rules.
class CoalescentWalkProcess {
public:
    CoalescentWalkProcess(const ConeWalk& walk, WalkVariant variant);

    WalkVariant variant() const { return variant_; }
    int interval_length() const { return 2 * n_; }
    int wood_size() const { return n_; }

    /// Starting times, sorted ascending (after the boundary move).
    const std::vector<int>& starts() const { return starts_; }

    /// Label of the path started at starts()[i]: descending n..1 for green,
    /// ascending 1..n for red.
    int label_of(int start_index) const;

    /// Z^(j)_t for the path started at starts()[start_index]; t >= that start.
    /// Evaluated lazily from the driving walk.
    long long path_value(int start_index, int t) const;

    /// sigma^up / sigma^down with the variant's labeling, as 1-based value
    /// vectors indexed by label-1.
    const std::vector<int>& sigma_up() const;
    const std::vector<int>& sigma_down() const;

    /// parent[label] via "first hits", children in up-order (green trees) or
    /// down-order (red trees).
    const RootedForest& forest_up_order() const;
    const RootedForest& forest_down_order() const;

private:
    void analyze() const;

    std::vector<std::pair<int, int>> driver_; // increments actually driving the paths
    std::vector<int> starts_;
    WalkVariant variant_;
    int n_ = 0;

    struct Analysis;
    mutable std::shared_ptr<const Analysis> analysis_;
};

/// sigma^up / sigma^down for an explicitly given family of paths, straight
/// from the definition (pairwise comparisons). paths[i] holds the values of
/// the path started at starts[i], from its starting time inclusive to the end
/// of the interval. Used as the order-extraction oracle.
struct ExplicitOrders {
    std::vector<int> sigma_up;
    std::vector<int> sigma_down;
};
ExplicitOrders orders_from_paths(const std::vector<int>& starts, const std::vector<int>& labels,
                                 const std::vector<std::vector<long long>>& paths);

/// The full pipeline: string -> walk -> (Z^g, Z^r) -> sigma = (sigma^g, sigma^r).
DPermutation schnyder_perm_from_walk(const ConeWalk& w);
DPermutation schnyder_perm_from_string(const std::string& s);

/// Green and red trees of the wood, read from the two processes.
std::pair<RootedForest, RootedForest> trees_from_processes(const CoalescentWalkProcess& green,
                                                           const CoalescentWalkProcess& red);

/// Green tree reconstructed from (sigma^g)^{-1} alone by the inductive
/// rightmost-path parent rule. Total on any permutation input; equals the
/// process tree on genuine Schnyder marginals.
RootedForest green_tree_from_marginal(const std::vector<int>& sigma_g_inverse);

/// Pre-green / pre-red coalescent-walk processes of the appendix, driven by
/// the raw g/b/r string with half-integer time steps. Times and heights are
/// stored doubled so everything stays integral.
class PreCoalescentProcess {
public:
    PreCoalescentProcess(const std::string& s, WalkVariant variant);

    /// Starting times in doubled units (odd values: midpoints of characters).
    const std::vector<int>& starts_doubled() const { return starts_; }
    int label_of(int start_index) const;

    /// Path value (doubled) at doubled time t2.
    long long path_value_doubled(int start_index, int t2) const;

    const std::vector<int>& sigma_up() const;
    const std::vector<int>& sigma_down() const;

private:
    void analyze() const;

    std::string chars_;   // driving characters (reversed string for green)
    std::vector<int> starts_;
    WalkVariant variant_;
    int n_ = 0;

    struct Analysis;
    mutable std::shared_ptr<const Analysis> analysis_;
};

/// sigma computed through the appendix pre-processes; equals
/// schnyder_perm_from_string on every valid string.
DPermutation schnyder_perm_from_pre_processes(const std::string& s);

/// All valid Schnyder wood strings of size n (pruned DFS), lexicographic.
std::vector<std::string> enumerate_schnyder_strings(int n, int max_n = 6);

enum class SchnyderSampleMethod { dp, rejection };

/// Exact-uniform sampler over Schnyder wood strings of size n.
/// dp: backward state counts over (time, x, y) with forward sampling —
/// exact big-integer counts for n <= 60, scaled binary64 weights beyond.
/// rejection: run the unconditioned step law and accept walks that stay in
/// the cone and return to the origin.
std::string sample_uniform_schnyder(int n, std::uint64_t seed,
                                    SchnyderSampleMethod method = SchnyderSampleMethod::dp);

/// Batched dp sampler: the state table is built once and shared by all
/// draws, which is what makes large-n ensembles affordable.
class SchnyderDpSampler {
public:
    /// exact_threshold: largest n for which the big-integer count table is
    /// used; above it, per-slice-normalized doubles with checkpointing.
    explicit SchnyderDpSampler(int n, int max_n = 2000, int exact_threshold = 60);
    ~SchnyderDpSampler();

    int size() const { return n_; }

    /// count independent walks, deterministic in seed.
    std::vector<ConeWalk> sample_many(int count, std::uint64_t seed) const;
    ConeWalk sample(std::uint64_t seed) const { return sample_many(1, seed).front(); }

private:
    struct Impl;
    int n_;
    std::unique_ptr<Impl> impl_;
};

} // namespace permutonlab
