#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "permutonlab/common.hpp"
#include "permutonlab/dperm.hpp"

namespace permutonlab {

/// The empirical permuton mu_sigma of a d-permutation: mass 1/n spread
/// uniformly over each of the n axis-aligned cubes of side 1/n, the cube for
/// index i spanning ((i-1)/n, i/n) x prod_j ((sigma(i)^(j)-1)/n, sigma(i)^(j)/n).
class EmpiricalPermuton {
public:
    explicit EmpiricalPermuton(DPermutation source);

    int dim() const { return source_.dim(); }
    int size() const { return source_.size(); }
    const DPermutation& source() const { return source_; }

    /// F(x) = mu(prod [0, x_i]). Exact closed form per cube, evaluated in
    /// binary64. Coordinates must lie in [0, 1].
    double cdf(const std::vector<double>& x) const;

    /// Exact-rational CDF, for the lattice identities in tests.
    Rational cdf_exact(const std::vector<Rational>& x) const;

    /// Mass of the slab [a/n, b/n] in the given coordinate (0 = index axis).
    /// Uniform marginals make this exactly (b-a)/n.
    Rational slab_mass(int coordinate, int a, int b) const;

private:
    DPermutation source_;
};

/// Exact sup-norm distance ||F1 - F2||_inf between the two empirical CDFs.
/// Each F is multilinear within the cells of the combined 1/n1, 1/n2 grid, so
/// the sup is attained at a combined-lattice vertex; all such vertices are
/// evaluated with integer arithmetic. Cost O(L^d) with L <= n1 + n2 + 1.
Rational cdf_sup_distance_exact(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                                long long budget = 400'000'000);
double cdf_sup_distance(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                        long long budget = 400'000'000);

enum class BoxDistanceMode { exact, bound };

/// Box distance result: in exact mode lower == upper == d_box; in bound mode
/// the interval is [s, min(2^d s, 1)] with s = ||F1 - F2||_inf.
struct DistanceInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;
};

DistanceInterval box_distance(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                              BoxDistanceMode mode, long long budget = 200'000'000);
Rational box_distance_exact(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                            long long budget = 200'000'000);

struct PointCloud {
    int d = 0;
    std::vector<std::vector<double>> points;
    std::uint64_t seed = 0;
    std::string generator;
};

/// k iid points from mu_sigma: a uniform cube, then a uniform point inside.
PointCloud sample_points(const EmpiricalPermuton& mu, int k, std::uint64_t seed);

/// Perm(x_1, ..., x_k) for k iid points from mu. Coordinate ties (probability
/// zero, but possible in binary64) trigger an internal resample, capped.
DPermutation sample_pattern(const EmpiricalPermuton& mu, int k, std::uint64_t seed);

/// Monte Carlo estimate of P(P_mu[k] = tau).
McEstimate freq_permuton(const DPermutation& tau, const EmpiricalPermuton& mu,
                         long long trials, std::uint64_t seed);

/// Small-instance exact oracle for the same probability: sums over all k-tuples
/// of cube assignments; within a shared cube the relative orders of the
/// coordinates of independent uniforms are enumerated exactly.
Rational freq_permuton_exact(const DPermutation& tau, const EmpiricalPermuton& mu,
                             int max_n = 6, int max_k = 3);

/// Whole exact law of P_mu[k] at once (same method, one pass).
std::map<DPermutation, Rational> exact_sampled_pattern_law(const EmpiricalPermuton& mu, int k,
                                                           int max_n = 6, int max_k = 3);

/// Integer-weight variants for the exhaustive sweeps: masses are numerators
/// over the stated denominator, indexed by pattern_code (see oracle.hpp).
struct ExactLawI64 {
    int k = 0;
    int d = 0;
    long long denominator = 1;
    std::vector<long long> mass; // size (k!)^(d-1)
};
ExactLawI64 exact_sampled_pattern_law_fast(const EmpiricalPermuton& mu, int k,
                                           int max_n = 6, int max_k = 3);
/// Exact freq(tau, sigma) for every tau of size k at once: occurrence counts
/// over the C(n,k) denominator, indexed by pattern_code.
ExactLawI64 exact_freq_law_fast(const DPermutation& sigma, int k);

struct ApproximationRow {
    int k = 0;
    double median_lower = 0.0;  // median over reps of ||F - F_k||_inf
    double median_upper = 0.0;  // median of the bound-mode upper endpoint
    double p90_lower = 0.0;
    double reference_bound = 0.0; // the d 2^(d+2) k^(-1/4) envelope, for reference
};

/// For each k: sample P_mu[k] `reps` times and summarize the bound-mode box
/// distance between mu and the sampled pattern's empirical permuton.
std::vector<ApproximationRow> approximation_curve(const EmpiricalPermuton& mu,
                                                  const std::vector<int>& k_list, int reps,
                                                  std::uint64_t seed);

using PermSampler = std::function<DPermutation(int n, std::uint64_t seed)>;

/// Batch form: count independent draws of size n. Samplers with expensive
/// per-size setup (the Schnyder dp tables) amortize it across the batch.
using EnsembleSampler =
    std::function<std::vector<DPermutation>(int n, int count, std::uint64_t seed)>;

EnsembleSampler ensemble_from(PermSampler sampler);

struct ConvergenceRow {
    int n = 0;
    double mean = 0.0;
    double se = 0.0;
    int reps = 0;
    std::map<std::string, long long> sampled_pattern_counts; // law of pat_I(sigma_n)
};

struct ConvergenceReport {
    DPermutation pattern;
    std::vector<ConvergenceRow> rows;
    std::string trend; // "decreasing", "increasing", "mixed", "constant"
    long long trials_per_rep = 0;

    ConvergenceReport() : pattern(DPermutation::identity(1, 2)) {}
};

/// For each n: draws `reps` permutations from the sampler, estimates
/// E[freq(tau, sigma_n)] per draw (exact enumeration when C(n,k) fits the
/// trial budget, freq_sampled otherwise), and tabulates one uniform size-k
/// pattern per draw. Per-draw work runs on the configured worker pool with
/// per-index seeds, so results do not depend on the thread count.
ConvergenceReport convergence_report(const EnsembleSampler& sampler, const DPermutation& pattern,
                                     const std::vector<int>& n_list, int reps, long long trials,
                                     std::uint64_t seed);
ConvergenceReport convergence_report(const PermSampler& sampler, const DPermutation& pattern,
                                     const std::vector<int>& n_list, int reps, long long trials,
                                     std::uint64_t seed);

} // namespace permutonlab
