#include "permutonlab/permuton.hpp"

#include <algorithm>
#include <cmath>

#include "permutonlab/oracle.hpp"
#include "permutonlab/parallel.hpp"
#include "permutonlab/rng.hpp"

namespace permutonlab {

EmpiricalPermuton::EmpiricalPermuton(DPermutation source) : source_(std::move(source)) {}

namespace {

// 0-based slab of cube i along a coordinate (0 = index axis).
inline int cube_slab(const DPermutation& p, int i, int coordinate) {
    return coordinate == 0 ? i : p.value(i, coordinate - 1);
}

} // namespace

double EmpiricalPermuton::cdf(const std::vector<double>& x) const {
    const int d = dim();
    const int n = size();
    if (static_cast<int>(x.size()) != d) throw ValidationError("cdf: wrong point dimension");
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("cdf: coordinate outside [0,1]");

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double cube = 1.0;
        for (int c = 0; c < d && cube > 0.0; ++c) {
            const double t = static_cast<double>(n) * x[c] - cube_slab(source_, i, c);
            cube *= std::clamp(t, 0.0, 1.0);
        }
        total += cube;
    }
    return total / n;
}

Rational EmpiricalPermuton::cdf_exact(const std::vector<Rational>& x) const {
    const int d = dim();
    const int n = size();
    if (static_cast<int>(x.size()) != d) throw ValidationError("cdf_exact: wrong point dimension");
    for (const Rational& v : x)
        if (v < 0 || v > 1) throw ValidationError("cdf_exact: coordinate outside [0,1]");

    Rational total = 0;
    for (int i = 0; i < n; ++i) {
        Rational cube = 1;
        for (int c = 0; c < d; ++c) {
            Rational t = Rational(n) * x[c] - cube_slab(source_, i, c);
            if (t <= 0) {
                cube = 0;
                break;
            }
            if (t < 1) cube *= t;
        }
        total += cube;
    }
    return total / n;
}

Rational EmpiricalPermuton::slab_mass(int coordinate, int a, int b) const {
    const int n = size();
    if (coordinate < 0 || coordinate >= dim()) throw ValidationError("slab_mass: bad coordinate");
    if (a < 0 || b < a || b > n) throw ValidationError("slab_mass: bad slab bounds");
    long long cubes = 0;
    for (int i = 0; i < n; ++i) {
        const int s = cube_slab(source_, i, coordinate);
        if (s >= a && s < b) ++cubes;
    }
    return Rational(cubes, n);
}

namespace {

// Combined 1/n1, 1/n2 grid along one axis, cut positions in units of 1/(n1*n2).
struct CombinedGrid {
    long long denom = 1;          // n1 * n2
    std::vector<long long> cuts;  // ascending, cuts.front() = 0, cuts.back() = denom
    int cells() const { return static_cast<int>(cuts.size()) - 1; }
};

CombinedGrid make_grid(int n1, int n2) {
    CombinedGrid g;
    g.denom = static_cast<long long>(n1) * n2;
    for (int i = 0; i <= n1; ++i) g.cuts.push_back(static_cast<long long>(i) * n2);
    for (int j = 0; j <= n2; ++j) g.cuts.push_back(static_cast<long long>(j) * n1);
    std::sort(g.cuts.begin(), g.cuts.end());
    g.cuts.erase(std::unique(g.cuts.begin(), g.cuts.end()), g.cuts.end());
    return g;
}

// Throws unless denom^d fits comfortably in int64.
void check_denominator(long long denom, int d) {
    long double v = 1.0L;
    for (int c = 0; c < d; ++c) v *= static_cast<long double>(denom);
    if (v > 9.0e18L)
        throw BudgetError("distance computation: n1*n2 too large for exact integer arithmetic");
}

long long ipow(long long base, int e) {
    long long r = 1;
    while (e-- > 0) r *= base;
    return r;
}

// Signed cell masses (a minus b) on the combined grid, flattened in row-major
// order over d axes; entries are numerators over denom^d.
std::vector<long long> cell_difference(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                                       const CombinedGrid& g, long long budget) {
    const int d = a.dim();
    const int L = g.cells();
    long double total_cells = 1.0L;
    for (int c = 0; c < d; ++c) total_cells *= L;
    if (total_cells > static_cast<long double>(budget))
        throw BudgetError("distance computation: combined grid exceeds the evaluation budget");

    std::vector<long long> diff(static_cast<std::size_t>(std::llround((double)total_cells)), 0);

    // Per-cell slab index and length along the (shared) axis grid.
    auto fill = [&](const EmpiricalPermuton& mu, long long sign) {
        const int n = mu.size();
        std::vector<int> slab(L);
        std::vector<long long> len(L);
        for (int t = 0; t < L; ++t) {
            slab[t] = static_cast<int>(g.cuts[t] * n / g.denom);
            len[t] = g.cuts[t + 1] - g.cuts[t];
        }
        // Cube -> range of cells per axis; ranges are contiguous.
        std::vector<int> first_cell(n + 1);
        {
            int t = 0;
            for (int s = 0; s <= n; ++s) {
                while (t < L && slab[t] < s) ++t;
                first_cell[s] = t;
            }
        }
        const long long scale = ipow(n, d - 1) * sign;
        std::vector<int> cell(d), lo(d), hi(d);
        for (int i = 0; i < n; ++i) {
            for (int c = 0; c < d; ++c) {
                const int s = cube_slab(mu.source(), i, c);
                lo[c] = first_cell[s];
                hi[c] = first_cell[s + 1];
            }
            cell = lo;
            while (true) {
                long long mass = scale;
                std::size_t flat = 0;
                for (int c = 0; c < d; ++c) {
                    mass *= len[cell[c]];
                    flat = flat * L + cell[c];
                }
                diff[flat] += mass;
                int c = d - 1;
                while (c >= 0 && ++cell[c] == hi[c]) {
                    cell[c] = lo[c];
                    --c;
                }
                if (c < 0) break;
            }
        }
    };
    fill(a, +1);
    fill(b, -1);
    return diff;
}

// In-place prefix sums along every axis: entry (t_0..t_{d-1}) becomes the
// F-difference numerator at the lattice vertex (t_0+1, ..., t_{d-1}+1).
void prefix_sums(std::vector<long long>& grid, int L, int d) {
    std::size_t stride = 1;
    for (int c = d - 1; c >= 0; --c) {
        const std::size_t block = stride * L;
        for (std::size_t base = 0; base < grid.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off) {
                long long run = 0;
                for (int t = 0; t < L; ++t) {
                    run += grid[base + off + stride * t];
                    grid[base + off + stride * t] = run;
                }
            }
        stride = block;
    }
}

} // namespace

Rational cdf_sup_distance_exact(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                                long long budget) {
    if (a.dim() != b.dim()) throw ValidationError("cdf_sup_distance: dimension mismatch");
    const int d = a.dim();
    const CombinedGrid g = make_grid(a.size(), b.size());
    check_denominator(g.denom, d);
    const int L = g.cells();

    long long best = 0;
    if (d == 2) {
        // Rolling rows keep this O(L) in memory for the large instances used
        // by approximation curves.
        const int n1 = a.size();
        const int n2 = b.size();
        std::vector<int> slab1(L), slab2(L);
        std::vector<long long> len(L);
        std::vector<int> first1(n1 + 1), first2(n2 + 1);
        for (int t = 0; t < L; ++t) {
            slab1[t] = static_cast<int>(g.cuts[t] * n1 / g.denom);
            slab2[t] = static_cast<int>(g.cuts[t] * n2 / g.denom);
            len[t] = g.cuts[t + 1] - g.cuts[t];
        }
        for (int s = 0, t = 0; s <= n1; ++s) {
            while (t < L && slab1[t] < s) ++t;
            first1[s] = t;
        }
        for (int s = 0, t = 0; s <= n2; ++s) {
            while (t < L && slab2[t] < s) ++t;
            first2[s] = t;
        }
        std::vector<long long> row(L), running(L, 0);
        for (int t0 = 0; t0 < L; ++t0) {
            std::fill(row.begin(), row.end(), 0);
            {
                const int i = slab1[t0]; // cube i of a covers this row
                const int s1 = a.source().value(i, 0);
                for (int t1 = first1[s1]; t1 < first1[s1 + 1]; ++t1)
                    row[t1] += static_cast<long long>(n1) * len[t0] * len[t1];
            }
            {
                const int i = slab2[t0];
                const int s1 = b.source().value(i, 0);
                for (int t1 = first2[s1]; t1 < first2[s1 + 1]; ++t1)
                    row[t1] -= static_cast<long long>(n2) * len[t0] * len[t1];
            }
            long long acc = 0;
            for (int t1 = 0; t1 < L; ++t1) {
                acc += row[t1];
                running[t1] += acc;
                best = std::max(best, std::abs(running[t1]));
            }
        }
    } else {
        std::vector<long long> grid = cell_difference(a, b, g, budget);
        prefix_sums(grid, L, d);
        for (long long v : grid) best = std::max(best, std::abs(v));
    }
    return Rational(best, ipow(g.denom, d));
}

double cdf_sup_distance(const EmpiricalPermuton& a, const EmpiricalPermuton& b, long long budget) {
    return to_double(cdf_sup_distance_exact(a, b, budget));
}

Rational box_distance_exact(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                            long long budget) {
    if (a.dim() != b.dim()) throw ValidationError("box_distance: dimension mismatch");
    const int d = a.dim();
    const CombinedGrid g = make_grid(a.size(), b.size());
    check_denominator(g.denom, d);
    const int L = g.cells();

    long double boxes = 1.0L;
    for (int c = 0; c < d; ++c) boxes *= 0.5L * L * (L + 1);
    if (boxes > static_cast<long double>(budget))
        throw BudgetError("box_distance exact: box enumeration exceeds the budget");

    std::vector<long long> grid = cell_difference(a, b, g, budget);
    prefix_sums(grid, L, d);
    // Lattice-aligned boxes are enough: the difference measure of a box is
    // multilinear in each corner coordinate, so the sup sits on the grid.
    auto vertex = [&](const std::vector<int>& u) -> long long {
        // u[c] in [0, L]; vertex value 0 whenever any u[c] == 0.
        long long idx = 0;
        for (int c = 0; c < d; ++c) {
            if (u[c] == 0) return 0;
            idx = idx * L + (u[c] - 1);
        }
        return grid[idx];
    };

    long long best = 0;
    std::vector<int> lo(d, 0), hi(d, 1), corner(d);
    while (true) {
        // Inclusion-exclusion over the 2^d corners of [lo, hi].
        long long mass = 0;
        for (int bits = 0; bits < (1 << d); ++bits) {
            int parity = 0;
            for (int c = 0; c < d; ++c) {
                const bool high = bits & (1 << c);
                corner[c] = high ? hi[c] : lo[c];
                parity ^= high ? 0 : 1;
            }
            mass += (parity ? -1 : 1) * vertex(corner);
        }
        best = std::max(best, std::abs(mass));

        int c = d - 1;
        while (c >= 0) {
            if (hi[c] < L) {
                ++hi[c];
                break;
            }
            if (lo[c] + 1 < L) {
                ++lo[c];
                hi[c] = lo[c] + 1;
                break;
            }
            lo[c] = 0;
            hi[c] = 1;
            --c;
        }
        if (c < 0) break;
    }
    return Rational(best, ipow(g.denom, d));
}

DistanceInterval box_distance(const EmpiricalPermuton& a, const EmpiricalPermuton& b,
                              BoxDistanceMode mode, long long budget) {
    DistanceInterval out;
    if (mode == BoxDistanceMode::exact) {
        const double v = to_double(box_distance_exact(a, b, budget));
        out.lower = out.upper = v;
        out.exact = true;
        return out;
    }
    const double s = cdf_sup_distance(a, b, budget);
    out.lower = s;
    out.upper = std::min(std::ldexp(s, a.dim()), 1.0);
    out.exact = false;
    return out;
}

PointCloud sample_points(const EmpiricalPermuton& mu, int k, std::uint64_t seed) {
    if (k < 1) throw ValidationError("sample_points: k must be >= 1");
    const int n = mu.size();
    const int d = mu.dim();
    Rng rng(seed);
    PointCloud cloud;
    cloud.d = d;
    cloud.seed = seed;
    cloud.generator = "empirical";
    cloud.points.reserve(k);
    for (int a = 0; a < k; ++a) {
        const int i = static_cast<int>(rng.below(n));
        std::vector<double> x(d);
        for (int c = 0; c < d; ++c)
            x[c] = (cube_slab(mu.source(), i, c) + rng.uniform()) / n;
        cloud.points.push_back(std::move(x));
    }
    return cloud;
}

DPermutation sample_pattern(const EmpiricalPermuton& mu, int k, std::uint64_t seed) {
    constexpr int kRetryCap = 64;
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        PointCloud cloud = sample_points(mu, k, mix_seed(seed, attempt));
        try {
            return perm_of_points(cloud.points);
        } catch (const ValidationError&) {
            // coordinate tie; resample
        }
    }
    throw BudgetError("sample_pattern: retry cap hit while resampling ties");
}

McEstimate freq_permuton(const DPermutation& tau, const EmpiricalPermuton& mu, long long trials,
                         std::uint64_t seed) {
    if (trials < 1) throw ValidationError("freq_permuton: trials must be >= 1");
    if (tau.dim() != mu.dim()) throw ValidationError("freq_permuton: dimension mismatch");
    long long hits = 0;
    for (long long t = 0; t < trials; ++t)
        if (sample_pattern(mu, tau.size(), mix_seed(seed, t)) == tau) ++hits;
    McEstimate out;
    out.trials = trials;
    out.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
    return out;
}

namespace {

long long factorial_ll(int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

ExactLawI64 exact_sampled_pattern_law_fast(const EmpiricalPermuton& mu, int k, int max_n,
                                           int max_k) {
    const int n = mu.size();
    const int d = mu.dim();
    if (n > max_n || k > max_k)
        throw BudgetError("freq_permuton_exact: instance exceeds the configured size limits");
    if (k < 1) throw ValidationError("freq_permuton_exact: k must be >= 1");

    const long long kfact = factorial_ll(k);
    long double denom_check = 1.0L;
    for (int c = 0; c < d; ++c) denom_check *= static_cast<long double>(kfact);
    for (int a = 0; a < k; ++a) denom_check *= n;
    if (denom_check > 4.0e18L)
        throw BudgetError("freq_permuton_exact: denominator does not fit 64-bit integers");

    ExactLawI64 law;
    law.k = k;
    law.d = d;
    law.denominator = 1;
    for (int a = 0; a < k; ++a) law.denominator *= n;
    for (int c = 0; c < d; ++c) law.denominator *= kfact;
    law.mass.assign(pattern_code_count(k, d), 0);

    // Assignment of each of the k points to one of the n cubes.
    std::vector<int> assign(k, 0);
    std::vector<int> group_of(k);
    std::vector<std::vector<int>> members; // group -> point indices
    std::vector<int> ranks(static_cast<std::size_t>(k) * d);
    std::vector<int> by_first(k);
    std::vector<std::vector<int>> cols(d - 1, std::vector<int>(k));

    while (true) {
        // Group points sharing a cube; order groups by cube slab per coordinate.
        members.clear();
        std::vector<int> cube_to_group;
        for (int a = 0; a < k; ++a) {
            int gindex = -1;
            for (std::size_t g = 0; g < members.size(); ++g)
                if (assign[members[g][0]] == assign[a]) gindex = static_cast<int>(g);
            if (gindex < 0) {
                gindex = static_cast<int>(members.size());
                members.emplace_back();
            }
            members[gindex].push_back(a);
            group_of[a] = gindex;
        }
        const int gcount = static_cast<int>(members.size());

        // Weight of each (assignment, within-group orders) combination over
        // the common denominator: (k! / prod m_g!)^d.
        long long base = kfact;
        for (const auto& m : members) base /= factorial_ll(static_cast<int>(m.size()));
        long long weight = 1;
        for (int c = 0; c < d; ++c) weight *= base;

        // Enumerate, per coordinate and group, a permutation of the group's
        // points (mixed-radix odometer over factorials).
        std::vector<int> radix;
        for (int c = 0; c < d; ++c)
            for (const auto& m : members) radix.push_back(static_cast<int>(factorial_ll(static_cast<int>(m.size()))));
        std::vector<int> digit(radix.size(), 0);

        while (true) {
            // ranks[c*k + a] = rank of point a in coordinate c.
            for (int c = 0; c < d; ++c) {
                // Groups ordered by slab; points within a group ordered by the
                // chosen permutation.
                std::vector<std::pair<int, int>> slabs; // (slab, group)
                for (int g = 0; g < gcount; ++g)
                    slabs.emplace_back(cube_slab(mu.source(), assign[members[g][0]], c), g);
                std::sort(slabs.begin(), slabs.end());
                int next_rank = 0;
                for (auto [slab, g] : slabs) {
                    const auto& m = members[g];
                    const int msize = static_cast<int>(m.size());
                    // Unrank digit[slot for (c,g)] into a permutation of m.
                    std::vector<int> pool(m.begin(), m.end());
                    int lehmer = digit[c * gcount + g];
                    for (int pos = 0; pos < msize; ++pos) {
                        long long f = factorial_ll(msize - 1 - pos);
                        const int pick = static_cast<int>(lehmer / f);
                        lehmer = static_cast<int>(lehmer % f);
                        ranks[static_cast<std::size_t>(c) * k + pool[pick]] = next_rank++;
                        pool.erase(pool.begin() + pick);
                    }
                }
            }

            for (int a = 0; a < k; ++a) by_first[ranks[a]] = a;
            for (int c = 1; c < d; ++c)
                for (int r = 0; r < k; ++r)
                    cols[c - 1][r] = ranks[static_cast<std::size_t>(c) * k + by_first[r]];

            // pattern code straight from 0-based columns
            long long code = 0;
            for (int c = 0; c + 1 < d; ++c) {
                // Lehmer rank of cols[c]
                long long idx = 0;
                for (int a = 0; a < k; ++a) {
                    int smaller = 0;
                    for (int b2 = a + 1; b2 < k; ++b2)
                        if (cols[c][b2] < cols[c][a]) ++smaller;
                    idx += smaller * factorial_ll(k - 1 - a);
                }
                code = code * kfact + idx;
            }
            law.mass[static_cast<std::size_t>(code)] += weight;

            int pos = static_cast<int>(digit.size()) - 1;
            while (pos >= 0 && ++digit[pos] == radix[pos]) digit[pos--] = 0;
            if (pos < 0) break;
        }

        int a = k - 1;
        while (a >= 0 && ++assign[a] == n) assign[a--] = 0;
        if (a < 0) break;
    }
    return law;
}

ExactLawI64 exact_freq_law_fast(const DPermutation& sigma, int k) {
    const int n = sigma.size();
    const int d = sigma.dim();
    if (k < 1 || k > n) throw ValidationError("exact_freq_law_fast: need 1 <= k <= n");
    const long long kfact = factorial_ll(k);

    ExactLawI64 law;
    law.k = k;
    law.d = d;
    law.denominator = binomial(n, k).convert_to<long long>();
    law.mass.assign(pattern_code_count(k, d), 0);

    std::vector<int> idx(k);
    for (int a = 0; a < k; ++a) idx[a] = a;
    while (true) {
        long long code = 0;
        for (int c = 0; c + 1 < d; ++c) {
            long long lehmer = 0;
            for (int a = 0; a < k; ++a) {
                int smaller = 0;
                for (int b = a + 1; b < k; ++b)
                    if (sigma.value(idx[b], c) < sigma.value(idx[a], c)) ++smaller;
                lehmer += smaller * factorial_ll(k - 1 - a);
            }
            code = code * kfact + lehmer;
        }
        ++law.mass[static_cast<std::size_t>(code)];

        int a = k - 1;
        while (a >= 0 && idx[a] == n - k + a) --a;
        if (a < 0) break;
        ++idx[a];
        for (int b = a + 1; b < k; ++b) idx[b] = idx[b - 1] + 1;
    }
    return law;
}

std::map<DPermutation, Rational> exact_sampled_pattern_law(const EmpiricalPermuton& mu, int k,
                                                           int max_n, int max_k) {
    const ExactLawI64 law = exact_sampled_pattern_law_fast(mu, k, max_n, max_k);
    std::map<DPermutation, Rational> out;
    for (std::size_t code = 0; code < law.mass.size(); ++code)
        if (law.mass[code] != 0)
            out.emplace(pattern_from_code(static_cast<long long>(code), k, mu.dim()),
                        Rational(law.mass[code], law.denominator));
    return out;
}

Rational freq_permuton_exact(const DPermutation& tau, const EmpiricalPermuton& mu, int max_n,
                             int max_k) {
    if (tau.dim() != mu.dim()) throw ValidationError("freq_permuton_exact: dimension mismatch");
    const ExactLawI64 law = exact_sampled_pattern_law_fast(mu, tau.size(), max_n, max_k);
    return Rational(law.mass[static_cast<std::size_t>(pattern_code(tau))], law.denominator);
}

std::vector<ApproximationRow> approximation_curve(const EmpiricalPermuton& mu,
                                                  const std::vector<int>& k_list, int reps,
                                                  std::uint64_t seed) {
    if (k_list.empty()) throw ValidationError("approximation_curve: empty k list");
    if (reps < 1) throw ValidationError("approximation_curve: reps must be >= 1");
    std::vector<ApproximationRow> rows;
    const int d = mu.dim();
    for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
        const int k = k_list[ki];
        std::vector<double> lower(reps), upper(reps);
        for (int r = 0; r < reps; ++r) {
            const DPermutation pat = sample_pattern(mu, k, mix_seed(seed, ki * 100003ULL + r));
            const DistanceInterval di =
                box_distance(mu, EmpiricalPermuton(pat), BoxDistanceMode::bound);
            lower[r] = di.lower;
            upper[r] = di.upper;
        }
        std::sort(lower.begin(), lower.end());
        std::sort(upper.begin(), upper.end());
        ApproximationRow row;
        row.k = k;
        row.median_lower = lower[reps / 2];
        row.median_upper = upper[reps / 2];
        row.p90_lower = lower[std::min(reps - 1, (reps * 9) / 10)];
        row.reference_bound =
            d * std::ldexp(1.0, d + 2) * std::pow(static_cast<double>(k), -0.25);
        rows.push_back(row);
    }
    return rows;
}

EnsembleSampler ensemble_from(PermSampler sampler) {
    return [sampler = std::move(sampler)](int n, int count, std::uint64_t seed) {
        std::vector<DPermutation> out;
        out.reserve(count);
        for (int r = 0; r < count; ++r) out.push_back(sampler(n, mix_seed(seed, r)));
        return out;
    };
}

ConvergenceReport convergence_report(const EnsembleSampler& sampler, const DPermutation& pattern,
                                     const std::vector<int>& n_list, int reps, long long trials,
                                     std::uint64_t seed) {
    if (reps < 1) throw ValidationError("convergence_report: reps must be >= 1");
    ConvergenceReport report;
    report.pattern = pattern;
    report.trials_per_rep = trials;
    const int k = pattern.size();
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const int n = n_list[ni];
        const std::uint64_t n_seed = mix_seed(seed, ni * 1000003ULL);
        const std::vector<DPermutation> draws = sampler(n, reps, n_seed);
        if (static_cast<int>(draws.size()) != reps)
            throw ValidationError("convergence_report: sampler returned a wrong batch size");

        ConvergenceRow row;
        row.n = n;
        row.reps = reps;
        std::vector<double> estimates(reps, 0.0);
        std::vector<std::string> sampled(reps);
        // Exact enumeration beats subset sampling whenever C(n,k) fits the
        // trial budget; beyond that the estimator is Monte Carlo as stated.
        const bool exact = k <= 6 && binomial(n, k) <= trials;
        parallel_for(reps, [&](int r) {
            const DPermutation& sigma = draws[r];
            const std::uint64_t s = mix_seed(n_seed, 7777 + r);
            estimates[r] = exact ? to_double(freq(pattern, sigma, k))
                                 : freq_sampled(pattern, sigma, trials, s).estimate;

            // one uniform size-k pattern per draw, for the condition-(4) law
            Rng rng(mix_seed(s, 2));
            std::vector<int> idx;
            for (int m = n - k; m < n; ++m) {
                int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
                if (std::find(idx.begin(), idx.end(), v) != idx.end()) v = m;
                idx.push_back(v);
            }
            std::sort(idx.begin(), idx.end());
            for (int& v : idx) ++v;
            sampled[r] = pattern_at(sigma, IndexSet(idx)).to_string();
        });
        for (const auto& tau : sampled) ++row.sampled_pattern_counts[tau];
        double sum = 0.0;
        for (double e : estimates) sum += e;
        row.mean = sum / reps;
        double var = 0.0;
        for (double e : estimates) var += (e - row.mean) * (e - row.mean);
        row.se = reps > 1 ? std::sqrt(var / (reps * (reps - 1.0))) : 0.0;
        report.rows.push_back(std::move(row));
    }

    bool inc = true, dec = true, constant = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        if (report.rows[i].mean > report.rows[i - 1].mean) dec = false, constant = false;
        if (report.rows[i].mean < report.rows[i - 1].mean) inc = false, constant = false;
    }
    report.trend = constant ? "constant" : inc ? "increasing" : dec ? "decreasing" : "mixed";
    return report;
}

ConvergenceReport convergence_report(const PermSampler& sampler, const DPermutation& pattern,
                                     const std::vector<int>& n_list, int reps, long long trials,
                                     std::uint64_t seed) {
    return convergence_report(ensemble_from(sampler), pattern, n_list, reps, trials, seed);
}

} // namespace permutonlab
