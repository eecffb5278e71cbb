#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "permutonlab/oracle.hpp"
#include "permutonlab/permuton.hpp"
#include "permutonlab/rng.hpp"
#include "permutonlab/separable.hpp"
#include "permutonlab/stats.hpp"

using namespace permutonlab;

namespace {

DPermutation random_dperm(int n, int d, Rng& rng) {
    std::vector<std::vector<int>> cols(d - 1);
    for (auto& col : cols) {
        col.resize(n);
        for (int i = 0; i < n; ++i) col[i] = i + 1;
        for (int i = n - 1; i > 0; --i) std::swap(col[i], col[rng.below(i + 1)]);
    }
    return DPermutation::from_one_based(cols);
}

} // namespace

TEST_CASE("cdf boundary values and range checks") {
    const EmpiricalPermuton mu(dperm({{1, 5, 2, 3, 4}, {3, 2, 5, 1, 4}}));
    CHECK(mu.cdf({1.0, 1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(mu.cdf({0.0, 0.7, 0.9}) == 0.0);
    CHECK(mu.cdf({0.7, 0.0, 0.9}) == 0.0);
    CHECK_THROWS_AS(mu.cdf({0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(mu.cdf({0.5, 0.5, 1.5}), ValidationError);

    // exact rational evaluation agrees with the double path
    const Rational f = mu.cdf_exact({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    CHECK(mu.cdf({0.5, 0.5, 0.5}) == doctest::Approx(to_double(f)));
}

TEST_CASE("uniform marginal identity holds exactly on lattice slabs") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(3));
        const int n = 1 + static_cast<int>(rng.below(7));
        const EmpiricalPermuton mu(random_dperm(n, d, rng));
        for (int c = 0; c < d; ++c)
            for (int a = 0; a <= n; ++a)
                for (int b = a; b <= n; ++b)
                    CHECK(mu.slab_mass(c, a, b) == Rational(b - a, n));
    }
}

TEST_CASE("cdf is Lipschitz with the coordinate-sum constant") {
    Rng rng(32);
    for (int rep = 0; rep < 2000; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const int n = 1 + static_cast<int>(rng.below(6));
        const EmpiricalPermuton mu(random_dperm(n, d, rng));
        std::vector<double> x(d), y(d);
        double budget = 0.0;
        for (int c = 0; c < d; ++c) {
            x[c] = rng.uniform();
            y[c] = rng.uniform();
            budget += std::abs(y[c] - x[c]);
        }
        CHECK(std::abs(mu.cdf(y) - mu.cdf(x)) <= budget + 1e-12);
    }
}

TEST_CASE("sup distance between the two size-2 permutons") {
    const EmpiricalPermuton up(dperm({{1, 2}}));
    const EmpiricalPermuton down(dperm({{2, 1}}));
    CHECK(cdf_sup_distance_exact(up, up) == 0);
    // F_12(1/2,1/2) = 1/2 while F_21(1/2,1/2) = 0, and no vertex does better
    CHECK(cdf_sup_distance_exact(up, down) == Rational(1, 2));
    CHECK(std::abs(up.cdf({0.5, 0.5}) - down.cdf({0.5, 0.5})) == doctest::Approx(0.5));
    // box [0,1/2]^2 carries mass 1/2 vs 0
    CHECK(box_distance_exact(up, down) == Rational(1, 2));

    const DistanceInterval bound = box_distance(up, down, BoxDistanceMode::bound);
    CHECK(bound.lower == doctest::Approx(0.5));
    CHECK(bound.upper == doctest::Approx(1.0)); // min(2^d s, 1)
    const DistanceInterval exact = box_distance(up, down, BoxDistanceMode::exact);
    CHECK(exact.lower == exact.upper);
    CHECK(exact.exact);

    CHECK_THROWS_AS(cdf_sup_distance_exact(up, EmpiricalPermuton(dperm({{1}, {1}}))),
                    ValidationError);
}

TEST_CASE("sandwich between sup distance and box distance on random pairs") {
    Rng rng(33);
    for (int rep = 0; rep < 60; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const EmpiricalPermuton a(random_dperm(1 + static_cast<int>(rng.below(5)), d, rng));
        const EmpiricalPermuton b(random_dperm(1 + static_cast<int>(rng.below(5)), d, rng));
        const Rational sup = cdf_sup_distance_exact(a, b);
        const Rational box = box_distance_exact(a, b);
        CHECK(sup <= box);
        CHECK(box <= Rational(1 << d) * sup);
        // bound mode brackets the exact value
        const DistanceInterval di = box_distance(a, b, BoxDistanceMode::bound);
        CHECK(di.lower <= to_double(box) + 1e-12);
        CHECK(to_double(box) <= di.upper + 1e-12);
    }
}

TEST_CASE("the rolling 2-d sup distance matches a brute-force evaluation") {
    Rng rng(34);
    for (int rep = 0; rep < 20; ++rep) {
        const int n1 = 1 + static_cast<int>(rng.below(5));
        const int n2 = 1 + static_cast<int>(rng.below(5));
        const EmpiricalPermuton a(random_dperm(n1, 2, rng));
        const EmpiricalPermuton b(random_dperm(n2, 2, rng));
        // evaluate |F1-F2| on the refined 1/(n1 n2) lattice, which contains
        // the combined grid where the sup is attained
        Rational best = 0;
        const int D = n1 * n2;
        for (int i = 0; i <= D; ++i)
            for (int j = 0; j <= D; ++j) {
                const Rational x(i, D), y(j, D);
                const Rational diff = a.cdf_exact({x, y}) - b.cdf_exact({x, y});
                best = std::max(best, Rational(abs(diff)));
            }
        CHECK(cdf_sup_distance_exact(a, b) == best);
    }
}

TEST_CASE("sampling points and patterns") {
    const EmpiricalPermuton mu(dperm({{1, 5, 2, 3, 4}, {3, 2, 5, 1, 4}}));

    SUBCASE("k = 1 gives the trivial pattern") {
        CHECK(sample_pattern(mu, 1, 99) == dperm({{1}, {1}}));
    }
    SUBCASE("clouds are deterministic given the seed") {
        const PointCloud a = sample_points(mu, 50, 7);
        const PointCloud b = sample_points(mu, 50, 7);
        CHECK(a.points == b.points);
        CHECK(a.seed == 7);
    }
    SUBCASE("coordinates stay in the unit cube and marginals look uniform") {
        const PointCloud cloud = sample_points(mu, 4000, 11);
        for (int c = 0; c < 3; ++c) {
            std::vector<double> coords;
            for (const auto& p : cloud.points) {
                CHECK(p[c] >= 0.0);
                CHECK(p[c] <= 1.0);
                coords.push_back(p[c]);
            }
            CHECK(ks_uniform_pvalue(coords) > 1e-4);
        }
    }
}

TEST_CASE("exact permuton pattern law") {
    SUBCASE("k = 1 is trivial") {
        const EmpiricalPermuton mu(dperm({{2, 1, 3}}));
        CHECK(freq_permuton_exact(dperm({{1}}), mu) == 1);
    }
    SUBCASE("single cube splits size-2 patterns evenly") {
        const EmpiricalPermuton mu(dperm({{1}}));
        CHECK(freq_permuton_exact(dperm({{1, 2}}), mu) == Rational(1, 2));
        CHECK(freq_permuton_exact(dperm({{2, 1}}), mu) == Rational(1, 2));
        // d = 3: each of the four size-2 patterns gets 1/4
        const EmpiricalPermuton mu3(dperm({{1}, {1}}));
        CHECK(freq_permuton_exact(dperm({{1, 2}, {2, 1}}), mu3) == Rational(1, 4));
    }
    SUBCASE("masses sum to one") {
        Rng rng(35);
        for (int rep = 0; rep < 8; ++rep) {
            const int d = 2 + static_cast<int>(rng.below(2));
            const EmpiricalPermuton mu(random_dperm(1 + static_cast<int>(rng.below(5)), d, rng));
            for (int k = 1; k <= 3; ++k) {
                const auto law = exact_sampled_pattern_law(mu, k);
                Rational sum = 0;
                for (const auto& [tau, mass] : law) sum += mass;
                CHECK(sum == 1);
            }
        }
    }
    SUBCASE("size limits are enforced") {
        Rng rng(1);
        const EmpiricalPermuton mu(random_dperm(7, 2, rng));
        CHECK_THROWS_AS(freq_permuton_exact(dperm({{1, 2}}), mu), BudgetError);
    }
}

TEST_CASE("exact law agrees with sampled patterns and with exact freq") {
    Rng rng(36);
    for (int rep = 0; rep < 4; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const int n = 2 + static_cast<int>(rng.below(3));
        const DPermutation sigma = random_dperm(n, d, rng);
        const EmpiricalPermuton mu(sigma);
        const int k = std::min(n, 2 + static_cast<int>(rng.below(2)));

        // Monte Carlo agreement within ~4 SE on one informative pattern
        const auto law = exact_sampled_pattern_law(mu, k);
        for (const auto& [tau, mass] : law) {
            if (to_double(mass) < 0.02) continue;
            const McEstimate est = freq_permuton(tau, mu, 4000, mix_seed(1234, rep));
            const double se = std::max(est.std_error, 1e-4);
            CHECK(std::abs(est.estimate - to_double(mass)) <= 4.5 * se);
            break;
        }

        // frequency lemma |freq - permuton freq| <= C(k,2)/n, exactly
        const ExactLawI64 plaw = exact_sampled_pattern_law_fast(mu, k);
        const ExactLawI64 flaw = exact_freq_law_fast(sigma, k);
        const Rational bound(k * (k - 1) / 2, n);
        for (std::size_t code = 0; code < plaw.mass.size(); ++code) {
            const Rational diff = Rational(flaw.mass[code], flaw.denominator) -
                                  Rational(plaw.mass[code], plaw.denominator);
            CHECK(abs(diff) <= bound);
        }
    }
}

TEST_CASE("exact freq law matches occ pattern by pattern") {
    Rng rng(37);
    const DPermutation sigma = random_dperm(6, 2, rng);
    const ExactLawI64 law = exact_freq_law_fast(sigma, 3);
    for_each_d_permutation(3, 2, 1000, [&](const DPermutation& tau) {
        CHECK(BigInt(law.mass[static_cast<std::size_t>(pattern_code(tau))]) == occ(tau, sigma));
    });
}

TEST_CASE("approximation curve reports sane summaries") {
    const EmpiricalPermuton mu(dperm({{3, 2, 5, 1, 4}}));
    const auto rows = approximation_curve(mu, {16, 64}, 9, 99);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.median_lower >= 0.0);
        CHECK(row.median_lower <= row.median_upper);
        CHECK(row.median_upper <= 1.0);
        CHECK(row.p90_lower >= row.median_lower);
        CHECK(row.reference_bound == doctest::Approx(2.0 * 16.0 * std::pow(row.k, -0.25)));
    }
    CHECK(rows[1].median_lower <= rows[0].median_lower + 0.05);
    CHECK_THROWS_AS(approximation_curve(mu, {}, 3, 1), ValidationError);
}

TEST_CASE("marginal inversion frequency of uniform 3-separable permutations is exactly balanced") {
    // the sign-flip involution on sign trees inverts one marginal, so the
    // expected (2,1)-frequency of the first marginal is 1/2 at every n
    const PermSampler sampler = [](int n, std::uint64_t seed) {
        return marginal(sample_uniform_separable(n, 3, seed), {0, 1});
    };
    const ConvergenceReport rep =
        convergence_report(sampler, dperm({{2, 1}}), {6, 12, 24}, 400, 1000, 17);
    for (const auto& row : rep.rows) {
        CHECK(std::abs(row.mean - 0.5) <= 4.0 * std::max(row.se, 1e-4));
    }
}

TEST_CASE("convergence report basics") {
    const DPermutation fixed = dperm({{2, 1, 3}});
    const PermSampler constant = [&](int, std::uint64_t) { return fixed; };
    const DPermutation inv = dperm({{2, 1}});

    // small n: the report's estimator is exact, so rows have zero variance
    const ConvergenceReport rep = convergence_report(constant, inv, {3, 3, 3}, 6, 200, 5);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        CHECK(row.se == 0.0);
        CHECK(row.mean == doctest::Approx(1.0 / 3.0)); // one inversion in (2,1,3)
        long long total = 0;
        for (const auto& [tau, count] : row.sampled_pattern_counts) total += count;
        CHECK(total == row.reps);
    }
    CHECK(rep.trend == "constant");
}
