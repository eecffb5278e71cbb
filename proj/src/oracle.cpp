#include "permutonlab/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "permutonlab/permuton.hpp"
#include "permutonlab/rng.hpp"
#include "permutonlab/schnyder.hpp"
#include "permutonlab/separable.hpp"
#include "permutonlab/stats.hpp"

namespace permutonlab {

void EnumerationBudget::require_positive() const {
    if (max_perm_size < 1 || max_dim < 2 || max_pattern_size < 1 || max_schnyder_size < 1 ||
        max_states < 1)
        throw ValidationError("enumeration budget entries must be positive");
}

namespace {

long long factorial_ll(int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

void for_each_d_permutation(int n, int d, long long max_states,
                            const std::function<void(const DPermutation&)>& fn) {
    if (n < 1 || d < 2) throw ValidationError("for_each_d_permutation: need n >= 1, d >= 2");
    const long long nf = factorial_ll(n);
    long double total = 1.0L;
    for (int j = 0; j + 1 < d; ++j) total *= static_cast<long double>(nf);
    if (total > static_cast<long double>(max_states))
        throw BudgetError("for_each_d_permutation: (n!)^(d-1) exceeds the state budget");

    std::vector<std::vector<int>> cols(d - 1, std::vector<int>(n));
    for (auto& col : cols)
        for (int i = 0; i < n; ++i) col[i] = i + 1;

    // odometer over columns, each cycled lexicographically via next_permutation
    while (true) {
        fn(DPermutation::from_one_based(cols));
        int j = d - 2;
        while (j >= 0 && !std::next_permutation(cols[j].begin(), cols[j].end())) --j;
        if (j < 0) break;
        // next_permutation already reset the wrapped columns to ascending
    }
}

std::vector<DPermutation> all_d_permutations(int n, int d, long long max_states) {
    std::vector<DPermutation> out;
    for_each_d_permutation(n, d, max_states, [&](const DPermutation& p) { out.push_back(p); });
    return out;
}

long long pattern_code(const DPermutation& p) {
    const int k = p.size();
    const long long kfact = factorial_ll(k);
    long long code = 0;
    for (int j = 0; j + 1 < p.dim(); ++j) {
        long long lehmer = 0;
        for (int a = 0; a < k; ++a) {
            int smaller = 0;
            for (int b = a + 1; b < k; ++b)
                if (p.value(b, j) < p.value(a, j)) ++smaller;
            lehmer += smaller * factorial_ll(k - 1 - a);
        }
        code = code * kfact + lehmer;
    }
    return code;
}

DPermutation pattern_from_code(long long code, int k, int d) {
    const long long kfact = factorial_ll(k);
    std::vector<std::vector<int>> cols(d - 1);
    for (int j = d - 2; j >= 0; --j) {
        long long lehmer = code % kfact;
        code /= kfact;
        std::vector<int> pool(k);
        for (int v = 0; v < k; ++v) pool[v] = v + 1;
        std::vector<int> col;
        for (int a = 0; a < k; ++a) {
            const long long f = factorial_ll(k - 1 - a);
            const int pick = static_cast<int>(lehmer / f);
            lehmer %= f;
            col.push_back(pool[pick]);
            pool.erase(pool.begin() + pick);
        }
        cols[j] = std::move(col);
    }
    return DPermutation::from_one_based(cols);
}

long long pattern_code_count(int k, int d) {
    const long long kfact = factorial_ll(k);
    long long total = 1;
    for (int j = 0; j + 1 < d; ++j) total *= kfact;
    return total;
}

std::vector<BinaryTreeShape> enumerate_binary_plane_trees(int k) {
    if (k < 1) throw ValidationError("enumerate_binary_plane_trees: k must be >= 1");
    if (k > 10) throw BudgetError("enumerate_binary_plane_trees: k capped at 10");
    if (k == 1) {
        BinaryTreeShape leaf;
        leaf.children.push_back({-1, -1});
        leaf.is_leaf.push_back(true);
        leaf.leaves = 1;
        return {leaf};
    }
    std::vector<BinaryTreeShape> out;
    for (int l = 1; l < k; ++l) {
        const auto lefts = enumerate_binary_plane_trees(l);
        const auto rights = enumerate_binary_plane_trees(k - l);
        for (const auto& L : lefts)
            for (const auto& R : rights) {
                BinaryTreeShape t;
                const int ln = static_cast<int>(L.children.size());
                const int rn = static_cast<int>(R.children.size());
                t.children.resize(1 + ln + rn);
                t.is_leaf.resize(1 + ln + rn);
                t.leaves = k;
                t.children[0] = {1, 1 + ln};
                t.is_leaf[0] = false;
                for (int v = 0; v < ln; ++v) {
                    t.is_leaf[1 + v] = L.is_leaf[v];
                    t.children[1 + v] = L.is_leaf[v]
                                            ? std::array<int, 2>{-1, -1}
                                            : std::array<int, 2>{L.children[v][0] + 1,
                                                                 L.children[v][1] + 1};
                }
                for (int v = 0; v < rn; ++v) {
                    t.is_leaf[1 + ln + v] = R.is_leaf[v];
                    t.children[1 + ln + v] = R.is_leaf[v]
                                                 ? std::array<int, 2>{-1, -1}
                                                 : std::array<int, 2>{R.children[v][0] + 1 + ln,
                                                                      R.children[v][1] + 1 + ln};
                }
                out.push_back(std::move(t));
            }
    }
    return out;
}

namespace {

// Pattern encoded by a sign-labeled binary tree, computed directly from the
// flip description (independent of the separable module's implementation).
DPermutation pattern_of_signed_tree(const BinaryTreeShape& t,
                                    const std::vector<std::vector<int>>& signs_by_vertex, int d) {
    const int total = static_cast<int>(t.children.size());
    // leaf numbers, original order
    std::vector<int> number(total, 0);
    {
        int next = 0;
        std::vector<int> stack = {0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (t.is_leaf[v]) {
                number[v] = ++next;
                continue;
            }
            stack.push_back(t.children[v][1]);
            stack.push_back(t.children[v][0]);
        }
    }
    // value of leaf i = its position in the flipped traversal
    std::vector<std::vector<int>> cols(d - 1, std::vector<int>(t.leaves));
    for (int j = 0; j + 1 < d; ++j) {
        auto& col = cols[j];
        int pos = 0;
        std::vector<int> stack = {0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (t.is_leaf[v]) {
                col[number[v] - 1] = ++pos;
                continue;
            }
            const bool flip = signs_by_vertex[v][j] < 0;
            stack.push_back(t.children[v][flip ? 0 : 1]);
            stack.push_back(t.children[v][flip ? 1 : 0]);
        }
    }
    return DPermutation::from_one_based(cols);
}

} // namespace

std::map<DPermutation, Rational> exact_pattern_law(int k, const std::vector<Rational>& p,
                                                   int k_max) {
    if (k < 1) throw ValidationError("exact_pattern_law: k must be >= 1");
    if (k > k_max) throw BudgetError("exact_pattern_law: k exceeds the cap");
    for (const Rational& q : p)
        if (q < 0 || q > 1) throw ValidationError("exact_pattern_law: probabilities in [0,1]");
    const int d = static_cast<int>(p.size()) + 1;

    std::map<DPermutation, Rational> law;
    const auto trees = enumerate_binary_plane_trees(k);
    const Rational tree_mass = Rational(1, static_cast<long long>(trees.size()));
    const long long sign_values = 1LL << (d - 1);

    for (const auto& t : trees) {
        std::vector<int> internal;
        for (std::size_t v = 0; v < t.children.size(); ++v)
            if (!t.is_leaf[v]) internal.push_back(static_cast<int>(v));
        const int m = static_cast<int>(internal.size());

        std::vector<long long> digits(m, 0);
        std::vector<std::vector<int>> signs(t.children.size());
        while (true) {
            Rational mass = tree_mass;
            for (int i = 0; i < m; ++i) {
                std::vector<int> label(d - 1);
                for (int j = 0; j + 1 < d; ++j) {
                    const bool plus = (digits[i] >> j) & 1;
                    label[j] = plus ? 1 : -1;
                    mass *= plus ? p[j] : (1 - p[j]);
                }
                signs[internal[i]] = std::move(label);
            }
            if (mass != 0) law[pattern_of_signed_tree(t, signs, d)] += mass;

            int i = m - 1;
            while (i >= 0 && ++digits[i] == sign_values) digits[i--] = 0;
            if (i < 0) break;
        }
    }
    return law;
}

namespace {

// All distinct images of a 3-pattern under the 48 symmetries of the cube
// (coordinate permutations and reflections), as 3-dimensional patterns.
std::vector<DPermutation> cube_symmetry_images(const DPermutation& tau) {
    const int k = tau.size();
    std::vector<std::array<int, 3>> pts(k);
    for (int i = 0; i < k; ++i) pts[i] = {i, tau.value(i, 0), tau.value(i, 1)};

    std::set<DPermutation> images;
    int axes[3] = {0, 1, 2};
    std::sort(axes, axes + 3);
    do {
        for (int flips = 0; flips < 8; ++flips) {
            std::vector<std::array<int, 3>> moved(k);
            for (int i = 0; i < k; ++i)
                for (int c = 0; c < 3; ++c) {
                    int v = pts[i][axes[c]];
                    if (flips & (1 << c)) v = k - 1 - v;
                    moved[i][c] = v;
                }
            std::sort(moved.begin(), moved.end());
            std::vector<std::vector<int>> cols(2, std::vector<int>(k));
            for (int i = 0; i < k; ++i) {
                cols[0][i] = moved[i][1] + 1;
                cols[1][i] = moved[i][2] + 1;
            }
            images.insert(DPermutation::from_one_based(cols));
        }
    } while (std::next_permutation(axes, axes + 3));
    return {images.begin(), images.end()};
}

} // namespace

bool is_separable_by_avoidance(const DPermutation& sigma) {
    const int d = sigma.dim();
    if (d > 3) throw BudgetError("is_separable_by_avoidance: implemented for d <= 3 only");
    const DPermutation p2413 = dperm({{2, 4, 1, 3}});
    const DPermutation p3142 = dperm({{3, 1, 4, 2}});

    if (d == 2) return occ(p2413, sigma) == 0 && occ(p3142, sigma) == 0;

    static const std::vector<DPermutation> forbidden =
        cube_symmetry_images(dperm({{1, 3, 2}, {2, 1, 3}}));
    for (const auto& tau : forbidden)
        if (occ(tau, sigma) != 0) return false;
    for (const auto& coords : {std::vector<int>{0, 1}, {0, 2}, {1, 2}}) {
        const DPermutation m = marginal(sigma, coords);
        if (occ(p2413, m) != 0 || occ(p3142, m) != 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Verification manifest
// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

CheckResult timed(const std::string& name, const std::function<std::string()>& body) {
    CheckResult res;
    res.name = name;
    const auto start = Clock::now();
    try {
        res.detail = body();
        res.pass = true;
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    res.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return res;
}

std::string require(bool cond, const std::string& message) {
    if (!cond) throw std::runtime_error(message);
    return "";
}

} // namespace

std::vector<CheckResult> run_verification(const EnumerationBudget& budget) {
    budget.require_positive();
    std::vector<CheckResult> results;
    const int np = std::min(budget.max_perm_size, 4);
    const int ns = std::min(budget.max_schnyder_size, 4);
    const int kp = std::min(budget.max_pattern_size, 3);

    results.push_back(timed("pattern-frequencies-sum-to-one", [&] {
        for (int d = 2; d <= std::min(3, budget.max_dim); ++d)
            for (int n = 2; n <= np; ++n) {
                Rng rng(7 + n + 10 * d);
                for (int rep = 0; rep < 3; ++rep) {
                    std::vector<std::vector<int>> cols(d - 1);
                    for (auto& col : cols) {
                        col.resize(n);
                        for (int i = 0; i < n; ++i) col[i] = i + 1;
                        for (int i = n - 1; i > 0; --i)
                            std::swap(col[i], col[rng.below(i + 1)]);
                    }
                    const DPermutation sigma = DPermutation::from_one_based(cols);
                    for (int k = 1; k <= std::min(n, kp); ++k) {
                        Rational sum = 0;
                        for_each_d_permutation(k, d, budget.max_states,
                                               [&](const DPermutation& tau) { sum += freq(tau, sigma); });
                        require(sum == 1, "freq over all patterns of size " + std::to_string(k) +
                                              " does not sum to 1");
                    }
                }
            }
        return std::string("exact rational sums");
    }));

    results.push_back(timed("block-sum-associative", [&] {
        Rng rng(11);
        for (int rep = 0; rep < 20; ++rep) {
            const int d = 2 + static_cast<int>(rng.below(2));
            auto random_perm = [&](int n) {
                std::vector<std::vector<int>> cols(d - 1);
                for (auto& col : cols) {
                    col.resize(n);
                    for (int i = 0; i < n; ++i) col[i] = i + 1;
                    for (int i = n - 1; i > 0; --i) std::swap(col[i], col[rng.below(i + 1)]);
                }
                return DPermutation::from_one_based(cols);
            };
            const auto a = random_perm(1 + static_cast<int>(rng.below(3)));
            const auto b = random_perm(1 + static_cast<int>(rng.below(3)));
            const auto c = random_perm(1 + static_cast<int>(rng.below(3)));
            std::vector<int> signs(d - 1);
            for (auto& s : signs) s = rng.bernoulli(0.5) ? 1 : -1;
            const SignSequence ss(signs);
            require(block_sum(block_sum(a, b, ss), c, ss) == block_sum(a, block_sum(b, c, ss), ss),
                    "block sum with a fixed sign sequence is not associative");
        }
        return std::string("20 random triples");
    }));

    results.push_back(timed("schnyder-string-walk-roundtrip", [&] {
        long long count = 0;
        for (int n = 1; n <= ns; ++n)
            for (const auto& s : enumerate_schnyder_strings(n)) {
                require(walk_to_string(string_to_walk(s)) == s, "string/walk round trip failed");
                ++count;
            }
        return std::to_string(count) + " strings";
    }));

    results.push_back(timed("schnyder-permutation-injective", [&] {
        for (int n = 1; n <= ns; ++n) {
            std::set<std::string> seen;
            const auto strings = enumerate_schnyder_strings(n);
            for (const auto& s : strings) seen.insert(schnyder_perm_from_string(s).to_string());
            require(seen.size() == strings.size(), "string -> permutation is not injective");
        }
        return std::string("sizes 1..") + std::to_string(ns);
    }));

    results.push_back(timed("schnyder-pre-process-agreement", [&] {
        for (int n = 1; n <= ns; ++n)
            for (const auto& s : enumerate_schnyder_strings(n))
                require(schnyder_perm_from_pre_processes(s) == schnyder_perm_from_string(s),
                        "pre-coalescent permutations differ from the main ones");
        return std::string("sizes 1..") + std::to_string(ns);
    }));

    results.push_back(timed("schnyder-tree-edge-ordering", [&] {
        for (int n = 1; n <= ns; ++n)
            for (const auto& s : enumerate_schnyder_strings(n)) {
                const ConeWalk w = string_to_walk(s);
                const CoalescentWalkProcess green(w, WalkVariant::green);
                const CoalescentWalkProcess red(w, WalkVariant::red);
                const auto [gt, rt] = trees_from_processes(green, red);
                for (int v = 1; v <= n; ++v) {
                    if (gt.parent[v] != 0)
                        require(v > gt.parent[v], "green edge directed small -> large");
                    if (rt.parent[v] != 0)
                        require(v < rt.parent[v], "red edge directed large -> small");
                }
            }
        return std::string("every enumerated wood");
    }));

    results.push_back(timed("schnyder-marginal-tree-rule", [&] {
        for (int n = 1; n <= ns; ++n)
            for (const auto& s : enumerate_schnyder_strings(n)) {
                const ConeWalk w = string_to_walk(s);
                const CoalescentWalkProcess green(w, WalkVariant::green);
                const CoalescentWalkProcess red(w, WalkVariant::red);
                const auto [gt, rt] = trees_from_processes(green, red);
                const DPermutation sigma = schnyder_perm_from_string(s);
                const RootedForest rebuilt = green_tree_from_marginal(inverse_marginal(sigma, 1));
                require(rebuilt.parent == gt.parent && rebuilt.children == gt.children,
                        "green tree from the marginal disagrees with the process tree");
            }
        return std::string("every enumerated wood");
    }));

    results.push_back(timed("schnyder-start-duality", [&] {
        for (int n = 1; n <= ns; ++n)
            for (const auto& s : enumerate_schnyder_strings(n)) {
                const ConeWalk w = string_to_walk(s);
                const CoalescentWalkProcess green(w, WalkVariant::green);
                const CoalescentWalkProcess red(w, WalkVariant::red);
                const int T = 2 * n;
                for (int i = 0; i < n; ++i) {
                    // red start at j <-> green start at 2n - j, same label
                    const int j = red.starts()[i];
                    bool found = false;
                    for (int gidx = 0; gidx < n; ++gidx)
                        if (green.starts()[gidx] == T - j) {
                            require(green.label_of(gidx) == red.label_of(i),
                                    "dual starting points carry different labels");
                            found = true;
                        }
                    require(found, "missing dual starting point");
                }
            }
        return std::string("start duality on all woods");
    }));

    results.push_back(timed("separable-roundtrips", [&] {
        long long checked = 0;
        for (int d = 2; d <= std::min(3, budget.max_dim); ++d)
            for (int n = 1; n <= np; ++n)
                for (const auto& sigma : enumerate_separable(n, d)) {
                    const SignTree st = sign_tree(sigma);
                    require(validate_sign_tree(st).empty(), "invalid sign tree produced");
                    require(sign_tree_inverse(st) == sigma, "sign tree round trip failed");
                    const SwapTree sw = swap_tree(sigma);
                    require(validate_swap_tree(sw).empty(), "invalid swap tree produced");
                    require(swap_tree_inverse(sw) == sigma, "swap tree round trip failed");
                    ++checked;
                }
        return std::to_string(checked) + " separable permutations";
    }));

    results.push_back(timed("separable-counts-d2", [&] {
        const std::vector<long long> expected = {1, 2, 6, 22, 90};
        for (int n = 1; n <= std::min(5, budget.max_perm_size); ++n)
            require(static_cast<long long>(enumerate_separable(n, 2, 6).size()) == expected[n - 1],
                    "2-separable count at n=" + std::to_string(n) + " is wrong");
        return std::string("1,2,6,22,90");
    }));

    results.push_back(timed("separable-avoidance-agreement", [&] {
        for (int d = 2; d <= std::min(3, budget.max_dim); ++d)
            for (int n = 1; n <= np; ++n)
                for_each_d_permutation(n, d, budget.max_states, [&](const DPermutation& p) {
                    require(is_separable(p) == is_separable_by_avoidance(p),
                            "decomposition and avoidance characterizations disagree");
                });
        return std::string("all permutations to n=") + std::to_string(np);
    }));

    results.push_back(timed("separable-pattern-from-tree", [&] {
        for (int d = 2; d <= std::min(3, budget.max_dim); ++d)
            for (int n = 2; n <= np; ++n)
                for (const auto& sigma : enumerate_separable(n, d)) {
                    const SignTree st = sign_tree(sigma);
                    std::vector<int> idx(std::min(n, kp));
                    for (std::size_t a = 0; a < idx.size(); ++a) idx[a] = static_cast<int>(a) + 1;
                    while (true) {
                        const IndexSet I(idx);
                        require(pattern_from_tree(st, I) == pattern_at(sigma, I),
                                "pattern from tree disagrees with pattern_at");
                        int a = static_cast<int>(idx.size()) - 1;
                        while (a >= 0 && idx[a] == n - static_cast<int>(idx.size()) + 1 + a) --a;
                        if (a < 0) break;
                        ++idx[a];
                        for (std::size_t b = a + 1; b < idx.size(); ++b) idx[b] = idx[b - 1] + 1;
                    }
                }
        return std::string("all index subsets of size <= ") + std::to_string(kp);
    }));

    results.push_back(timed("offspring-law", [&] {
        for (int d = 2; d <= 8; ++d) {
            const OffspringLaw law = offspring_law(d);
            double total = law.pmf(0) + law.pmf(1);
            for (int r = 2; r < 4000; ++r) total += law.pmf(r);
            require(std::abs(total - 1.0) < 1e-12, "offspring masses do not sum to 1");
            require(std::abs(law.mean() - 1.0) < 1e-12, "offspring law is not critical");
            require(law.pmf(1) == 0.0, "P(xi = 1) must be 0");
            require(law.variance() > 0, "offspring variance must be positive");
        }
        return std::string("d = 2..8");
    }));

    results.push_back(timed("gw-uniformity-smoke", [&] {
        const auto support = enumerate_separable(3, 2);
        std::vector<long long> counts(support.size(), 0);
        const int samples = 30000;
        for (int i = 0; i < samples; ++i) {
            const DPermutation s = sample_uniform_separable(3, 2, mix_seed(999, i));
            for (std::size_t j = 0; j < support.size(); ++j)
                if (support[j] == s) ++counts[j];
        }
        const std::vector<double> uniform(support.size(), 1.0 / support.size());
        const double p = chi_squared_pvalue(chi_squared_statistic(counts, uniform),
                                            static_cast<int>(support.size()) - 1);
        require(p > 1e-4, "conditioned GW sampler failed the uniformity smoke test");
        return "chi-squared p = " + std::to_string(p);
    }));

    results.push_back(timed("brownian-exact-law", [&] {
        const Rational h(1, 2);
        const std::vector<Rational> p = {h, h};
        const auto law2 = exact_pattern_law(2, p);
        require(law2.at(dperm({{1, 2}, {1, 2}})) == h * h, "k=2 law mass differs from p1 p2");
        const auto law3 = exact_pattern_law(3, p);
        require(law3.at(dperm({{1, 2, 3}, {1, 2, 3}})) == h * h * h * h,
                "k=3 identity mass differs from p1^2 p2^2");
        require(law3.at(dperm({{1, 2, 3}, {1, 3, 2}})) == Rational(1, 2) * h * h * h * (1 - h),
                "k=3 mass differs from p1^2 p2 (1-p2) / 2");
        Rational sum = 0;
        for (const auto& [tau, mass] : law3) sum += mass;
        require(sum == 1, "law masses do not sum to 1");
        return std::string("matches the closed forms");
    }));

    results.push_back(timed("permuton-frequency-bound", [&] {
        for (int d = 2; d <= std::min(3, budget.max_dim); ++d)
            for (int n = 1; n <= np; ++n)
                for_each_d_permutation(n, d, budget.max_states, [&](const DPermutation& sigma) {
                    const EmpiricalPermuton mu(sigma);
                    for (int k = 1; k <= std::min({n, kp, 3}); ++k) {
                        const ExactLawI64 plaw = exact_sampled_pattern_law_fast(mu, k);
                        const ExactLawI64 flaw = exact_freq_law_fast(sigma, k);
                        const Rational bound(k * (k - 1) / 2, n);
                        for (std::size_t code = 0; code < plaw.mass.size(); ++code) {
                            const Rational diff = Rational(flaw.mass[code], flaw.denominator) -
                                                  Rational(plaw.mass[code], plaw.denominator);
                            require(abs(diff) <= bound,
                                    "|freq - permuton freq| exceeds C(k,2)/n");
                        }
                    }
                });
        return std::string("exact bound to n=") + std::to_string(np);
    }));

    results.push_back(timed("distance-sandwich", [&] {
        Rng rng(2024);
        for (int rep = 0; rep < 40; ++rep) {
            const int d = 2 + static_cast<int>(rng.below(2));
            auto random_perm = [&](int n) {
                std::vector<std::vector<int>> cols(d - 1);
                for (auto& col : cols) {
                    col.resize(n);
                    for (int i = 0; i < n; ++i) col[i] = i + 1;
                    for (int i = n - 1; i > 0; --i) std::swap(col[i], col[rng.below(i + 1)]);
                }
                return DPermutation::from_one_based(cols);
            };
            const EmpiricalPermuton mu1(random_perm(1 + static_cast<int>(rng.below(4))));
            const EmpiricalPermuton mu2(random_perm(1 + static_cast<int>(rng.below(4))));
            const Rational sup = cdf_sup_distance_exact(mu1, mu2);
            const Rational box = box_distance_exact(mu1, mu2);
            require(sup <= box, "cdf sup distance exceeds the box distance");
            require(box <= Rational(1 << d) * sup, "box distance exceeds 2^d times the sup distance");
        }
        return std::string("40 random pairs");
    }));

    results.push_back(timed("distance-golden-values", [&] {
        const EmpiricalPermuton a{dperm({{1, 2}})};
        const EmpiricalPermuton b{dperm({{2, 1}})};
        require(box_distance_exact(a, b) == Rational(1, 2), "d_box(mu_12, mu_21) must be 1/2");
        require(cdf_sup_distance_exact(a, b) == Rational(1, 2),
                "||F_12 - F_21||_inf must be 1/2");
        require(cdf_sup_distance_exact(a, a) == 0, "distance of a permuton to itself must be 0");
        return std::string("1/2 and 1/2");
    }));

    results.push_back(timed("schnyder-golden-fixture", [&] {
        const std::string wood10 = "gbggbgrgbrrgbbbgbrrggbrrrgbbrr";
        const DPermutation sigma = schnyder_perm_from_string(wood10);
        const std::vector<int> ginv = {10, 6, 1, 5, 3, 4, 9, 8, 2, 7};
        const std::vector<int> rinv = {8, 7, 2, 10, 9, 4, 6, 5, 3, 1};
        require(inverse_marginal(sigma, 1) == ginv, "green marginal inverse is wrong");
        require(inverse_marginal(sigma, 2) == rinv, "red marginal inverse is wrong");
        return std::string("size-10 wood reproduced");
    }));

    return results;
}

} // namespace permutonlab
