#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "permutonlab/rng.hpp"
#include "permutonlab/schnyder.hpp"
#include "permutonlab/stats.hpp"

using namespace permutonlab;

namespace {

// fixed size-10 wood used as the reference fixture throughout
const std::string kWood10 = "gbggbgrgbrrgbbbgbrrggbrrrgbbrr";

std::vector<std::vector<long long>> all_paths(const CoalescentWalkProcess& z) {
    std::vector<std::vector<long long>> paths;
    for (int i = 0; i < static_cast<int>(z.starts().size()); ++i) {
        std::vector<long long> p;
        for (int t = z.starts()[i]; t <= z.interval_length(); ++t)
            p.push_back(z.path_value(i, t));
        paths.push_back(std::move(p));
    }
    return paths;
}

std::vector<int> labels_of(const CoalescentWalkProcess& z) {
    std::vector<int> l;
    for (int i = 0; i < static_cast<int>(z.starts().size()); ++i) l.push_back(z.label_of(i));
    return l;
}

} // namespace

TEST_CASE("string validation") {
    CHECK(validate_string(kWood10).empty());
    CHECK(validate_string("gbr").empty());
    CHECK(validate_string("ggbbrr").empty());

    CHECK_FALSE(validate_string("grb").empty()); // fails the #b >= #r prefix rule
    auto bad = validate_string("ggbrbr");        // prefixes fine, but 'b' follows 'r'
    REQUIRE_FALSE(bad.empty());
    CHECK(bad.front().find("'r' immediately followed by 'b'") != std::string::npos);

    CHECK_FALSE(validate_string("").empty());
    CHECK_FALSE(validate_string("bgr").empty()); // prefix #g >= #b fails
    CHECK_FALSE(validate_string("gggbbb").empty()); // counts unequal
}

TEST_CASE("gbr is the unique valid string of size 1") {
    const auto all = enumerate_schnyder_strings(1);
    REQUIRE(all.size() == 1);
    CHECK(all.front() == "gbr");
}

TEST_CASE("string to walk follows the cycling rule") {
    const ConeWalk w = string_to_walk("gbr");
    REQUIRE(w.steps.size() == 2);
    CHECK(w.steps[0] == std::pair<int, int>{1, -1});
    CHECK(w.steps[1] == std::pair<int, int>{-1, 1});
    CHECK(validate_walk(w).empty());
    CHECK(walk_to_string(w) == "gbr");
}

TEST_CASE("string/walk round trips on every enumerated size <= 4") {
    for (int n = 1; n <= 4; ++n) {
        const auto strings = enumerate_schnyder_strings(n);
        CHECK(strings.size() >= 1);
        for (const auto& s : strings) {
            const ConeWalk w = string_to_walk(s);
            CHECK(validate_walk(w).empty());
            CHECK(walk_to_string(w) == s);
        }
    }
}

TEST_CASE("coalescent processes have the documented starting points") {
    const ConeWalk w = string_to_walk(kWood10);
    const CoalescentWalkProcess green(w, WalkVariant::green);
    const CoalescentWalkProcess red(w, WalkVariant::red);
    CHECK(green.starts() == std::vector<int>{3, 5, 6, 8, 12, 14, 15, 17, 18, 20});
    CHECK(red.starts() == std::vector<int>{0, 2, 3, 5, 6, 8, 12, 14, 15, 17});
    // descending green labels, ascending red labels
    CHECK(green.label_of(0) == 10);
    CHECK(green.label_of(9) == 1);
    CHECK(red.label_of(0) == 1);
    CHECK(red.label_of(9) == 10);
}

TEST_CASE("explicit coalescent process of the worked example") {
    // four explicit sample paths with starts J = {2,3,5,7} on [0,8]
    const std::vector<int> starts = {2, 3, 5, 7};
    const std::vector<int> labels = {1, 2, 3, 4};
    const std::vector<std::vector<long long>> paths = {
        {0, 2, 2, 0, 2, 1, 0},
        {0, -1, 0, 2, 1, 0},
        {0, 2, 1, 0},
        {0, -2},
    };
    const ExplicitOrders orders = orders_from_paths(starts, labels, paths);
    CHECK(orders.sigma_up == std::vector<int>{4, 3, 2, 1});
    CHECK(orders.sigma_down == std::vector<int>{2, 3, 1, 4});
}

TEST_CASE("single-start process is trivial") {
    const ConeWalk w = string_to_walk("gbr");
    const CoalescentWalkProcess green(w, WalkVariant::green);
    const CoalescentWalkProcess red(w, WalkVariant::red);
    CHECK(green.sigma_up() == std::vector<int>{1});
    CHECK(red.sigma_down() == std::vector<int>{1});
    // the green path lives at the very end of the interval
    CHECK(green.starts() == std::vector<int>{2});
    CHECK(green.path_value(0, 2) == 0);
    CHECK_THROWS_AS(green.path_value(0, 1), ValidationError);
}

TEST_CASE("golden pipeline: the size-10 wood") {
    const DPermutation sigma = schnyder_perm_from_string(kWood10);
    CHECK(inverse_marginal(sigma, 1) == std::vector<int>{10, 6, 1, 5, 3, 4, 9, 8, 2, 7});
    CHECK(inverse_marginal(sigma, 2) == std::vector<int>{8, 7, 2, 10, 9, 4, 6, 5, 3, 1});
    // the third vertex carries labels (5, 9)
    CHECK(sigma.value(2, 0) + 1 == 5);
    CHECK(sigma.value(2, 1) + 1 == 9);

    CHECK(schnyder_perm_from_string("gbr") == dperm({{1}, {1}}));
}

TEST_CASE("trees from processes match the reference wood") {
    const ConeWalk w = string_to_walk(kWood10);
    const CoalescentWalkProcess green(w, WalkVariant::green);
    const CoalescentWalkProcess red(w, WalkVariant::red);
    const auto [gt, rt] = trees_from_processes(green, red);

    CHECK(rt.children[10] == std::vector<int>{9, 4, 6});
    CHECK(gt.children[0] == std::vector<int>{10, 6, 1});
    CHECK(gt.children[1] == std::vector<int>{5, 3, 2});
    CHECK(gt.children[3] == std::vector<int>{4});
    CHECK(gt.children[4] == std::vector<int>{9, 8});
    CHECK(gt.children[2] == std::vector<int>{7});
    CHECK(validate_forest(gt).empty());
    CHECK(validate_forest(rt).empty());

    // clockwise traversals read off the two marginal inverses
    const DPermutation sigma = schnyder_perm_from_string(kWood10);
    CHECK(forest_traversal(gt) == inverse_marginal(sigma, 1));
    CHECK(forest_traversal(rt) == inverse_marginal(sigma, 2));
}

TEST_CASE("green tree can be rebuilt from the marginal alone") {
    const ConeWalk w = string_to_walk(kWood10);
    const CoalescentWalkProcess green(w, WalkVariant::green);
    const CoalescentWalkProcess red(w, WalkVariant::red);
    const auto [gt, rt] = trees_from_processes(green, red);

    const RootedForest rebuilt = green_tree_from_marginal({10, 6, 1, 5, 3, 4, 9, 8, 2, 7});
    CHECK(rebuilt.parent == gt.parent);
    CHECK(rebuilt.children == gt.children);

    CHECK(green_tree_from_marginal({1}).children[0] == std::vector<int>{1});
}

TEST_CASE("exhaustive agreement on sizes <= 4") {
    for (int n = 1; n <= 4; ++n) {
        std::set<std::string> images;
        const auto strings = enumerate_schnyder_strings(n);
        for (const auto& s : strings) {
            const ConeWalk w = string_to_walk(s);
            const CoalescentWalkProcess green(w, WalkVariant::green);
            const CoalescentWalkProcess red(w, WalkVariant::red);

            // order extraction agrees with the by-definition oracle
            const ExplicitOrders g2 =
                orders_from_paths(green.starts(), labels_of(green), all_paths(green));
            CHECK(green.sigma_up() == g2.sigma_up);
            const ExplicitOrders r2 =
                orders_from_paths(red.starts(), labels_of(red), all_paths(red));
            CHECK(red.sigma_down() == r2.sigma_down);

            const DPermutation sigma = schnyder_perm_from_string(s);
            images.insert(sigma.to_string());

            // pre-coalescent route gives the same permutation
            CHECK(schnyder_perm_from_pre_processes(s) == sigma);

            // ordering law and tree agreement
            const auto [gt, rt] = trees_from_processes(green, red);
            for (int v = 1; v <= n; ++v) {
                if (gt.parent[v] != 0) CHECK(v > gt.parent[v]);
                if (rt.parent[v] != 0) CHECK(v < rt.parent[v]);
            }
            const RootedForest rebuilt = green_tree_from_marginal(inverse_marginal(sigma, 1));
            CHECK(rebuilt.parent == gt.parent);
            CHECK(rebuilt.children == gt.children);
            CHECK(forest_traversal(gt) == inverse_marginal(sigma, 1));
            CHECK(forest_traversal(rt) == inverse_marginal(sigma, 2));
        }
        CHECK(images.size() == strings.size()); // injective
    }
}

TEST_CASE("size-3 woods witness equal green but distinct red marginals") {
    std::map<std::string, std::set<std::string>> reds_by_green;
    for (const auto& s : enumerate_schnyder_strings(3)) {
        const DPermutation sigma = schnyder_perm_from_string(s);
        reds_by_green[marginal(sigma, {0, 1}).to_string()].insert(
            marginal(sigma, {0, 2}).to_string());
    }
    bool witness = false;
    for (const auto& [g, reds] : reds_by_green) witness = witness || reds.size() > 1;
    CHECK(witness);
}

TEST_CASE("enumeration counts weakly increase") {
    std::size_t prev = 0;
    for (int n = 1; n <= 5; ++n) {
        const auto count = enumerate_schnyder_strings(n).size();
        CHECK(count >= prev);
        prev = count;
    }
    CHECK_THROWS_AS(enumerate_schnyder_strings(7), BudgetError);
}

TEST_CASE("start duality between the red process and the reversed green one") {
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.below(40));
        const std::string s = sample_uniform_schnyder(n, rng.next_u64());
        const ConeWalk w = string_to_walk(s);
        const CoalescentWalkProcess green(w, WalkVariant::green);
        const CoalescentWalkProcess red(w, WalkVariant::red);
        for (int i = 0; i < n; ++i) {
            const int j = red.starts()[i];
            bool found = false;
            for (int gi = 0; gi < n; ++gi)
                if (green.starts()[gi] == 2 * n - j) {
                    CHECK(green.label_of(gi) == red.label_of(i));
                    found = true;
                }
            CHECK(found);
        }
    }
}

TEST_CASE("processes are non-crossing and coalescent on sampled walks") {
    Rng rng(12);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + static_cast<int>(rng.below(8));
        const std::string s = sample_uniform_schnyder(n, rng.next_u64());
        for (const auto variant : {WalkVariant::green, WalkVariant::red}) {
            const CoalescentWalkProcess z(string_to_walk(s), variant);
            const auto paths = all_paths(z);
            const auto& starts = z.starts();
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    bool met = false;
                    int sign = 0;
                    for (int t = starts[j]; t <= 2 * n; ++t) {
                        const long long vi = paths[i][t - starts[i]];
                        const long long vj = paths[j][t - starts[j]];
                        if (met) CHECK(vi == vj); // coalescence persists
                        if (vi == vj) met = true;
                        const long long diff = vi - vj;
                        if (diff != 0) {
                            const int now = diff > 0 ? 1 : -1;
                            if (sign == 0) sign = now;
                            CHECK(now == sign); // non-crossing
                        }
                    }
                }
        }
    }
}

TEST_CASE("pre-processes run on half-integer times") {
    CHECK_THROWS_AS(PreCoalescentProcess("grb", WalkVariant::red), ValidationError);
    const PreCoalescentProcess red(kWood10, WalkVariant::red);
    const PreCoalescentProcess green(kWood10, WalkVariant::green);
    CHECK(red.starts_doubled().size() == 10);
    CHECK(green.starts_doubled().size() == 10);
    for (int t : red.starts_doubled()) CHECK(t % 2 == 1); // character midpoints

    const DPermutation sigma = schnyder_perm_from_string(kWood10);
    CHECK(DPermutation::from_one_based({green.sigma_up(), red.sigma_down()}) == sigma);

    CHECK(schnyder_perm_from_pre_processes("gbr") == dperm({{1}, {1}}));
}

TEST_CASE("dp sampler matches enumeration at n=3 and the rejection sampler agrees") {
    const auto support = enumerate_schnyder_strings(3);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < support.size(); ++i) index[support[i]] = i;
    const std::vector<double> uniform(support.size(), 1.0 / support.size());

    // 10^5 dp draws against the enumerated support
    std::vector<long long> dp_counts(support.size(), 0);
    SchnyderDpSampler dp(3);
    for (const auto& w : dp.sample_many(100000, 77))
        ++dp_counts[index.at(walk_to_string(w))];
    CHECK(chi_squared_pvalue(chi_squared_statistic(dp_counts, uniform),
                             static_cast<int>(support.size()) - 1) > 0.001);

    std::vector<long long> rej_counts(support.size(), 0);
    for (int i = 0; i < 20000; ++i)
        ++rej_counts[index.at(
            sample_uniform_schnyder(3, mix_seed(78, i), SchnyderSampleMethod::rejection))];
    CHECK(chi_squared_pvalue(chi_squared_statistic(rej_counts, uniform),
                             static_cast<int>(support.size()) - 1) > 1e-4);
}

TEST_CASE("samplers are deterministic and the scaled-weight branch works") {
    CHECK(sample_uniform_schnyder(1, 123) == "gbr");
    CHECK(sample_uniform_schnyder(1, 456, SchnyderSampleMethod::rejection) == "gbr");
    CHECK(sample_uniform_schnyder(25, 9) == sample_uniform_schnyder(25, 9));

    // n > 60 exercises the checkpointed scaled-double path
    const std::string big = sample_uniform_schnyder(70, 31337);
    CHECK(validate_string(big).empty());
    CHECK(big == sample_uniform_schnyder(70, 31337));

    SchnyderDpSampler sampler(40);
    const auto batch = sampler.sample_many(5, 2024);
    for (const auto& w : batch) CHECK(validate_walk(w).empty());
    // per-walker streams make prefixes of a batch reproducible
    const auto batch2 = sampler.sample_many(3, 2024);
    for (int i = 0; i < 3; ++i) CHECK(batch[i].steps == batch2[i].steps);

    CHECK_THROWS_AS(SchnyderDpSampler(3000), BudgetError);
}

TEST_CASE("the scaled-weight dp path is uniform against enumeration") {
    // force the normalized-double representation at a size where the support
    // is enumerable, and test uniformity directly
    const auto support = enumerate_schnyder_strings(5); // 594 strings
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < support.size(); ++i) index[support[i]] = i;

    SchnyderDpSampler scaled(5, 2000, 0); // exact_threshold 0 => double weights
    const int samples = 60000;
    const auto walks = scaled.sample_many(samples, 424242);
    std::vector<long long> counts(support.size(), 0);
    for (const auto& w : walks) ++counts[index.at(walk_to_string(w))];
    const std::vector<double> uniform(support.size(), 1.0 / support.size());
    CHECK(chi_squared_pvalue(chi_squared_statistic(counts, uniform),
                             static_cast<int>(support.size()) - 1) > 1e-4);
}

TEST_CASE("dp sampler is uniform at n=4 as well") {
    const auto support = enumerate_schnyder_strings(4);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < support.size(); ++i) index[support[i]] = i;
    std::vector<long long> counts(support.size(), 0);
    const int samples = 8000;
    SchnyderDpSampler sampler(4);
    const auto walks = sampler.sample_many(samples, 5150);
    for (const auto& w : walks) ++counts[index.at(walk_to_string(w))];
    const std::vector<double> uniform(support.size(), 1.0 / support.size());
    CHECK(chi_squared_pvalue(chi_squared_statistic(counts, uniform),
                             static_cast<int>(support.size()) - 1) > 1e-4);
}
