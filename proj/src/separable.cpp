#include "permutonlab/separable.hpp"

#include <algorithm>
#include <cmath>

#include "permutonlab/oracle.hpp"

namespace permutonlab {

int LabeledPlaneTree::leaf_count() const {
    int c = 0;
    for (const auto& node : nodes)
        if (node.children.empty()) ++c;
    return c;
}

namespace {

// Columns of a (sub)permutation as 0-based rank vectors.
using Cols = std::vector<std::vector<int>>;

// Valid split points of the primary block structure, with the (unique) sign
// vector. Returns empty splits when none exist.
struct Splits {
    std::vector<int> points; // proper prefixes lengths m, ascending
    std::vector<int> signs;  // per coordinate, +1 / -1
    bool consistent = true;
};

Splits find_splits(const Cols& cols) {
    const int n = static_cast<int>(cols[0].size());
    const int coords = static_cast<int>(cols.size());
    Splits out;
    std::vector<int> prefix_max(coords, -1), prefix_min(coords, n);
    for (int m = 1; m < n; ++m) {
        std::vector<int> sign(coords, 0);
        bool ok = true;
        for (int j = 0; j < coords; ++j) {
            prefix_max[j] = std::max(prefix_max[j], cols[j][m - 1]);
            prefix_min[j] = std::min(prefix_min[j], cols[j][m - 1]);
            if (prefix_max[j] == m - 1) sign[j] = +1;
            else if (prefix_min[j] == n - m) sign[j] = -1;
            else ok = false;
        }
        if (!ok) continue;
        if (out.points.empty()) {
            out.signs = sign;
        } else if (sign != out.signs) {
            out.consistent = false; // cannot happen for genuine permutations
        }
        out.points.push_back(m);
    }
    return out;
}

Cols extract_block(const Cols& cols, int lo, int hi) {
    Cols block(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        int mn = cols[j][lo];
        for (int i = lo; i < hi; ++i) mn = std::min(mn, cols[j][i]);
        block[j].reserve(hi - lo);
        for (int i = lo; i < hi; ++i) block[j].push_back(cols[j][i] - mn);
    }
    return block;
}

bool separable_rec(const Cols& cols) {
    const int n = static_cast<int>(cols[0].size());
    if (n == 1) return true;
    const Splits s = find_splits(cols);
    if (s.points.empty() || !s.consistent) return false;
    int lo = 0;
    std::vector<int> bounds = s.points;
    bounds.push_back(n);
    for (int hi : bounds) {
        if (hi - lo > 1 && !separable_rec(extract_block(cols, lo, hi))) return false;
        lo = hi;
    }
    return true;
}

// Builds the sign tree of cols into `tree`, returning the new node id.
int sign_tree_rec(const Cols& cols, LabeledPlaneTree& tree) {
    const int n = static_cast<int>(cols[0].size());
    const int v = tree.add_node();
    if (n == 1) return v;
    const Splits s = find_splits(cols);
    if (s.points.empty() || !s.consistent)
        throw ValidationError("sign_tree: permutation is not separable");
    tree.nodes[v].label = s.signs;
    int lo = 0;
    std::vector<int> bounds = s.points;
    bounds.push_back(n);
    std::vector<int> kids;
    for (int hi : bounds) {
        kids.push_back(sign_tree_rec(extract_block(cols, lo, hi), tree));
        lo = hi;
    }
    tree.nodes[v].children = std::move(kids);
    return v;
}

Cols zero_based(const DPermutation& p) {
    Cols cols(p.dim() - 1);
    for (int j = 0; j + 1 < p.dim(); ++j) {
        cols[j].resize(p.size());
        for (int i = 0; i < p.size(); ++i) cols[j][i] = p.value(i, j);
    }
    return cols;
}

// Leaf numbers 1..n in original left-to-right order.
std::vector<int> leaf_numbers(const LabeledPlaneTree& t) {
    std::vector<int> number(t.nodes.size(), 0);
    std::vector<int> stack = {0};
    int next = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (t.is_leaf(v)) {
            number[v] = ++next;
            continue;
        }
        const auto& kids = t.nodes[v].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    return number;
}

} // namespace

std::vector<std::string> validate_sign_tree(const SignTree& t) {
    std::vector<std::string> problems;
    const auto& tree = t.tree;
    if (tree.nodes.empty()) {
        problems.push_back("empty tree");
        return problems;
    }
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const auto& node = tree.nodes[v];
        if (node.children.empty()) {
            if (!node.label.empty())
                problems.push_back("leaf " + std::to_string(v) + " carries a label");
            continue;
        }
        if (node.children.size() < 2)
            problems.push_back("internal vertex " + std::to_string(v) + " has a single child");
        if (static_cast<int>(node.label.size()) != tree.d - 1)
            problems.push_back("vertex " + std::to_string(v) + " label length differs from d-1");
        for (int s : node.label)
            if (s != 1 && s != -1)
                problems.push_back("vertex " + std::to_string(v) + " has a non-sign label entry");
        for (int c : node.children)
            if (!tree.nodes[c].children.empty() && tree.nodes[c].label == node.label)
                problems.push_back("vertex " + std::to_string(c) + " repeats its parent's label");
    }
    return problems;
}

std::vector<std::string> validate_swap_tree(const SwapTree& t) {
    std::vector<std::string> problems;
    const auto& tree = t.tree;
    if (tree.nodes.empty()) {
        problems.push_back("empty tree");
        return problems;
    }
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const auto& node = tree.nodes[v];
        if (node.children.empty()) continue;
        if (node.children.size() < 2)
            problems.push_back("internal vertex " + std::to_string(v) + " has a single child");
        if (static_cast<int>(node.label.size()) != tree.d - 1)
            problems.push_back("vertex " + std::to_string(v) + " label length differs from d-1");
        if (v == 0) {
            for (int s : node.label)
                if (s != 1 && s != -1) problems.push_back("root label must be a sign sequence");
        } else {
            bool nonzero = false;
            for (int bit : node.label) {
                if (bit != 0 && bit != 1) problems.push_back("swap label entries must be 0/1");
                nonzero = nonzero || bit == 1;
            }
            if (!nonzero)
                problems.push_back("vertex " + std::to_string(v) + " has the all-zero swap label");
        }
    }
    return problems;
}

bool is_separable(const DPermutation& sigma) {
    if (sigma.size() == 1) return true;
    return separable_rec(zero_based(sigma));
}

SignTree sign_tree(const DPermutation& sigma) {
    SignTree t;
    t.tree.d = sigma.dim();
    sign_tree_rec(zero_based(sigma), t.tree);
    return t;
}

DPermutation sign_tree_inverse(const SignTree& t) {
    const auto& tree = t.tree;
    const int d = tree.d;
    const std::vector<int> number = leaf_numbers(tree);
    const int n = tree.leaf_count();

    // sigma(i)^(j) is the position of leaf i in the traversal where the
    // children of every minus-labeled vertex are flipped
    std::vector<std::vector<int>> cols(d - 1, std::vector<int>(n));
    for (int j = 0; j + 1 < d; ++j) {
        auto& col = cols[j];
        int pos = 0;
        std::vector<int> stack = {0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (tree.is_leaf(v)) {
                col[number[v] - 1] = ++pos;
                continue;
            }
            const auto& kids = tree.nodes[v].children;
            const bool flip = tree.nodes[v].label.at(j) < 0;
            if (flip)
                for (int c : kids) stack.push_back(c);
            else
                for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
        }
    }
    return DPermutation::from_one_based(cols);
}

SwapTree sign_to_swap(const SignTree& t) {
    SwapTree out;
    out.tree = t.tree;
    auto& tree = out.tree;
    // parent lookup
    std::vector<int> parent(tree.nodes.size(), -1);
    for (std::size_t v = 0; v < tree.nodes.size(); ++v)
        for (int c : tree.nodes[v].children) parent[c] = static_cast<int>(v);
    for (std::size_t v = 1; v < tree.nodes.size(); ++v) {
        if (tree.is_leaf(static_cast<int>(v))) continue;
        const auto& own = t.tree.nodes[v].label;
        const auto& par = t.tree.nodes[parent[v]].label;
        std::vector<int> bits(own.size());
        for (std::size_t j = 0; j < own.size(); ++j) bits[j] = own[j] == par[j] ? 0 : 1;
        tree.nodes[v].label = std::move(bits);
    }
    return out;
}

SignTree swap_to_sign(const SwapTree& t) {
    auto problems = validate_swap_tree(t);
    if (!problems.empty()) throw ValidationError("swap_to_sign: " + problems.front());
    SignTree out;
    out.tree = t.tree;
    auto& tree = out.tree;
    // root keeps its sign label; walk down converting swap bits
    std::vector<int> stack = {0};
    std::vector<int> parent(tree.nodes.size(), -1);
    for (std::size_t v = 0; v < tree.nodes.size(); ++v)
        for (int c : tree.nodes[v].children) parent[c] = static_cast<int>(v);
    // process in an order where parents come first
    std::vector<int> topo;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        topo.push_back(v);
        for (int c : tree.nodes[v].children) stack.push_back(c);
    }
    for (int v : topo) {
        if (v == 0 || tree.is_leaf(v)) continue;
        const auto& bits = t.tree.nodes[v].label;
        const auto& par = tree.nodes[parent[v]].label;
        std::vector<int> signs(bits.size());
        for (std::size_t j = 0; j < bits.size(); ++j)
            signs[j] = bits[j] ? -par[j] : par[j];
        tree.nodes[v].label = std::move(signs);
    }
    return out;
}

SwapTree swap_tree(const DPermutation& sigma) {
    return sign_to_swap(sign_tree(sigma));
}

DPermutation swap_tree_inverse(const SwapTree& t) {
    return sign_tree_inverse(swap_to_sign(t));
}

namespace {

// Induced subtree on the selected leaves and their closest common ancestors.
// Returns the id in `out` or -1 when the subtree below v has no selected leaf.
int induce_rec(const LabeledPlaneTree& in, int v, const std::vector<bool>& selected,
               const std::vector<int>& number, LabeledPlaneTree& out) {
    if (in.is_leaf(v)) {
        if (!selected[number[v]]) return -1;
        const int id = out.add_node();
        return id;
    }
    std::vector<int> kept;
    for (int c : in.nodes[v].children) {
        const int id = induce_rec(in, c, selected, number, out);
        if (id >= 0) kept.push_back(id);
    }
    if (kept.empty()) return -1;
    if (kept.size() == 1) return kept.front();
    const int id = out.add_node();
    out.nodes[id].label = in.nodes[v].label;
    out.nodes[id].children = std::move(kept);
    return id;
}

// Renumbers nodes of `t` so the root is node 0 (children ids stay valid by
// rebuilding the vector in preorder).
LabeledPlaneTree rerooted(const LabeledPlaneTree& t, int root) {
    LabeledPlaneTree out;
    out.d = t.d;
    std::vector<std::pair<int, int>> stack = {{root, -1}}; // (old id, new parent)
    while (!stack.empty()) {
        auto [v, par] = stack.back();
        stack.pop_back();
        const int id = out.add_node();
        out.nodes[id].label = t.nodes[v].label;
        if (par >= 0) out.nodes[par].children.push_back(id);
        const auto& kids = t.nodes[v].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, id});
    }
    return out;
}

} // namespace

DPermutation pattern_from_tree(const SignTree& t, const IndexSet& I) {
    const int n = t.tree.leaf_count();
    if (I.size() < 1 || I.indices.back() > n)
        throw ValidationError("pattern_from_tree: leaf indices out of range");
    std::vector<bool> selected(n + 1, false);
    for (int i : I.indices) selected[i] = true;
    const std::vector<int> number = leaf_numbers(t.tree);

    LabeledPlaneTree scratch;
    scratch.d = t.tree.d;
    const int root = induce_rec(t.tree, 0, selected, number, scratch);
    // Order of node creation in induce_rec is children-first, so re-root.
    SignTree induced;
    induced.tree = rerooted(scratch, root);
    return sign_tree_inverse(induced);
}

// ---------------------------------------------------------------------------
// Conditioned Galton-Watson sampling
// ---------------------------------------------------------------------------

double OffspringLaw::pmf(int r) const {
    if (r < 0) return 0.0;
    if (r == 0) return 1.0 - (std::sqrt(a * (a + 1.0)) - a);
    if (r == 1) return 0.0;
    return a * std::pow(b, r - 1);
}

double OffspringLaw::mean() const { return a * b * (2.0 - b) / ((1.0 - b) * (1.0 - b)); }

double OffspringLaw::second_moment() const {
    const double q = 1.0 - b;
    return a * b * (b * b - 3.0 * b + 4.0) / (q * q * q);
}

int OffspringLaw::sample(Rng& rng) const {
    const double p0 = pmf(0);
    const double u = rng.uniform();
    if (u < p0) return 0;
    // conditional on >= 2, r - 2 is geometric with success probability 1 - b
    const double u2 = (u - p0) / (1.0 - p0);
    const double k = std::floor(std::log1p(-u2) / std::log(b));
    return 2 + std::max(0, static_cast<int>(k));
}

OffspringLaw offspring_law(int d) {
    if (d < 2) throw ValidationError("offspring_law: d must be >= 2");
    OffspringLaw law;
    law.d = d;
    law.a = std::ldexp(1.0, d - 1) - 1.0;
    law.b = 1.0 - std::sqrt(law.a / (law.a + 1.0));
    return law;
}

namespace {

// One Galton-Watson attempt, aborted as soon as the leaf count exceeds the
// target (leaf counts only grow, so aborting cannot bias acceptance).
bool grow_gw_tree(const OffspringLaw& law, int target_leaves, Rng& rng, LabeledPlaneTree& out) {
    out.nodes.clear();
    out.add_node();
    int leaves = 0;
    std::vector<int> stack = {0};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        const int r = law.sample(rng);
        if (r == 0) {
            if (++leaves > target_leaves) return false;
            continue;
        }
        for (int c = 0; c < r; ++c) {
            const int id = out.add_node();
            out.nodes[v].children.push_back(id);
        }
        // depth-first, rightmost child first keeps the leftmost subtree on top
        for (auto it = out.nodes[v].children.rbegin(); it != out.nodes[v].children.rend(); ++it)
            stack.push_back(*it);
    }
    return leaves == target_leaves;
}

} // namespace

SwapTree sample_uniform_swap_tree(int n, int d, Rng& rng, long long max_attempts) {
    const OffspringLaw law = offspring_law(d);
    const long long sign_count = (1LL << (d - 1));
    const long long swap_count = sign_count - 1;

    SwapTree t;
    t.tree.d = d;
    for (long long attempt = 0; attempt < max_attempts; ++attempt) {
        if (!grow_gw_tree(law, n, rng, t.tree)) continue;
        // uniform root sign sequence, uniform nonzero swap labels elsewhere
        for (std::size_t v = 0; v < t.tree.nodes.size(); ++v) {
            if (t.tree.is_leaf(static_cast<int>(v))) continue;
            std::vector<int> label(d - 1);
            if (v == 0) {
                const std::uint64_t bits = rng.below(sign_count);
                for (int j = 0; j < d - 1; ++j) label[j] = (bits >> j) & 1 ? 1 : -1;
            } else {
                const std::uint64_t bits = rng.below(swap_count) + 1;
                for (int j = 0; j < d - 1; ++j) label[j] = (bits >> j) & 1;
            }
            t.tree.nodes[v].label = std::move(label);
        }
        return t;
    }
    throw BudgetError("sample_uniform_swap_tree: retry budget exhausted");
}

DPermutation sample_uniform_separable(int n, int d, std::uint64_t seed, long long max_attempts,
                                      int max_n) {
    if (n < 1 || d < 2) throw ValidationError("sample_uniform_separable: need n >= 1, d >= 2");
    if (n > max_n)
        throw BudgetError("sample_uniform_separable: n exceeds the cap " + std::to_string(max_n));
    if (n == 1) return DPermutation::identity(1, d);
    Rng rng(seed);
    return swap_tree_inverse(sample_uniform_swap_tree(n, d, rng, max_attempts));
}

std::vector<DPermutation> enumerate_separable(int n, int d, int max_n, int max_d) {
    if (n > max_n || d > max_d)
        throw BudgetError("enumerate_separable: instance exceeds the configured caps");
    std::vector<DPermutation> out;
    for_each_d_permutation(n, d, 100'000'000, [&](const DPermutation& p) {
        if (is_separable(p)) out.push_back(p);
    });
    return out;
}

LabeledPlaneTree uniform_binary_plane_tree(int k, Rng& rng) {
    if (k < 1) throw ValidationError("uniform_binary_plane_tree: k must be >= 1");
    // Remy-style growth: pick a uniform node, replace it with a new internal
    // vertex whose children are the old subtree and a fresh leaf, on a uniform
    // side. Leaf-labeled uniformity descends to plane shapes.
    LabeledPlaneTree t;
    t.d = 2;
    t.add_node();
    std::vector<int> parent = {-1};
    std::vector<int> all = {0};
    for (int leaf = 2; leaf <= k; ++leaf) {
        const int v = all[static_cast<std::size_t>(rng.below(all.size()))];
        const bool left = rng.bernoulli(0.5);
        const int inner = t.add_node();
        const int fresh = t.add_node();
        parent.push_back(-1);
        parent.push_back(-1);
        const int par = parent[v];
        if (par >= 0) {
            for (int& c : t.nodes[par].children)
                if (c == v) c = inner;
        }
        parent[inner] = par;
        t.nodes[inner].children = left ? std::vector<int>{fresh, v} : std::vector<int>{v, fresh};
        parent[v] = inner;
        parent[fresh] = inner;
        all.push_back(inner);
        all.push_back(fresh);
    }
    // re-root so node 0 is the root
    int root = 0;
    while (parent[root] >= 0) root = parent[root];
    LabeledPlaneTree out;
    out.d = t.d;
    std::vector<std::pair<int, int>> stack = {{root, -1}};
    while (!stack.empty()) {
        auto [v, par] = stack.back();
        stack.pop_back();
        const int id = out.add_node();
        if (par >= 0) out.nodes[par].children.push_back(id);
        const auto& kids = t.nodes[v].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, id});
    }
    return out;
}

DPermutation sample_brownian_pattern(int k, const std::vector<double>& p, std::uint64_t seed) {
    if (p.empty()) throw ValidationError("sample_brownian_pattern: p must have length d-1 >= 1");
    for (double q : p)
        if (!(q >= 0.0 && q <= 1.0))
            throw ValidationError("sample_brownian_pattern: probabilities must lie in [0,1]");
    const int d = static_cast<int>(p.size()) + 1;
    Rng rng(seed);
    SignTree t;
    t.tree = uniform_binary_plane_tree(k, rng);
    t.tree.d = d;
    for (auto& node : t.tree.nodes) {
        if (node.children.empty()) continue;
        std::vector<int> label(d - 1);
        for (int j = 0; j + 1 < d; ++j) label[j] = rng.bernoulli(p[j]) ? 1 : -1;
        node.label = std::move(label);
    }
    return sign_tree_inverse(t);
}

DPermutation sample_brownian_cloud(int size, const std::vector<double>& p, std::uint64_t seed) {
    return sample_brownian_pattern(size, p, seed);
}

} // namespace permutonlab
