#include "permutonlab/schnyder.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "permutonlab/rng.hpp"

namespace permutonlab {

std::vector<std::string> validate_string(const std::string& s) {
    std::vector<std::string> problems;
    if (s.empty() || s.size() % 3 != 0) {
        problems.push_back("string length must be a positive multiple of 3");
        return problems;
    }
    const int n = static_cast<int>(s.size()) / 3;
    int g = 0, b = 0, r = 0;
    char prev = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == 'g') ++g;
        else if (c == 'b') ++b;
        else if (c == 'r') ++r;
        else {
            problems.push_back("invalid character '" + std::string(1, c) + "' at position " +
                               std::to_string(i + 1));
            return problems;
        }
        if (prev == 'r' && c == 'b') {
            problems.push_back("'r' immediately followed by 'b' at position " + std::to_string(i + 1));
            return problems;
        }
        if (!(g >= b && b >= r)) {
            problems.push_back("prefix of length " + std::to_string(i + 1) +
                               " violates #g >= #b >= #r");
            return problems;
        }
        prev = c;
    }
    if (g != n || b != n || r != n)
        problems.push_back("character counts must all equal " + std::to_string(n));
    return problems;
}

std::vector<std::string> validate_walk(const ConeWalk& w) {
    std::vector<std::string> problems;
    if (w.steps.empty() || w.steps.size() % 2 != 0) {
        problems.push_back("walk must have a positive even number of steps");
        return problems;
    }
    long long x = 0, y = 0;
    int down = 0, up = 0;
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        const auto [dx, dy] = w.steps[i];
        if (dy == -1 && dx == 1) ++down;
        else if (dy == 1 && dx <= 0) ++up;
        else {
            problems.push_back("step " + std::to_string(i + 1) +
                               " is neither (1,-1) nor (-k,1) with k >= 0");
            return problems;
        }
        x += dx;
        y += dy;
        if (x < 0 || y < -1) {
            problems.push_back("prefix of length " + std::to_string(i + 1) +
                               " leaves the cone {x >= 0, y >= -1}");
            return problems;
        }
    }
    const int n = w.wood_size();
    if (down != n || up != n)
        problems.push_back("walk needs " + std::to_string(n) + " steps of each kind");
    if (x != 0 || y != 0) problems.push_back("walk must end at the origin");
    return problems;
}

ConeWalk string_to_walk(const std::string& s) {
    auto problems = validate_string(s);
    if (!problems.empty()) throw ValidationError("string_to_walk: " + problems.front());

    std::string cycled = s.substr(1) + s[0]; // leading char is always 'g'
    ConeWalk w;
    int run = 0;
    for (char c : cycled) {
        if (c == 'b') {
            w.steps.emplace_back(1, -1);
        } else if (c == 'r') {
            ++run;
        } else {
            w.steps.emplace_back(-run, 1);
            run = 0;
        }
    }
    return w;
}

std::string walk_to_string(const ConeWalk& w) {
    auto problems = validate_walk(w);
    if (!problems.empty()) throw ValidationError("walk_to_string: " + problems.front());

    std::string s;
    for (const auto& [dx, dy] : w.steps) {
        if (dy == -1) {
            s += 'b';
        } else {
            s.append(static_cast<std::size_t>(-dx), 'r');
            s += 'g';
        }
    }
    // The final character is the 'g' that was cycled to the end.
    s.insert(s.begin(), 'g');
    s.pop_back();
    return s;
}

RootedForest RootedForest::empty(int n) {
    RootedForest f;
    f.n = n;
    f.parent.assign(n + 1, 0);
    f.children.assign(n + 1, {});
    return f;
}

std::vector<std::string> validate_forest(const RootedForest& f) {
    std::vector<std::string> problems;
    if (static_cast<int>(f.parent.size()) != f.n + 1 ||
        static_cast<int>(f.children.size()) != f.n + 1) {
        problems.push_back("forest arrays have the wrong size");
        return problems;
    }
    std::vector<int> depth(f.n + 1, -1);
    for (int v = 1; v <= f.n; ++v) {
        int u = v, hops = 0;
        while (u != 0 && hops <= f.n) {
            u = f.parent[u];
            ++hops;
        }
        if (u != 0) {
            problems.push_back("cycle reachable from label " + std::to_string(v));
            return problems;
        }
        depth[v] = hops;
    }
    std::vector<int> child_count(f.n + 1, 0);
    for (int v = 0; v <= f.n; ++v)
        for (int c : f.children[v]) {
            if (c < 1 || c > f.n || f.parent[c] != v)
                problems.push_back("children list of " + std::to_string(v) +
                                   " disagrees with parent array");
            ++child_count[c];
        }
    for (int v = 1; v <= f.n; ++v)
        if (child_count[v] != 1)
            problems.push_back("label " + std::to_string(v) + " appears in " +
                               std::to_string(child_count[v]) + " children lists");
    return problems;
}

std::vector<int> forest_traversal(const RootedForest& f) {
    std::vector<int> out;
    out.reserve(f.n);
    std::vector<int> stack(f.children[0].rbegin(), f.children[0].rend());
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (auto it = f.children[v].rbegin(); it != f.children[v].rend(); ++it)
            stack.push_back(*it);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coalescent sweep
//
// All paths obey the same monotone update map at each step, so the alive
// paths can be kept as value-sorted groups that only ever merge. One pass
// over the interval yields both total orders, the first-hit parents, and the
// clockwise child orders.
// ---------------------------------------------------------------------------

namespace {

struct SweepGroup {
    long long value = 0;
    std::vector<int> up;   // member start-indices in relative up-order
    std::vector<int> down; // in relative down-order
};

struct SweepResult {
    std::vector<int> up_list;   // start indices, ascending by <=up
    std::vector<int> down_list; // ascending by <=down
    std::vector<int> parent;    // per start index: parent start index, or -1
    // children[s] = start indices whose first hit is s, in up- and down-order
    std::vector<std::vector<int>> children_up;
    std::vector<std::vector<int>> children_down;
};

// events[p] lists start indices to insert at position p (before step p).
// step(p, v) -> new value. positions run 0..T.
template <typename StepFn>
SweepResult coalescent_sweep(int T, const std::vector<std::vector<int>>& events, StepFn step) {
    const int n_starts = [&] {
        int c = 0;
        for (const auto& e : events) c += static_cast<int>(e.size());
        return c;
    }();

    SweepResult res;
    res.parent.assign(n_starts, -1);
    res.children_up.assign(n_starts, {});
    res.children_down.assign(n_starts, {});

    std::vector<SweepGroup> groups; // ascending by value
    groups.reserve(64);

    auto insert_start = [&](int s) {
        // position of the first group with value >= 0
        std::size_t pos = 0;
        while (pos < groups.size() && groups[pos].value < 0) ++pos;
        if (pos < groups.size() && groups[pos].value == 0) {
            SweepGroup& zero = groups[pos];
            for (int m : zero.up)
                if (res.parent[m] < 0) {
                    res.parent[m] = s;
                    res.children_up[s].push_back(m);
                }
            for (int m : zero.down)
                if (res.parent[m] == s) res.children_down[s].push_back(m);
            zero.up.insert(zero.up.begin(), s);
            zero.down.insert(zero.down.begin(), s);
        } else {
            SweepGroup fresh;
            fresh.value = 0;
            fresh.up.push_back(s);
            fresh.down.push_back(s);
            groups.insert(groups.begin() + pos, std::move(fresh));
        }
    };

    for (int p = 0; p <= T; ++p) {
        for (int s : events[p]) insert_start(s);
        if (p == T) break;
        for (auto& grp : groups) grp.value = step(p, grp.value);
        // monotone updates keep the order; merge newly equal neighbours
        std::size_t w = 0;
        for (std::size_t i = 1; i < groups.size(); ++i) {
            if (groups[i].value == groups[w].value) {
                auto& lo = groups[w];
                auto& hi = groups[i];
                lo.up.insert(lo.up.end(), hi.up.begin(), hi.up.end());
                hi.down.insert(hi.down.end(), lo.down.begin(), lo.down.end());
                lo.down = std::move(hi.down);
            } else {
                ++w;
                if (w != i) groups[w] = std::move(groups[i]);
            }
        }
        groups.resize(std::min(groups.size(), w + 1));
    }

    for (const auto& grp : groups)
        res.up_list.insert(res.up_list.end(), grp.up.begin(), grp.up.end());
    for (auto it = groups.rbegin(); it != groups.rend(); ++it)
        res.down_list.insert(res.down_list.end(), it->down.begin(), it->down.end());
    return res;
}

} // namespace

// ---------------------------------------------------------------------------
// Green / red processes
// ---------------------------------------------------------------------------

struct CoalescentWalkProcess::Analysis {
    std::vector<int> sigma_up;
    std::vector<int> sigma_down;
    RootedForest forest_up;
    RootedForest forest_down;
};

CoalescentWalkProcess::CoalescentWalkProcess(const ConeWalk& walk, WalkVariant variant)
    : variant_(variant), n_(walk.wood_size()) {
    auto problems = validate_walk(walk);
    if (!problems.empty()) throw ValidationError("coalescent process: " + problems.front());
    const int T = walk.length();

    if (variant == WalkVariant::green) {
        // driven by the time-reversal; increments get order and sign swapped
        driver_.reserve(T);
        for (int p = 0; p < T; ++p) {
            const auto [dx, dy] = walk.steps[T - 1 - p];
            driver_.emplace_back(-dx, -dy);
        }
        // starts: starting times of the (k,-1) increments; a start at the
        // interval begin moves to the end
        for (int p = 0; p < T; ++p)
            if (driver_[p].second == -1) starts_.push_back(p);
        if (!starts_.empty() && starts_.front() == 0) {
            starts_.erase(starts_.begin());
            starts_.push_back(T);
        }
    } else {
        driver_ = walk.steps;
        // starts: ending times of the (-k,1) increments; a start at the
        // interval end moves to the beginning
        for (int p = 1; p <= T; ++p)
            if (driver_[p - 1].second == 1) starts_.push_back(p);
        if (!starts_.empty() && starts_.back() == T) {
            starts_.pop_back();
            starts_.insert(starts_.begin(), 0);
        }
    }
    if (static_cast<int>(starts_.size()) != n_)
        throw ValidationError("coalescent process: start count differs from wood size");
    analyze(); // eager, so the const accessors are race-free
}

int CoalescentWalkProcess::label_of(int start_index) const {
    return variant_ == WalkVariant::green ? n_ - start_index : start_index + 1;
}

long long CoalescentWalkProcess::path_value(int start_index, int t) const {
    const int j = starts_[start_index];
    if (t < j) throw ValidationError("path_value: time precedes the starting point");
    if (t > interval_length()) throw ValidationError("path_value: time beyond the interval");
    long long v = 0;
    for (int p = j; p < t; ++p) {
        const auto [dx, dy] = driver_[p];
        if (variant_ == WalkVariant::green) {
            if (dy == 1) {
                v += 1;
            } else {
                const long long k = dx;
                if (v > 0) v -= 1;
                else if (v < 0) v -= k;
                else v = -k - 1;
            }
        } else {
            if (dy == -1) {
                v -= 1;
            } else {
                const long long k = -dx;
                if (v >= 0) v += 1;
                else v = std::min(v + k, 0LL);
            }
        }
    }
    return v;
}

void CoalescentWalkProcess::analyze() const {
    if (analysis_) return;
    const int T = interval_length();
    std::vector<std::vector<int>> events(T + 1);
    for (int i = 0; i < n_; ++i) events[starts_[i]].push_back(i);

    SweepResult sweep;
    if (variant_ == WalkVariant::green) {
        sweep = coalescent_sweep(T, events, [&](int p, long long v) -> long long {
            const auto [dx, dy] = driver_[p];
            if (dy == 1) return v + 1;
            const long long k = dx;
            if (v > 0) return v - 1;
            if (v < 0) return v - k;
            return -k - 1;
        });
    } else {
        sweep = coalescent_sweep(T, events, [&](int p, long long v) -> long long {
            const auto [dx, dy] = driver_[p];
            if (dy == -1) return v - 1;
            const long long k = -dx;
            if (v >= 0) return v + 1;
            return std::min(v + k, 0LL);
        });
    }

    auto an = std::make_shared<Analysis>();
    an->sigma_up.assign(n_, 0);
    an->sigma_down.assign(n_, 0);
    for (int r = 0; r < n_; ++r) an->sigma_up[label_of(sweep.up_list[r]) - 1] = r + 1;
    for (int r = 0; r < n_; ++r) an->sigma_down[label_of(sweep.down_list[r]) - 1] = r + 1;

    an->forest_up = RootedForest::empty(n_);
    an->forest_down = RootedForest::empty(n_);
    for (int i = 0; i < n_; ++i) {
        const int lab = label_of(i);
        const int par = sweep.parent[i] < 0 ? 0 : label_of(sweep.parent[i]);
        an->forest_up.parent[lab] = par;
        an->forest_down.parent[lab] = par;
    }
    for (int i = 0; i < n_; ++i) {
        const int lab = label_of(i);
        for (int c : sweep.children_up[i]) an->forest_up.children[lab].push_back(label_of(c));
        for (int c : sweep.children_down[i]) an->forest_down.children[lab].push_back(label_of(c));
    }
    // root children: parentless paths, ordered by the respective total order
    for (int s : sweep.up_list)
        if (sweep.parent[s] < 0) an->forest_up.children[0].push_back(label_of(s));
    for (int s : sweep.down_list)
        if (sweep.parent[s] < 0) an->forest_down.children[0].push_back(label_of(s));

    analysis_ = std::move(an);
}

const std::vector<int>& CoalescentWalkProcess::sigma_up() const {
    analyze();
    return analysis_->sigma_up;
}

const std::vector<int>& CoalescentWalkProcess::sigma_down() const {
    analyze();
    return analysis_->sigma_down;
}

const RootedForest& CoalescentWalkProcess::forest_up_order() const {
    analyze();
    return analysis_->forest_up;
}

const RootedForest& CoalescentWalkProcess::forest_down_order() const {
    analyze();
    return analysis_->forest_down;
}

ExplicitOrders orders_from_paths(const std::vector<int>& starts, const std::vector<int>& labels,
                                 const std::vector<std::vector<long long>>& paths) {
    const int n = static_cast<int>(starts.size());
    if (static_cast<int>(labels.size()) != n || static_cast<int>(paths.size()) != n)
        throw ValidationError("orders_from_paths: inconsistent input sizes");
    for (int i = 1; i < n; ++i)
        if (starts[i] <= starts[i - 1])
            throw ValidationError("orders_from_paths: starts must be strictly increasing");

    // value of path i at the starting time of a later path j
    auto value_at = [&](int i, int j) -> long long {
        const int offset = starts[j] - starts[i];
        if (offset >= static_cast<int>(paths[i].size()))
            throw ValidationError("orders_from_paths: path too short for comparison");
        return paths[i][offset];
    };
    auto less_up = [&](int i, int j) {
        if (i == j) return false;
        if (starts[i] < starts[j]) return value_at(i, j) < 0;
        return !(value_at(j, i) < 0);
    };
    auto less_down = [&](int i, int j) {
        if (i == j) return false;
        if (starts[i] < starts[j]) return value_at(i, j) > 0;
        return !(value_at(j, i) > 0);
    };

    std::vector<int> order(n);
    ExplicitOrders out;
    out.sigma_up.assign(n, 0);
    out.sigma_down.assign(n, 0);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), less_up);
    for (int r = 0; r < n; ++r) out.sigma_up[labels[order[r]] - 1] = r + 1;
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), less_down);
    for (int r = 0; r < n; ++r) out.sigma_down[labels[order[r]] - 1] = r + 1;
    return out;
}

DPermutation schnyder_perm_from_walk(const ConeWalk& w) {
    CoalescentWalkProcess green(w, WalkVariant::green);
    CoalescentWalkProcess red(w, WalkVariant::red);
    return DPermutation::from_one_based({green.sigma_up(), red.sigma_down()});
}

DPermutation schnyder_perm_from_string(const std::string& s) {
    return schnyder_perm_from_walk(string_to_walk(s));
}

std::pair<RootedForest, RootedForest> trees_from_processes(const CoalescentWalkProcess& green,
                                                           const CoalescentWalkProcess& red) {
    if (green.variant() != WalkVariant::green || red.variant() != WalkVariant::red)
        throw ValidationError("trees_from_processes: pass a green and a red process");
    return {green.forest_up_order(), red.forest_down_order()};
}

RootedForest green_tree_from_marginal(const std::vector<int>& sigma_g_inverse) {
    const int n = static_cast<int>(sigma_g_inverse.size());
    RootedForest f = RootedForest::empty(n);
    std::vector<int> rightmost; // labels along the current rightmost path, increasing
    for (int x : sigma_g_inverse) {
        while (!rightmost.empty() && rightmost.back() > x) rightmost.pop_back();
        const int par = rightmost.empty() ? 0 : rightmost.back();
        f.parent[x] = par;
        f.children[par].push_back(x);
        rightmost.push_back(x);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Pre-coalescent processes (appendix constructions)
// ---------------------------------------------------------------------------

struct PreCoalescentProcess::Analysis {
    std::vector<int> sigma_up;
    std::vector<int> sigma_down;
};

PreCoalescentProcess::PreCoalescentProcess(const std::string& s, WalkVariant variant)
    : variant_(variant), n_(static_cast<int>(s.size()) / 3) {
    auto problems = validate_string(s);
    if (!problems.empty()) throw ValidationError("pre-coalescent process: " + problems.front());
    chars_ = variant == WalkVariant::green ? std::string(s.rbegin(), s.rend()) : s;
    for (int i = 0; i < static_cast<int>(chars_.size()); ++i)
        if (chars_[i] == 'g') starts_.push_back(2 * i + 1);
    analyze();
}

int PreCoalescentProcess::label_of(int start_index) const {
    return variant_ == WalkVariant::green ? n_ - start_index : start_index + 1;
}

namespace {

// Half-step increment of a pre-process path, doubled scale. `first_half`
// marks the first half of a character; the pre-red dwell pins a path that
// sits at 0 at the end of an 'r' run for one extra half-step.
inline long long pre_step(WalkVariant variant, char c, char prev, bool first_half, long long v) {
    if (variant == WalkVariant::green) {
        // reversed characters: g=(0,-1), b=(-1,1), r=(1,0)
        if (c == 'g') return v >= 0 ? v - 1 : v;
        if (c == 'b') return v + 1;
        return v >= 0 ? v : v - 1;
    }
    // red: g=(0,1), b=(1,-1), r=(-1,0)
    if (first_half && prev == 'r' && v == 0) return 0;
    if (c == 'g') return v >= 0 ? v + 1 : v;
    if (c == 'b') return v - 1;
    return v >= 0 ? v : v + 1;
}

} // namespace

long long PreCoalescentProcess::path_value_doubled(int start_index, int t2) const {
    const int j = starts_[start_index];
    if (t2 < j) throw ValidationError("path_value: time precedes the starting point");
    if (t2 > 2 * static_cast<int>(chars_.size()))
        throw ValidationError("path_value: time beyond the interval");
    long long v = 0;
    for (int p = j; p < t2; ++p) {
        const char c = chars_[p / 2];
        const char prev = p / 2 > 0 ? chars_[p / 2 - 1] : 0;
        v = pre_step(variant_, c, prev, p % 2 == 0, v);
    }
    return v;
}

void PreCoalescentProcess::analyze() const {
    if (analysis_) return;
    const int T = 2 * static_cast<int>(chars_.size());
    std::vector<std::vector<int>> events(T + 1);
    for (int i = 0; i < n_; ++i) events[starts_[i]].push_back(i);

    SweepResult sweep = coalescent_sweep(T, events, [&](int p, long long v) -> long long {
        const char c = chars_[p / 2];
        const char prev = p / 2 > 0 ? chars_[p / 2 - 1] : 0;
        return pre_step(variant_, c, prev, p % 2 == 0, v);
    });

    auto an = std::make_shared<Analysis>();
    an->sigma_up.assign(n_, 0);
    an->sigma_down.assign(n_, 0);
    for (int r = 0; r < n_; ++r) an->sigma_up[label_of(sweep.up_list[r]) - 1] = r + 1;
    for (int r = 0; r < n_; ++r) an->sigma_down[label_of(sweep.down_list[r]) - 1] = r + 1;
    analysis_ = std::move(an);
}

const std::vector<int>& PreCoalescentProcess::sigma_up() const {
    analyze();
    return analysis_->sigma_up;
}

const std::vector<int>& PreCoalescentProcess::sigma_down() const {
    analyze();
    return analysis_->sigma_down;
}

DPermutation schnyder_perm_from_pre_processes(const std::string& s) {
    PreCoalescentProcess green(s, WalkVariant::green);
    PreCoalescentProcess red(s, WalkVariant::red);
    return DPermutation::from_one_based({green.sigma_up(), red.sigma_down()});
}

// ---------------------------------------------------------------------------
// Enumeration and sampling
// ---------------------------------------------------------------------------

std::vector<std::string> enumerate_schnyder_strings(int n, int max_n) {
    if (n < 1) throw ValidationError("enumerate_schnyder_strings: n must be >= 1");
    if (n > max_n)
        throw BudgetError("enumerate_schnyder_strings: n exceeds the cap " + std::to_string(max_n));

    std::vector<std::string> out;
    std::string word;
    word.reserve(3 * n);
    // DFS over prefixes; characters tried in alphabetical order keeps the
    // output lexicographic.
    auto dfs = [&](auto&& self, int g, int b, int r, char prev) -> void {
        if (g == n && b == n && r == n) {
            out.push_back(word);
            return;
        }
        if (b < g && b < n && prev != 'r') {
            word += 'b';
            self(self, g, b + 1, r, 'b');
            word.pop_back();
        }
        if (g < n) {
            word += 'g';
            self(self, g + 1, b, r, 'g');
            word.pop_back();
        }
        if (r < b && r < n) {
            word += 'r';
            self(self, g, b, r + 1, 'r');
            word.pop_back();
        }
    };
    dfs(dfs, 0, 0, 0, 0);
    return out;
}

// DP sampler internals. States are (t, b, x) with b the number of (1,-1)
// steps so far and x the current first coordinate; y = t - 2b is implied.
struct SchnyderDpSampler::Impl {
    int n = 0;
    int T = 0;
    bool exact = false;

    std::vector<int> bmin, bmax;                  // per t
    std::vector<std::vector<long long>> offsets;  // per t: offset of (b - bmin)
    std::vector<long long> sizes;                 // per t

    // exact mode: every slice, big-integer completion counts
    std::vector<std::vector<BigInt>> count_slices;

    // scaled mode: per-slice-normalized doubles at checkpoints only
    int stride = 64;
    std::vector<std::vector<double>> checkpoints; // index t / stride, plus terminal

    long long index(int t, int b, int x) const { return offsets[t][b - bmin[t]] + x; }
    bool in_range(int t, int b) const { return b >= bmin[t] && b <= bmax[t]; }

    template <typename Value>
    void compute_slice(int t, const std::vector<Value>& next, std::vector<Value>& out) const {
        out.assign(static_cast<std::size_t>(sizes[t]), Value(0));
        for (int b = bmin[t]; b <= bmax[t]; ++b) {
            const bool b_ok = 2 * b <= t && b + 1 <= n;        // y >= 0 and count room
            const bool g_ok = t - b < n;                       // g-step room
            Value m(0);                                        // running weighted prefix
            for (int x = 0; x <= b; ++x) {
                Value v(0);
                if (b_ok) {
                    if constexpr (std::is_same_v<Value, BigInt>) {
                        v += next[index(t + 1, b + 1, x + 1)];
                    } else {
                        v += 0.5 * next[index(t + 1, b + 1, x + 1)];
                    }
                }
                if (g_ok) {
                    if constexpr (std::is_same_v<Value, BigInt>) {
                        m += next[index(t + 1, b, x)];
                        v += m;
                    } else {
                        m = 0.5 * m + 0.25 * next[index(t + 1, b, x)];
                        v += m;
                    }
                }
                out[static_cast<std::size_t>(index(t, b, x))] = v;
            }
        }
    }

    std::vector<double> terminal_slice() const {
        std::vector<double> slice(static_cast<std::size_t>(sizes[T]), 0.0);
        slice[static_cast<std::size_t>(index(T, n, 0))] = 1.0;
        return slice;
    }

    static void normalize(std::vector<double>& slice) {
        double mx = 0.0;
        for (double v : slice) mx = std::max(mx, v);
        if (mx > 0.0)
            for (double& v : slice) v /= mx;
    }
};

SchnyderDpSampler::SchnyderDpSampler(int n, int max_n, int exact_threshold)
    : n_(n), impl_(new Impl) {
    if (n < 1) throw ValidationError("SchnyderDpSampler: n must be >= 1");
    if (n > max_n)
        throw BudgetError("SchnyderDpSampler: n exceeds the memory budget cap " +
                          std::to_string(max_n));
    Impl& im = *impl_;
    im.n = n;
    im.T = 2 * n;
    im.exact = n <= exact_threshold;

    im.bmin.resize(im.T + 1);
    im.bmax.resize(im.T + 1);
    im.offsets.resize(im.T + 1);
    im.sizes.resize(im.T + 1);
    for (int t = 0; t <= im.T; ++t) {
        im.bmin[t] = std::max(0, t - n);
        im.bmax[t] = std::min(n, (t + 1) / 2);
        long long off = 0;
        im.offsets[t].resize(im.bmax[t] - im.bmin[t] + 1);
        for (int b = im.bmin[t]; b <= im.bmax[t]; ++b) {
            im.offsets[t][b - im.bmin[t]] = off;
            off += b + 1; // x in [0, b]
        }
        im.sizes[t] = off;
    }

    if (im.exact) {
        im.count_slices.resize(im.T + 1);
        std::vector<BigInt> terminal(static_cast<std::size_t>(im.sizes[im.T]), BigInt(0));
        terminal[static_cast<std::size_t>(im.index(im.T, n, 0))] = 1;
        im.count_slices[im.T] = std::move(terminal);
        for (int t = im.T - 1; t >= 0; --t)
            im.compute_slice<BigInt>(t, im.count_slices[t + 1], im.count_slices[t]);
        if (im.count_slices[0][static_cast<std::size_t>(im.index(0, 0, 0))] == 0)
            throw ValidationError("SchnyderDpSampler: no valid walks (internal error)");
    } else {
        const int cps = im.T / im.stride + 1;
        im.checkpoints.resize(cps);
        std::vector<double> next = im.terminal_slice();
        if (im.T % im.stride == 0) im.checkpoints[im.T / im.stride] = next;
        std::vector<double> cur;
        for (int t = im.T - 1; t >= 0; --t) {
            im.compute_slice<double>(t, next, cur);
            Impl::normalize(cur);
            next.swap(cur);
            if (t % im.stride == 0) im.checkpoints[t / im.stride] = next;
        }
    }
}

SchnyderDpSampler::~SchnyderDpSampler() = default;

std::vector<ConeWalk> SchnyderDpSampler::sample_many(int count, std::uint64_t seed) const {
    if (count < 1) throw ValidationError("sample_many: count must be >= 1");
    const Impl& im = *impl_;
    const int n = im.n;

    struct Walker {
        int b = 0;
        long long x = 0;
        Rng rng;
        ConeWalk walk;
        explicit Walker(std::uint64_t s) : rng(s) {}
    };
    std::vector<Walker> walkers;
    walkers.reserve(count);
    for (int w = 0; w < count; ++w) {
        walkers.emplace_back(mix_seed(seed, w));
        walkers[w].walk.steps.reserve(im.T);
    }

    // window of slices t in (base, base+stride], recomputed backward from the
    // nearest checkpoint; all walkers advance through it in lockstep
    std::vector<std::vector<double>> window;
    int window_base = -1;
    auto slice_at = [&](int t) -> const std::vector<double>& {
        if (im.T % im.stride == 0 && t == im.T) return im.checkpoints[t / im.stride];
        const int base = (t - 1) / im.stride * im.stride;
        if (base != window_base) {
            const int top = std::min(base + im.stride, im.T);
            window.assign(im.stride, {});
            std::vector<double> next =
                top == im.T && im.T % im.stride != 0 ? im.terminal_slice() : im.checkpoints[top / im.stride];
            if (top == im.T && im.T % im.stride != 0) Impl::normalize(next);
            for (int s = top; s > base; --s) {
                if (s == top) {
                    window[(s - 1) % im.stride] = next;
                } else {
                    std::vector<double> cur;
                    im.compute_slice<double>(s, window[s % im.stride], cur);
                    Impl::normalize(cur);
                    window[(s - 1) % im.stride] = std::move(cur);
                }
            }
            window_base = base;
        }
        return window[(t - 1) % im.stride];
    };

    for (int t = 0; t < im.T; ++t) {
        if (im.exact) {
            const auto& next = im.count_slices[t + 1];
            for (auto& wk : walkers) {
                const bool b_ok = 2 * wk.b <= t && wk.b + 1 <= n;
                const bool g_ok = t - wk.b < n;
                BigInt wb = 0;
                if (b_ok) wb = next[static_cast<std::size_t>(im.index(t + 1, wk.b + 1, wk.x + 1))];
                BigInt total = wb;
                if (g_ok)
                    for (long long k = 0; k <= wk.x; ++k)
                        total += next[static_cast<std::size_t>(im.index(t + 1, wk.b, wk.x - k))];
                // uniform big integer in [0, total)
                BigInt draw;
                const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(total)) + 1;
                do {
                    draw = 0;
                    for (unsigned got = 0; got < bits; got += 64) {
                        draw <<= 64;
                        draw += wk.rng.next_u64();
                    }
                    draw >>= (64 - bits % 64) % 64;
                } while (draw >= total);
                if (b_ok && draw < wb) {
                    wk.walk.steps.emplace_back(1, -1);
                    wk.b += 1;
                    wk.x += 1;
                    continue;
                }
                if (b_ok) draw -= wb;
                long long kk = 0;
                for (long long k = 0; k <= wk.x; ++k) {
                    const BigInt& c = next[static_cast<std::size_t>(im.index(t + 1, wk.b, wk.x - k))];
                    if (draw < c) {
                        kk = k;
                        break;
                    }
                    draw -= c;
                    kk = k;
                }
                wk.walk.steps.emplace_back(static_cast<int>(-kk), 1);
                wk.x -= kk;
            }
        } else {
            const auto& next = slice_at(t + 1);
            for (auto& wk : walkers) {
                const bool b_ok = 2 * wk.b <= t && wk.b + 1 <= n;
                const bool g_ok = t - wk.b < n;
                const double wb =
                    b_ok ? 0.5 * next[static_cast<std::size_t>(im.index(t + 1, wk.b + 1, wk.x + 1))]
                         : 0.0;
                double total = wb;
                if (g_ok) {
                    double f = 0.25;
                    for (long long k = 0; k <= wk.x; ++k, f *= 0.5)
                        total += f * next[static_cast<std::size_t>(im.index(t + 1, wk.b, wk.x - k))];
                }
                double u = wk.rng.uniform() * total;
                if (b_ok && u < wb) {
                    wk.walk.steps.emplace_back(1, -1);
                    wk.b += 1;
                    wk.x += 1;
                    continue;
                }
                u -= wb;
                long long kk = wk.x;
                double f = 0.25;
                for (long long k = 0; k <= wk.x; ++k, f *= 0.5) {
                    const double c =
                        f * next[static_cast<std::size_t>(im.index(t + 1, wk.b, wk.x - k))];
                    if (u < c) {
                        kk = k;
                        break;
                    }
                    u -= c;
                }
                wk.walk.steps.emplace_back(static_cast<int>(-kk), 1);
                wk.x -= kk;
            }
        }
    }

    std::vector<ConeWalk> out;
    out.reserve(count);
    for (auto& wk : walkers) out.push_back(std::move(wk.walk));
    return out;
}

namespace {

std::string sample_schnyder_rejection(int n, std::uint64_t seed) {
    // Unconditioned step law: (1,-1) w.p. 1/2, (-k,1) w.p. 2^(-k-2). The
    // geometric k is drawn from the bit stream and capped at 62; the missing
    // tail mass is ~2^-62, far below anything observable.
    constexpr long long kMaxAttempts = 200'000'000;
    Rng rng(seed);
    for (long long attempt = 0; attempt < kMaxAttempts; ++attempt) {
        ConeWalk w;
        w.steps.reserve(2 * n);
        long long x = 0, y = 0;
        int down = 0, up = 0;
        bool ok = true;
        for (int step = 0; step < 2 * n && ok; ++step) {
            if (rng.bernoulli(0.5)) {
                w.steps.emplace_back(1, -1);
                x += 1;
                y -= 1;
                ++down;
            } else {
                int k = 0;
                while (k < 62 && rng.bernoulli(0.5)) ++k;
                w.steps.emplace_back(-k, 1);
                x -= k;
                y += 1;
                ++up;
            }
            ok = x >= 0 && y >= -1 && down <= n && up <= n;
        }
        if (ok && x == 0 && y == 0) return walk_to_string(w);
    }
    throw BudgetError("sample_uniform_schnyder: rejection retry cap hit");
}

} // namespace

std::string sample_uniform_schnyder(int n, std::uint64_t seed, SchnyderSampleMethod method) {
    if (method == SchnyderSampleMethod::rejection) return sample_schnyder_rejection(n, seed);
    SchnyderDpSampler sampler(n);
    return walk_to_string(sampler.sample(seed));
}

} // namespace permutonlab
