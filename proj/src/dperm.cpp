#include "permutonlab/dperm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "permutonlab/rng.hpp"

namespace permutonlab {

namespace {

void throw_if_invalid(const std::vector<std::vector<int>>& cols) {
    auto problems = validate_columns(cols);
    if (!problems.empty()) throw ValidationError(problems.front());
}

// Ranks of values[0..k) into out[0..k): out[a] = #(b : values[b] < values[a]).
// Quadratic, used only for small k.
void small_ranks(const std::vector<int>& values, std::vector<int>& out) {
    const int k = static_cast<int>(values.size());
    out.assign(k, 0);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (values[b] < values[a]) ++out[a];
}

} // namespace

std::vector<std::string> validate_columns(const std::vector<std::vector<int>>& cols) {
    std::vector<std::string> problems;
    if (cols.empty()) {
        problems.push_back("empty column set: a d-permutation needs d >= 2");
        return problems;
    }
    const std::size_t n = cols[0].size();
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto& col = cols[j];
        const std::string where = "column " + std::to_string(j + 1);
        if (col.empty()) {
            problems.push_back(where + ": empty (size must be >= 1)");
            continue;
        }
        if (col.size() != n) {
            problems.push_back(where + ": length " + std::to_string(col.size()) +
                               " differs from column 1 length " + std::to_string(n));
            continue;
        }
        std::vector<char> seen(n, 0);
        for (int v : col) {
            if (v < 1 || v > static_cast<int>(n)) {
                problems.push_back(where + ": value " + std::to_string(v) + " out of range 1.." +
                                   std::to_string(n));
                break;
            }
            if (seen[v - 1]) {
                problems.push_back(where + ": duplicate value " + std::to_string(v));
                break;
            }
            seen[v - 1] = 1;
        }
    }
    return problems;
}

DPermutation DPermutation::from_one_based(const std::vector<std::vector<int>>& cols) {
    throw_if_invalid(cols);
    std::vector<std::vector<int>> zero(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        zero[j].reserve(cols[j].size());
        for (int v : cols[j]) zero[j].push_back(v - 1);
    }
    return DPermutation(std::move(zero), static_cast<int>(cols[0].size()));
}

DPermutation DPermutation::identity(int n, int d) {
    if (n < 1 || d < 2) throw ValidationError("identity requires n >= 1, d >= 2");
    std::vector<std::vector<int>> cols(d - 1, std::vector<int>(n));
    for (auto& col : cols)
        for (int i = 0; i < n; ++i) col[i] = i;
    return DPermutation(std::move(cols), n);
}

std::vector<std::vector<int>> DPermutation::one_based_cols() const {
    std::vector<std::vector<int>> out(cols_.size());
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        out[j].reserve(cols_[j].size());
        for (int v : cols_[j]) out[j].push_back(v + 1);
    }
    return out;
}

bool DPermutation::operator<(const DPermutation& o) const {
    if (dim() != o.dim()) return dim() < o.dim();
    if (n_ != o.n_) return n_ < o.n_;
    return cols_ < o.cols_;
}

std::string DPermutation::to_string() const {
    std::ostringstream out;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (j) out << '|';
        for (std::size_t i = 0; i < cols_[j].size(); ++i) {
            if (i) out << ',';
            out << cols_[j][i] + 1;
        }
    }
    return out.str();
}

DPermutation DPermutation::parse(const std::string& text) {
    std::vector<std::vector<int>> cols;
    std::stringstream columns(text);
    std::string col_text;
    while (std::getline(columns, col_text, '|')) {
        std::vector<int> col;
        std::stringstream vals(col_text);
        std::string v;
        while (std::getline(vals, v, ',')) {
            try {
                col.push_back(std::stoi(v));
            } catch (const std::exception&) {
                throw ValidationError("cannot parse permutation entry '" + v + "'");
            }
        }
        cols.push_back(std::move(col));
    }
    return from_one_based(cols);
}

DPermutation dperm(const std::vector<std::vector<int>>& one_based_cols) {
    return DPermutation::from_one_based(one_based_cols);
}

SignSequence::SignSequence(std::vector<int> s) : signs(std::move(s)) {
    if (signs.empty()) throw ValidationError("sign sequence must have length >= 1");
    for (int v : signs)
        if (v != 1 && v != -1) throw ValidationError("sign sequence entries must be +1 or -1");
}

IndexSet::IndexSet(std::vector<int> idx) : indices(std::move(idx)) {
    for (std::size_t a = 0; a < indices.size(); ++a) {
        if (indices[a] < 1) throw ValidationError("index set entries must be >= 1");
        if (a > 0 && indices[a] <= indices[a - 1])
            throw ValidationError("index set must be strictly increasing");
    }
}

DPermutation pattern_at(const DPermutation& sigma, const IndexSet& I) {
    const int k = I.size();
    const int n = sigma.size();
    if (k == 0) throw ValidationError("pattern_at needs a nonempty index set");
    if (I.indices.back() > n) throw ValidationError("index out of range for this permutation");

    std::vector<std::vector<int>> cols(sigma.dim() - 1);
    std::vector<int> vals(k), ranks;
    for (int j = 0; j + 1 < sigma.dim(); ++j) {
        for (int a = 0; a < k; ++a) vals[a] = sigma.value(I.indices[a] - 1, j);
        small_ranks(vals, ranks);
        cols[j].resize(k);
        for (int a = 0; a < k; ++a) cols[j][a] = ranks[a] + 1;
    }
    return DPermutation::from_one_based(cols);
}

namespace {

// Does sigma restricted to idx (0-based, increasing) realize tau?
// tau_cols0 holds tau's 0-based columns, i.e. the expected rank vectors.
bool subset_matches(const DPermutation& sigma, const std::vector<int>& idx,
                    const std::vector<std::vector<int>>& tau_cols0) {
    const int k = static_cast<int>(idx.size());
    for (std::size_t j = 0; j < tau_cols0.size(); ++j) {
        const auto& expect = tau_cols0[j];
        for (int a = 0; a < k; ++a) {
            int rank = 0;
            const int va = sigma.value(idx[a], static_cast<int>(j));
            for (int b = 0; b < k; ++b)
                if (sigma.value(idx[b], static_cast<int>(j)) < va) ++rank;
            if (rank != expect[a]) return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> zero_based_cols(const DPermutation& p) {
    std::vector<std::vector<int>> cols(p.dim() - 1);
    for (int j = 0; j + 1 < p.dim(); ++j) {
        cols[j].resize(p.size());
        for (int i = 0; i < p.size(); ++i) cols[j][i] = p.value(i, j);
    }
    return cols;
}

} // namespace

BigInt occ(const DPermutation& tau, const DPermutation& sigma, int k_max) {
    if (tau.dim() != sigma.dim()) throw ValidationError("occ: dimension mismatch");
    const int k = tau.size();
    const int n = sigma.size();
    if (k > n) return 0;
    if (k > k_max)
        throw BudgetError("occ: pattern size " + std::to_string(k) +
                          " exceeds enumeration cap " + std::to_string(k_max) +
                          "; use freq_sampled");

    const auto tau0 = zero_based_cols(tau);
    std::vector<int> idx(k);
    for (int a = 0; a < k; ++a) idx[a] = a;

    BigInt count = 0;
    while (true) {
        if (subset_matches(sigma, idx, tau0)) ++count;
        int a = k - 1;
        while (a >= 0 && idx[a] == n - k + a) --a;
        if (a < 0) break;
        ++idx[a];
        for (int b = a + 1; b < k; ++b) idx[b] = idx[b - 1] + 1;
    }
    return count;
}

Rational freq(const DPermutation& tau, const DPermutation& sigma, int k_max) {
    if (tau.dim() != sigma.dim()) throw ValidationError("freq: dimension mismatch");
    if (tau.size() > sigma.size()) return 0;
    return Rational(occ(tau, sigma, k_max), binomial(sigma.size(), tau.size()));
}

McEstimate freq_sampled(const DPermutation& tau, const DPermutation& sigma,
                        long long trials, std::uint64_t seed) {
    if (tau.dim() != sigma.dim()) throw ValidationError("freq_sampled: dimension mismatch");
    if (trials < 1) throw ValidationError("freq_sampled: trials must be >= 1");
    const int k = tau.size();
    const int n = sigma.size();
    McEstimate out;
    out.trials = trials;
    if (k > n) return out;

    const auto tau0 = zero_based_cols(tau);
    Rng rng(seed);
    std::vector<int> idx(k);
    long long hits = 0;
    for (long long t = 0; t < trials; ++t) {
        // Floyd's algorithm for a uniform k-subset of [0, n).
        idx.clear();
        for (int m = n - k; m < n; ++m) {
            int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
            if (std::find(idx.begin(), idx.end(), v) != idx.end()) v = m;
            idx.push_back(v);
        }
        std::sort(idx.begin(), idx.end());
        if (subset_matches(sigma, idx, tau0)) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    out.estimate = p;
    out.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return out;
}

DPermutation block_sum(const DPermutation& a, const DPermutation& b, const SignSequence& s) {
    if (a.dim() != b.dim()) throw ValidationError("block_sum: dimension mismatch");
    if (s.length() != a.dim() - 1)
        throw ValidationError("block_sum: sign sequence length must be d-1");
    const int n1 = a.size();
    const int n2 = b.size();
    std::vector<std::vector<int>> cols(a.dim() - 1);
    for (int j = 0; j + 1 < a.dim(); ++j) {
        auto& col = cols[j];
        col.reserve(n1 + n2);
        const int a_shift = s.signs[j] == 1 ? 0 : n2;
        const int b_shift = s.signs[j] == 1 ? n1 : 0;
        for (int i = 0; i < n1; ++i) col.push_back(a.value(i, j) + 1 + a_shift);
        for (int i = 0; i < n2; ++i) col.push_back(b.value(i, j) + 1 + b_shift);
    }
    return DPermutation::from_one_based(cols);
}

std::vector<int> inverse_marginal(const DPermutation& sigma, int j) {
    if (j < 1 || j > sigma.dim() - 1)
        throw ValidationError("inverse_marginal: coordinate out of range");
    std::vector<int> inv(sigma.size());
    for (int i = 0; i < sigma.size(); ++i) inv[sigma.value(i, j - 1)] = i + 1;
    return inv;
}

DPermutation perm_of_points(const std::vector<std::vector<double>>& points) {
    const int k = static_cast<int>(points.size());
    if (k == 0) throw ValidationError("perm_of_points: empty point set");
    const int d = static_cast<int>(points[0].size());
    if (d < 2) throw ValidationError("perm_of_points: points must have dimension >= 2");
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != d)
            throw ValidationError("perm_of_points: inconsistent point dimensions");

    // rank[c][a] = rank of point a in coordinate c, with ties rejected.
    std::vector<std::vector<int>> rank(d, std::vector<int>(k));
    std::vector<int> order(k);
    for (int c = 0; c < d; ++c) {
        for (int a = 0; a < k; ++a) order[a] = a;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return points[x][c] < points[y][c];
        });
        for (int r = 0; r + 1 < k; ++r)
            if (points[order[r]][c] == points[order[r + 1]][c])
                throw ValidationError("perm_of_points: tie in coordinate " + std::to_string(c + 1));
        for (int r = 0; r < k; ++r) rank[c][order[r]] = r;
    }

    // Index order comes from the first coordinate; the rest become columns.
    std::vector<int> by_first(k);
    for (int a = 0; a < k; ++a) by_first[rank[0][a]] = a;
    std::vector<std::vector<int>> cols(d - 1, std::vector<int>(k));
    for (int c = 1; c < d; ++c)
        for (int r = 0; r < k; ++r) cols[c - 1][r] = rank[c][by_first[r]] + 1;
    return DPermutation::from_one_based(cols);
}

DPermutation marginal(const DPermutation& sigma, const std::vector<int>& coords) {
    const int d = sigma.dim();
    if (coords.size() < 2) throw ValidationError("marginal: need at least two coordinates");
    for (std::size_t a = 0; a < coords.size(); ++a) {
        if (coords[a] < 0 || coords[a] >= d)
            throw ValidationError("marginal: coordinate out of range");
        if (a > 0 && coords[a] <= coords[a - 1])
            throw ValidationError("marginal: coordinates must be strictly increasing");
    }
    const int n = sigma.size();
    auto coord_value = [&](int c, int i) { return c == 0 ? i : sigma.value(i, c - 1); };

    // Order indices by the first retained coordinate, then read the others.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    const int c0 = coords[0];
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return coord_value(c0, x) < coord_value(c0, y);
    });
    std::vector<std::vector<int>> cols(coords.size() - 1, std::vector<int>(n));
    for (std::size_t a = 1; a < coords.size(); ++a)
        for (int r = 0; r < n; ++r) cols[a - 1][r] = coord_value(coords[a], order[r]) + 1;
    return DPermutation::from_one_based(cols);
}

long long inversion_count(const DPermutation& sigma, int j) {
    if (j < 1 || j > sigma.dim() - 1)
        throw ValidationError("inversion_count: coordinate out of range");
    const int n = sigma.size();
    std::vector<int> fenwick(n + 1, 0);
    auto add = [&](int i) {
        for (++i; i <= n; i += i & -i) ++fenwick[i];
    };
    auto count_le = [&](int i) {
        int s = 0;
        for (++i; i > 0; i -= i & -i) s += fenwick[i];
        return s;
    };
    long long inv = 0;
    for (int i = n - 1; i >= 0; --i) {
        const int v = sigma.value(i, j - 1);
        if (v > 0) inv += count_le(v - 1);
        add(v);
    }
    return inv;
}

} // namespace permutonlab
