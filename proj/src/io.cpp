#include "permutonlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace permutonlab {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError(std::string("malformed JSON for ") + what);
    return j;
}

} // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw ValidationError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string permutation_to_json(const DPermutation& p) {
    json j;
    j["d"] = p.dim();
    j["n"] = p.size();
    j["cols"] = p.one_based_cols();
    return j.dump();
}

DPermutation permutation_from_json(const std::string& text) {
    const json j = parse(text, "permutation");
    if (!j.contains("cols") || !j["cols"].is_array())
        throw ValidationError("permutation JSON needs a 'cols' array");
    std::vector<std::vector<int>> cols;
    for (const auto& col : j["cols"]) cols.push_back(col.get<std::vector<int>>());
    const DPermutation p = DPermutation::from_one_based(cols);
    if (j.contains("d") && j["d"].get<int>() != p.dim())
        throw ValidationError("permutation JSON 'd' disagrees with the columns");
    if (j.contains("n") && j["n"].get<int>() != p.size())
        throw ValidationError("permutation JSON 'n' disagrees with the columns");
    return p;
}

std::string cloud_to_csv(const PointCloud& cloud) {
    std::ostringstream out;
    out << "i";
    for (int c = 1; c <= cloud.d; ++c) out << ",x" << c;
    out << "\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        out << i + 1;
        for (double v : cloud.points[i]) out << ',' << format_double(v);
        out << "\n";
    }
    return out.str();
}

PointCloud normalized_cloud(const DPermutation& p) {
    PointCloud cloud;
    cloud.d = p.dim();
    cloud.generator = "cube-centers";
    const int n = p.size();
    for (int i = 0; i < n; ++i) {
        std::vector<double> x(p.dim());
        x[0] = (2.0 * i + 1.0) / (2.0 * n);
        for (int j = 1; j < p.dim(); ++j) x[j] = (2.0 * p.value(i, j - 1) + 1.0) / (2.0 * n);
        cloud.points.push_back(std::move(x));
    }
    return cloud;
}

std::string walk_to_json(const ConeWalk& w) {
    json j;
    j["n"] = w.wood_size();
    json steps = json::array();
    for (const auto& [dx, dy] : w.steps) steps.push_back({dx, dy});
    j["steps"] = std::move(steps);
    return j.dump();
}

ConeWalk walk_from_json(const std::string& text) {
    const json j = parse(text, "walk");
    if (!j.contains("steps") || !j["steps"].is_array())
        throw ValidationError("walk JSON needs a 'steps' array");
    ConeWalk w;
    for (const auto& s : j["steps"]) w.steps.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
    auto problems = validate_walk(w);
    if (!problems.empty()) throw ValidationError("walk JSON: " + problems.front());
    if (j.contains("n") && j["n"].get<int>() != w.wood_size())
        throw ValidationError("walk JSON 'n' disagrees with the steps");
    return w;
}

std::string forest_to_json(const RootedForest& f, const std::string& root_color) {
    json j;
    j["root"] = root_color;
    json parent = json::object();
    json order = json::object();
    for (int v = 1; v <= f.n; ++v) parent[std::to_string(v)] = f.parent[v];
    for (int v = 0; v <= f.n; ++v)
        if (v == 0 || !f.children[v].empty()) order[std::to_string(v)] = f.children[v];
    j["parent"] = std::move(parent);
    j["order"] = std::move(order);
    return j.dump();
}

RootedForest forest_from_json(const std::string& text) {
    const json j = parse(text, "forest");
    const auto& parent = j.at("parent");
    RootedForest f = RootedForest::empty(static_cast<int>(parent.size()));
    for (const auto& [key, value] : parent.items()) f.parent[std::stoi(key)] = value.get<int>();
    if (j.contains("order"))
        for (const auto& [key, value] : j["order"].items())
            f.children[std::stoi(key)] = value.get<std::vector<int>>();
    auto problems = validate_forest(f);
    if (!problems.empty()) throw ValidationError("forest JSON: " + problems.front());
    return f;
}

namespace {

json tree_node_to_json(const LabeledPlaneTree& t, int v) {
    json node;
    if (t.is_leaf(v)) {
        node["label"] = nullptr;
    } else {
        node["label"] = t.nodes[v].label;
    }
    json kids = json::array();
    for (int c : t.nodes[v].children) kids.push_back(tree_node_to_json(t, c));
    node["children"] = std::move(kids);
    return node;
}

int tree_node_from_json(const json& node, LabeledPlaneTree& t) {
    const int v = t.add_node();
    if (node.contains("label") && !node["label"].is_null())
        t.nodes[v].label = node["label"].get<std::vector<int>>();
    if (node.contains("children"))
        for (const auto& kid : node["children"]) {
            const int c = tree_node_from_json(kid, t);
            t.nodes[v].children.push_back(c);
        }
    return v;
}

std::string tree_to_json(const LabeledPlaneTree& t, const std::string& kind) {
    json j;
    j["kind"] = kind;
    j["d"] = t.d;
    j["node"] = tree_node_to_json(t, 0);
    return j.dump();
}

LabeledPlaneTree tree_from_json(const std::string& text, const std::string& kind) {
    const json j = parse(text, "tree");
    if (j.at("kind").get<std::string>() != kind)
        throw ValidationError("tree JSON has kind '" + j.at("kind").get<std::string>() +
                              "', expected '" + kind + "'");
    LabeledPlaneTree t;
    t.d = j.at("d").get<int>();
    tree_node_from_json(j.at("node"), t);
    return t;
}

} // namespace

std::string sign_tree_to_json(const SignTree& t) { return tree_to_json(t.tree, "sign"); }
std::string swap_tree_to_json(const SwapTree& t) { return tree_to_json(t.tree, "swap"); }

SignTree sign_tree_from_json(const std::string& text) {
    SignTree t;
    t.tree = tree_from_json(text, "sign");
    auto problems = validate_sign_tree(t);
    if (!problems.empty()) throw ValidationError("sign tree JSON: " + problems.front());
    return t;
}

SwapTree swap_tree_from_json(const std::string& text) {
    SwapTree t;
    t.tree = tree_from_json(text, "swap");
    auto problems = validate_swap_tree(t);
    if (!problems.empty()) throw ValidationError("swap tree JSON: " + problems.front());
    return t;
}

std::string convergence_report_to_json(const ConvergenceReport& report) {
    json j;
    j["pattern"] = report.pattern.to_string();
    j["trend"] = report.trend;
    j["trials_per_rep"] = report.trials_per_rep;
    json rows = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["n"] = row.n;
        r["mean"] = row.mean;
        r["se"] = row.se;
        r["reps"] = row.reps;
        json law = json::object();
        for (const auto& [tau, count] : row.sampled_pattern_counts) law[tau] = count;
        r["sampled_pattern_law"] = std::move(law);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2);
}

std::string manifest_to_json(const std::vector<CheckResult>& results) {
    json checks = json::array();
    bool all = true;
    for (const auto& res : results) {
        json c;
        c["name"] = res.name;
        c["pass"] = res.pass;
        c["millis"] = res.millis;
        c["detail"] = res.detail;
        checks.push_back(std::move(c));
        all = all && res.pass;
    }
    json j;
    j["all_pass"] = all;
    j["checks"] = std::move(checks);
    return j.dump(2);
}

std::string pattern_table_csv(const DPermutation& sigma, int k, int k_max) {
    std::ostringstream out;
    out << "tau,occ,freq\n";
    for_each_d_permutation(k, sigma.dim(), 100'000'000, [&](const DPermutation& tau) {
        const BigInt count = occ(tau, sigma, k_max);
        const Rational f = Rational(count, binomial(sigma.size(), k));
        out << tau.to_string() << ',' << count.str() << ',' << rational_string(f) << "\n";
    });
    return out.str();
}

} // namespace permutonlab
