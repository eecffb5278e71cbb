// permuton-lab: sampling, pattern statistics, verification, and point-cloud
// export for d-dimensional permutations and permutons.

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permutonlab/io.hpp"
#include "permutonlab/oracle.hpp"
#include "permutonlab/parallel.hpp"
#include "permutonlab/permuton.hpp"
#include "permutonlab/rng.hpp"
#include "permutonlab/schnyder.hpp"
#include "permutonlab/separable.hpp"

namespace {

using namespace permutonlab;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

std::vector<double> parse_probs(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

DPermutation load_permutation(const std::string& path_or_inline) {
    if (!path_or_inline.empty() && path_or_inline[0] == '@')
        return permutation_from_json(read_text(path_or_inline.substr(1)));
    return DPermutation::parse(path_or_inline);
}

struct SampleOptions {
    std::string family;
    int n = 10;
    int d = 3;
    std::string p = "0.5,0.5";
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "both"; // csv | json | both
    std::string method = "dp";
};

int run_sample(const SampleOptions& opt) {
    DPermutation sigma = DPermutation::identity(1, 2);
    std::string schnyder_string;
    if (opt.family == "schnyder") {
        const auto method =
            opt.method == "rejection" ? SchnyderSampleMethod::rejection : SchnyderSampleMethod::dp;
        schnyder_string = sample_uniform_schnyder(opt.n, opt.seed, method);
        sigma = schnyder_perm_from_string(schnyder_string);
    } else if (opt.family == "separable") {
        sigma = sample_uniform_separable(opt.n, opt.d, opt.seed);
    } else if (opt.family == "brownian") {
        sigma = sample_brownian_cloud(opt.n, parse_probs(opt.p), opt.seed);
    } else {
        throw ValidationError("unknown family '" + opt.family + "'");
    }

    if (opt.format == "json" || opt.format == "both")
        atomic_write_text(opt.out + ".json", permutation_to_json(sigma));
    if (opt.format == "csv" || opt.format == "both") {
        PointCloud cloud = normalized_cloud(sigma);
        cloud.seed = opt.seed;
        cloud.generator = opt.family;
        atomic_write_text(opt.out + ".csv", cloud_to_csv(cloud));
    }
    if (opt.family == "schnyder") {
        atomic_write_text(opt.out + ".string.txt", schnyder_string + "\n");
        atomic_write_text(opt.out + ".walk.json", walk_to_json(string_to_walk(schnyder_string)));
    }
    std::cout << "sampled " << opt.family << " permutation of size " << sigma.size()
              << " (d=" << sigma.dim() << ") -> " << opt.out << ".*\n";
    return kExitOk;
}

struct FreqOptions {
    std::string input;
    std::string pattern;
    std::string mode = "exact";
    long long trials = 100000;
    std::uint64_t seed = 0;
    int k_max = kDefaultKMax;
    int table_k = 0;
    std::string out;
};

int run_freq(const FreqOptions& opt) {
    const DPermutation sigma = load_permutation(opt.input);

    if (opt.table_k > 0) {
        const std::string csv = pattern_table_csv(sigma, opt.table_k, opt.k_max);
        if (opt.out.empty()) {
            std::cout << csv;
        } else {
            atomic_write_text(opt.out, csv);
            std::cout << "pattern table -> " << opt.out << "\n";
        }
        return kExitOk;
    }

    if (opt.pattern.empty()) throw ValidationError("freq needs --pattern (or --table)");
    const DPermutation tau = load_permutation(opt.pattern);
    if (opt.mode == "exact") {
        const Rational f = freq(tau, sigma, opt.k_max);
        std::cout << "freq = " << rational_string(f) << " = " << to_double(f) << "\n";
    } else if (opt.mode == "mc") {
        const McEstimate est = freq_sampled(tau, sigma, opt.trials, opt.seed);
        std::cout << "freq ~ " << est.estimate << " (se " << est.std_error << ", trials "
                  << est.trials << ")\n";
    } else {
        throw ValidationError("mode must be exact or mc");
    }
    return kExitOk;
}

struct VerifyOptions {
    int max_n = 4;
    int max_schnyder = 4;
    int max_k = 3;
    std::string out;
};

int run_verify(const VerifyOptions& opt) {
    EnumerationBudget budget;
    budget.max_perm_size = opt.max_n;
    budget.max_schnyder_size = opt.max_schnyder;
    budget.max_pattern_size = opt.max_k;
    const auto results = run_verification(budget);
    bool all = true;
    for (const auto& res : results) {
        std::printf("%-36s %s  (%.1f ms)  %s\n", res.name.c_str(), res.pass ? "pass" : "FAIL",
                    res.millis, res.detail.c_str());
        all = all && res.pass;
    }
    if (!opt.out.empty()) atomic_write_text(opt.out, manifest_to_json(results));
    return all ? kExitOk : kExitValidation;
}

struct ConvergenceOptions {
    std::string family = "schnyder";
    std::string pattern = "2,1";
    std::string marginal = "g";
    std::string n_list = "100,400,1600";
    std::string p = "0.5,0.5";
    int d = 3;
    int reps = 100;
    long long trials = 2000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_convergence(const ConvergenceOptions& opt) {
    const DPermutation tau = load_permutation(opt.pattern);
    const std::vector<int> sizes = parse_ints(opt.n_list);

    EnsembleSampler sampler;
    if (opt.family == "schnyder") {
        if (tau.dim() != 2)
            throw ValidationError("schnyder convergence tracks a marginal; give a 2-d pattern");
        const std::vector<int> coords =
            opt.marginal == "r" ? std::vector<int>{0, 2} : std::vector<int>{0, 1};
        sampler = [coords](int n, int count, std::uint64_t seed) {
            const SchnyderDpSampler dp(n);
            const auto walks = dp.sample_many(count, seed);
            std::vector<DPermutation> out(count, DPermutation::identity(1, 2));
            parallel_for(count, [&](int i) {
                out[i] = marginal(schnyder_perm_from_walk(walks[i]), coords);
            });
            return out;
        };
    } else if (opt.family == "separable") {
        const int d = opt.d;
        if (tau.dim() != d) throw ValidationError("pattern dimension must match --d");
        sampler = ensemble_from(
            [d](int n, std::uint64_t seed) { return sample_uniform_separable(n, d, seed); });
    } else if (opt.family == "brownian") {
        const std::vector<double> p = parse_probs(opt.p);
        if (tau.dim() != static_cast<int>(p.size()) + 1)
            throw ValidationError("pattern dimension must match the length of --p plus one");
        sampler = ensemble_from(
            [p](int n, std::uint64_t seed) { return sample_brownian_pattern(n, p, seed); });
    } else {
        throw ValidationError("unknown family '" + opt.family + "'");
    }

    const ConvergenceReport report =
        convergence_report(sampler, tau, sizes, opt.reps, opt.trials, opt.seed);
    const std::string json = convergence_report_to_json(report);
    if (opt.out.empty()) {
        std::cout << json << "\n";
    } else {
        atomic_write_text(opt.out, json);
        std::cout << "convergence report -> " << opt.out << "\n";
    }
    for (const auto& row : report.rows)
        std::printf("n=%-6d mean=%.6f se=%.6f reps=%d\n", row.n, row.mean, row.se, row.reps);
    std::cout << "trend: " << report.trend << "\n";
    return kExitOk;
}

struct TreesOptions {
    std::string input; // schnyder string, inline or @file
    std::string out;
};

int run_trees(const TreesOptions& opt) {
    std::string s = opt.input;
    if (!s.empty() && s[0] == '@') {
        s = read_text(s.substr(1));
        while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    }
    const ConeWalk w = string_to_walk(s);
    const CoalescentWalkProcess green(w, WalkVariant::green);
    const CoalescentWalkProcess red(w, WalkVariant::red);
    const auto [gt, rt] = trees_from_processes(green, red);
    atomic_write_text(opt.out + ".green.json", forest_to_json(gt, "green"));
    atomic_write_text(opt.out + ".red.json", forest_to_json(rt, "red"));
    std::cout << "forests -> " << opt.out << ".{green,red}.json\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"permuton-lab: d-dimensional permutations, permutons, Schnyder woods, and "
                 "separable-permutation pipelines"};
    app.require_subcommand(1);

    SampleOptions sample;
    auto* cmd_sample = app.add_subcommand("sample", "sample a permutation and export it");
    cmd_sample->add_option("--family", sample.family, "schnyder | separable | brownian")
        ->required();
    cmd_sample->add_option("--n", sample.n, "size (schnyder/separable) or cloud size (brownian)");
    cmd_sample->add_option("--d", sample.d, "dimension (separable)");
    cmd_sample->add_option("--p", sample.p, "comma-separated sign probabilities (brownian)");
    cmd_sample->add_option("--seed", sample.seed, "random seed")->required();
    cmd_sample->add_option("--out", sample.out, "output base path")->required();
    cmd_sample->add_option("--format", sample.format, "csv | json | both");
    cmd_sample->add_option("--method", sample.method, "dp | rejection (schnyder)");

    FreqOptions freq_opt;
    auto* cmd_freq = app.add_subcommand("freq", "pattern frequency of a stored permutation");
    cmd_freq->add_option("--input", freq_opt.input, "permutation: inline cols or @file.json")
        ->required();
    cmd_freq->add_option("--pattern", freq_opt.pattern, "pattern: inline cols or @file.json");
    cmd_freq->add_option("--mode", freq_opt.mode, "exact | mc");
    cmd_freq->add_option("--trials", freq_opt.trials, "Monte Carlo trials");
    cmd_freq->add_option("--seed", freq_opt.seed, "random seed (mc mode)");
    cmd_freq->add_option("--k-max", freq_opt.k_max, "exact enumeration cap");
    cmd_freq->add_option("--table", freq_opt.table_k, "emit the occ/freq table for this size");
    cmd_freq->add_option("--out", freq_opt.out, "write the table here instead of stdout");

    VerifyOptions verify;
    auto* cmd_verify = app.add_subcommand("verify", "run the oracle cross-check manifest");
    cmd_verify->add_option("--max-n", verify.max_n, "permutation size cap");
    cmd_verify->add_option("--max-schnyder", verify.max_schnyder, "wood size cap");
    cmd_verify->add_option("--max-k", verify.max_k, "pattern size cap");
    cmd_verify->add_option("--out", verify.out, "manifest JSON path");

    ConvergenceOptions conv;
    auto* cmd_conv = app.add_subcommand("convergence", "pattern-frequency convergence diagnostics");
    cmd_conv->add_option("--family", conv.family, "schnyder | separable | brownian");
    cmd_conv->add_option("--pattern", conv.pattern, "pattern: inline cols or @file.json");
    cmd_conv->add_option("--marginal", conv.marginal, "g | r (schnyder)");
    cmd_conv->add_option("--n-list", conv.n_list, "comma-separated sizes");
    cmd_conv->add_option("--p", conv.p, "sign probabilities (brownian)");
    cmd_conv->add_option("--d", conv.d, "dimension (separable)");
    cmd_conv->add_option("--reps", conv.reps, "draws per size");
    cmd_conv->add_option("--trials", conv.trials, "subset samples per draw");
    cmd_conv->add_option("--seed", conv.seed, "random seed")->required();
    cmd_conv->add_option("--out", conv.out, "report JSON path");

    TreesOptions trees;
    auto* cmd_trees = app.add_subcommand("trees", "green/red spanning forests of a wood");
    cmd_trees->add_option("--input", trees.input, "schnyder string, inline or @file")->required();
    cmd_trees->add_option("--out", trees.out, "output base path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (cmd_sample->parsed()) return run_sample(sample);
        if (cmd_freq->parsed()) return run_freq(freq_opt);
        if (cmd_verify->parsed()) return run_verify(verify);
        if (cmd_conv->parsed()) return run_convergence(conv);
        if (cmd_trees->parsed()) return run_trees(trees);
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
