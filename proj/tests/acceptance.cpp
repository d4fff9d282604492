// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion.
//
//   acceptance                     run every criterion
//   acceptance --criterion NAME    run one; exit 0 pass, 1 fail, 77 skipped
//   acceptance --list

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "assocnet/activation.hpp"
#include "assocnet/bias.hpp"
#include "assocnet/pipeline.hpp"
#include "assocnet/stats.hpp"
#include "oracles.hpp"

using namespace assocnet;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict = Verdict::fail;
    std::string detail;
};

struct Criterion {
    std::string name;
    double time_limit_s;  // 0 = none
    std::function<Outcome()> run;
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

AssociationNetwork random_network(std::mt19937_64& rng, int n_min, int n_max) {
    std::uniform_int_distribution<int> size(n_min, n_max);
    const int n = size(rng);
    std::uniform_int_distribution<int> extra(0, 2 * n);
    return AssociationNetwork::from_edges(oracle::random_connected_graph(rng, n, extra(rng), 20));
}

SpreadParams params(double r, int steps, double initial) {
    SpreadParams p;
    p.retention = r;
    p.steps = steps;
    p.initial_activation = initial;
    return p;
}

// ---------------------------------------------------------------------------

Outcome conservation() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    int runs = 0;
    for (int g = 0; g < 200; ++g) {
        const auto net = random_network(rng, 5, 200);
        const int diam = diameter(net);
        const auto n = static_cast<double>(net.node_count());
        const auto prime = net.label(static_cast<NodeId>(rng() % net.node_count()));
        for (double r : {0.0, 0.25, 0.5, 1.0}) {
            const auto a = spread(net, prime, params(r, 2 * diam, n));
            worst = std::max(worst, std::abs(a.sum() - n) / n);
            ++runs;
        }
    }
    return verdict(worst <= 1e-9, std::to_string(runs) + " spreads, max relative drift " + fmt(worst));
}

Outcome dense_oracle() {
    std::mt19937_64 rng(202);
    double worst = 0.0;
    int runs = 0;
    for (int g = 0; g < 50; ++g) {
        const auto net = random_network(rng, 2, 50);
        const auto w = oracle::dense_weights(net);
        const int diam = diameter(net);
        const auto n = static_cast<double>(net.node_count());
        for (double r : {0.0, 0.25, 0.5, 1.0}) {
            const auto prime = static_cast<NodeId>(rng() % net.node_count());
            const auto a = spread(net, net.label(prime), params(r, 2 * diam, n));
            const auto ref = oracle::dense_spread(w, prime, r, 2 * diam, n);
            worst = std::max(worst, (a - ref).cwiseAbs().maxCoeff());
            ++runs;
        }
    }
    return verdict(worst < 1e-12, std::to_string(runs) + " spreads, max abs error " + fmt(worst));
}

Outcome stationarity() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    int worst_steps = 0;
    int worst_needed = 0;
    for (int g = 0; g < 20; ++g) {
        const auto net = random_network(rng, 10, 100);
        const int steps = 10 * diameter(net);
        const auto n = static_cast<double>(net.node_count());
        double total = 0.0;
        for (std::size_t i = 0; i < net.node_count(); ++i) total += net.strength(static_cast<NodeId>(i));
        Eigen::VectorXd expected(static_cast<Eigen::Index>(net.node_count()));
        for (std::size_t i = 0; i < net.node_count(); ++i) {
            expected(static_cast<Eigen::Index>(i)) = n * net.strength(static_cast<NodeId>(i)) / total;
        }
        const auto prime = net.label(static_cast<NodeId>(rng() % net.node_count()));
        const double err = (spread(net, prime, params(0.5, steps, n)) - expected).cwiseAbs().maxCoeff();
        if (err > worst) {
            worst = err;
            worst_steps = steps;
            // how many steps this graph actually needs
            const auto t = transition_operator<double>(net);
            Eigen::VectorXd a = Eigen::VectorXd::Zero(expected.size());
            a(*net.find(prime)) = n;
            int k = 0;
            while ((a - expected).cwiseAbs().maxCoeff() > 1e-6 && k < 100000) {
                a = diffuse<double>(t, a, 0.5, 1);
                ++k;
            }
            worst_needed = k;
        }
    }
    return verdict(worst <= 1e-6, "retention 0.5, max abs error " + fmt(worst) + " after " + std::to_string(worst_steps) +
                                      " steps (that graph needs " + std::to_string(worst_needed) + ")");
}

Outcome wilcoxon_exact() {
    std::mt19937_64 rng(404);
    int cases = 0;
    int mismatches = 0;
    for (int n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<int> mags(40);
            for (int i = 0; i < 40; ++i) mags[static_cast<std::size_t>(i)] = i + 1;
            std::shuffle(mags.begin(), mags.end(), rng);
            std::vector<double> d;
            for (int i = 0; i < n; ++i) {
                const double m = mags[static_cast<std::size_t>(i)];
                d.push_back((rng() & 1U) ? m : -m);
            }
            const auto r = stats::wilcoxon_signed_rank(d);
            if (r.p_value != oracle::wilcoxon_enumeration_p(d) || r.method != "wilcoxon_signed_rank_exact") ++mismatches;
            ++cases;
        }
    }
    return verdict(mismatches == 0, std::to_string(cases) + " vectors, " + std::to_string(mismatches) + " mismatches");
}

Outcome ols_wald() {
    std::mt19937_64 rng(505);
    std::normal_distribution<double> g;
    double worst_beta = 0.0;
    double worst_chi = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const int n = k + 10 + static_cast<int>(rng() % static_cast<unsigned>(200 - k - 10 + 1));
        Eigen::MatrixXd x(n, k);
        Eigen::VectorXd y(n);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
        for (int j = 0; j < k; ++j) beta(j) = 0.3 * g(rng);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) x(i, j) = g(rng);
            y(i) = 1.0 + x.row(i).dot(beta) + g(rng);
        }
        const auto fit = stats::ols_fit(y, x);
        const auto ref = oracle::normal_equations_ols(y, x);
        worst_beta = std::max(worst_beta, (fit.coefficients - ref.beta).norm() / ref.beta.norm());
        std::vector<int> idx;
        for (int j = 1; j <= k; ++j) idx.push_back(j);
        const double chi = stats::wald_equal_coefficients(fit, idx).statistic;
        const double chi_ref = oracle::wald_quadratic_form(ref.beta, ref.covariance, idx);
        worst_chi = std::max(worst_chi, std::abs(chi - chi_ref) / std::abs(chi_ref));
    }
    return verdict(worst_beta <= 1e-8 && worst_chi <= 1e-8,
                   "100 problems, max relative error: coefficients " + fmt(worst_beta) + ", chi-square " + fmt(worst_chi));
}

// ---------------------------------------------------------------------------
// Real-data criteria. They need the LLM free-association norms, which are not
// shipped. Layout of $ASSOCNET_LWOW_DIR:
//   mistral.tsv, llama3.tsv, haiku.tsv   trial rows: cue, three responses
//   vocabulary.txt                      WordNet lemmas, one per line

struct PublishedStats {
    const char* model;
    std::size_t nodes;
    std::size_t edges;
    double density;
    double average_degree;
};

constexpr PublishedStats kPublished[] = {
    {"mistral", 20339, 199103, 0.0010, 20},
    {"llama3", 38987, 546866, 0.0007, 28},
    {"haiku", 15596, 64599, 0.0005, 8},
};

std::optional<fs::path> lwow_dir() {
    const char* dir = std::getenv("ASSOCNET_LWOW_DIR");
    if (!dir || !*dir || !fs::exists(fs::path(dir) / "vocabulary.txt")) return std::nullopt;
    return fs::path(dir);
}

const char* kNoData = "LWOW norms not available (set ASSOCNET_LWOW_DIR)";

AssociationNetwork lwow_network(const fs::path& dir, const std::string& model) {
    const auto records = read_norms_file(dir / (model + ".tsv"), NormFormat::trial);
    std::ifstream vin(dir / "vocabulary.txt");
    const auto vocab = load_vocabulary(vin);
    return build_network(records, &vocab, 2);
}

bool same_to_two_figures(double a, double b) {
    auto round2 = [](double v) {
        if (v == 0.0) return 0.0;
        const double scale = std::pow(10.0, 1 - std::floor(std::log10(std::abs(v))));
        return std::round(v * scale) / scale;
    };
    return round2(a) == round2(b);
}

Outcome table1() {
    const auto dir = lwow_dir();
    if (!dir) return {Verdict::skip, kNoData};
    bool ok = true;
    int seen = 0;
    std::string detail;
    for (const auto& p : kPublished) {
        if (!fs::exists(*dir / (std::string(p.model) + ".tsv"))) continue;
        ++seen;
        const auto net = lwow_network(*dir, p.model);
        const auto st = network_stats(net, DiameterMethod::double_sweep_lower_bound);
        const bool exact = st.node_count == p.nodes && st.edge_count == p.edges;
        const bool close = same_to_two_figures(st.density, p.density) &&
                           same_to_two_figures(st.average_degree, p.average_degree);
        ok = ok && (exact || close);
        detail += std::string(p.model) + " " + std::to_string(st.node_count) + "/" + std::to_string(st.edge_count) +
                  (exact ? " exact; " : close ? " density and degree match; " : " mismatch; ");
    }
    if (seen == 0) return {Verdict::skip, kNoData};
    return verdict(ok, detail);
}

Outcome fig3() {
    const auto dir = lwow_dir();
    if (!dir) return {Verdict::skip, kNoData};
    const auto spec = read_prime_spec_file(fs::path(ASSOCNET_SOURCE_DIR) / "data/specs/gender.json");
    bool ok = true;
    int seen = 0;
    std::string detail;
    for (const auto& p : kPublished) {
        if (!fs::exists(*dir / (std::string(p.model) + ".tsv"))) continue;
        ++seen;
        const auto net = lwow_network(*dir, p.model);
        const auto sp = SpreadParams::defaults_for(net, diameter(net));
        const auto raw = spread_batch(net, spec.all_primes(), sp);
        const auto report = stereotype_bias(normalize_matrix(raw, Norm::l2), spec);
        detail += std::string(p.model);
        for (const auto& r : report.results) {
            const bool good = r.result.effect_size > 0.0 && r.result.p_value < 0.05;
            ok = ok && good;
            detail += " " + r.label + " r=" + fmt(r.result.effect_size) + " p=" + fmt(r.result.p_value);
        }
        detail += "; ";
    }
    if (seen == 0) return {Verdict::skip, kNoData};
    return verdict(ok, detail);
}

// ---------------------------------------------------------------------------

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("assocnet-acceptance-" + std::to_string(getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir.parent_path());
    return dir;
}

Outcome norm_sensitivity() {
    const auto fixture = fs::path(ASSOCNET_FIXTURES) / "norm_sensitive";
    auto cfg = load_run_config(fixture / "run.json");
    cfg.output_dir = scratch("norm-sensitive");
    cfg.cache = false;
    run_pipeline(cfg);
    const auto l1 = nlohmann::json::parse(read_text_file(cfg.output_dir / "politics/report_l1.json"));
    const auto l2 = nlohmann::json::parse(read_text_file(cfg.output_dir / "politics/report_l2.json"));
    std::string flipped;
    for (std::size_t i = 0; i < l1["results"].size(); ++i) {
        const double a = l1["results"][i]["effect_size"].get<double>();
        const double b = l2["results"][i]["effect_size"].get<double>();
        if (a * b < 0.0) flipped += (flipped.empty() ? "" : ", ") + l1["results"][i]["label"].get<std::string>();
    }
    fs::remove_all(cfg.output_dir.parent_path());
    return verdict(!flipped.empty(), "both reports written; sign differs for: " + (flipped.empty() ? "none" : flipped));
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = read_text_file(e.path());
    }
    return files;
}

Outcome determinism() {
    const auto fixture = fs::path(ASSOCNET_FIXTURES) / "toy";
    auto cfg = load_run_config(fixture / "run.json");
    cfg.cache = false;
    cfg.output_dir = scratch("run-a");
    run_pipeline(cfg);
    const auto a = tree(cfg.output_dir);
    cfg.output_dir = scratch("run-b");
    run_pipeline(cfg);
    const auto b = tree(cfg.output_dir);
    fs::remove_all(cfg.output_dir.parent_path());
    return verdict(a == b && !a.empty(), std::to_string(a.size()) + " files compared");
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"conservation", 10, conservation},
        {"dense_oracle", 5, dense_oracle},
        {"stationarity", 5, stationarity},
        {"wilcoxon_exact", 30, wilcoxon_exact},
        {"ols_wald", 10, ols_wald},
        {"table1_network_stats", 600, table1},
        {"fig3_gender_stereotypes", 900, fig3},
        {"norm_sensitivity", 0, norm_sensitivity},
        {"determinism", 0, determinism},
    };
    return all;
}

Verdict run_one(const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o = {Verdict::fail, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.verdict == Verdict::pass && c.time_limit_s > 0 && secs > c.time_limit_s) {
        o.verdict = Verdict::fail;
        o.detail += "; over the " + fmt(c.time_limit_s) + " s budget";
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::cout << tag << ' ' << c.name << ": " << o.detail << " [" << fmt(secs) << " s]" << std::endl;
    return o.verdict;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.size() == 1 && args[0] == "--list") {
        for (const auto& c : criteria()) std::cout << c.name << '\n';
        return 0;
    }
    if (args.size() == 2 && args[0] == "--criterion") {
        for (const auto& c : criteria()) {
            if (c.name != args[1]) continue;
            const auto v = run_one(c);
            return v == Verdict::pass ? 0 : v == Verdict::skip ? 77 : 1;
        }
        std::cerr << "unknown criterion '" << args[1] << "'\n";
        return 2;
    }
    if (!args.empty()) {
        std::cerr << "usage: acceptance [--list | --criterion NAME]\n";
        return 2;
    }
    bool failed = false;
    for (const auto& c : criteria()) failed = run_one(c) == Verdict::fail || failed;
    return failed ? 1 : 0;
}
