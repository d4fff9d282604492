// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

// assocnet: build word-association networks, spread activation from primes
// and score implicit bias in the resulting activation levels.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "assocnet/error.hpp"
#include "assocnet/pipeline.hpp"
#include "assocnet/text.hpp"

namespace {

using namespace assocnet;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitComputation = 4;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return kExitConfig;
        case ErrorKind::data: return kExitData;
        case ErrorKind::computation: return kExitComputation;
    }
    return kExitComputation;
}

DiameterMethod diameter_method_from(const std::string& name) {
    if (name == "exact") return DiameterMethod::exact;
    return DiameterMethod::double_sweep_lower_bound;
}

void log_to_stderr(std::string_view line) { std::cerr << line << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Word-association network bias toolkit"};
    app.require_subcommand(1);

    const std::vector<std::string> diameter_choices{"exact", "double_sweep_lower_bound"};
    const std::vector<std::string> cost_choices{"inverse_weight", "unit"};

    // run
    auto* run = app.add_subcommand("run", "Run every stage from a JSON run configuration");
    std::string config_path;
    std::optional<double> retention;
    std::optional<int> steps;
    std::optional<double> initial_activation;
    std::string norm_name;
    std::optional<int> max_paths;
    std::string out_dir;
    bool no_cache = false;
    bool quiet = false;
    run->add_option("--config", config_path, "Run configuration (JSON)")->required();
    run->add_option("--retention", retention, "Fraction of activation a node keeps per step");
    run->add_option("--steps", steps, "Number of spreading steps (default: 2 x diameter)");
    run->add_option("--initial-activation", initial_activation, "Activation placed on the prime (default: node count)");
    run->add_option("--norm", norm_name, "Column-then-row norm for every approach")->check(CLI::IsMember({"l1", "l2"}));
    run->add_option("--max-paths", max_paths, "Co-minimal paths enumerated per stream");
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    run->add_flag("--no-cache", no_cache, "Ignore and do not populate the stage cache");
    run->add_flag("-q,--quiet", quiet, "Suppress the stage log on stderr");

    // build
    auto* build = app.add_subcommand("build", "Build the filtered association network");
    std::string norms_path;
    std::string norms_format = "aggregated";
    std::string vocab_path;
    std::int64_t min_weight = 2;
    std::string diameter_name = "exact";
    build->add_option("--norms", norms_path, "Free-association norms file")->required()->check(CLI::ExistingFile);
    build->add_option("--format", norms_format, "Norms format")->check(CLI::IsMember({"trial", "aggregated"}));
    build->add_option("--vocab", vocab_path, "Vocabulary filter, one word per line")->check(CLI::ExistingFile);
    build->add_option("--min-weight", min_weight, "Drop undirected edges lighter than this");
    build->add_option("--diameter-method", diameter_name)->check(CLI::IsMember(diameter_choices));
    build->add_option("--out", out_dir, "Output directory")->required();

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Structural statistics of a serialized network");
    std::string network_path;
    stats_cmd->add_option("--network", network_path, "Edge list written by build")->required()->check(CLI::ExistingFile);
    stats_cmd->add_option("--diameter-method", diameter_name)->check(CLI::IsMember(diameter_choices));
    stats_cmd->add_option("--out", out_dir, "Write stats.json here instead of stdout");

    // spread
    auto* spread_cmd = app.add_subcommand("spread", "Spread activation from every prime of a spec");
    std::string spec_path;
    unsigned threads = 0;
    spread_cmd->add_option("--network", network_path)->required()->check(CLI::ExistingFile);
    spread_cmd->add_option("--spec", spec_path, "Prime spec (JSON)")->required()->check(CLI::ExistingFile);
    spread_cmd->add_option("--retention", retention);
    spread_cmd->add_option("--steps", steps);
    spread_cmd->add_option("--initial-activation", initial_activation);
    spread_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    spread_cmd->add_option("--out", out_dir)->required();

    // bias
    auto* bias_cmd = app.add_subcommand("bias", "Normalize a raw matrix and evaluate one identity");
    std::string matrix_path;
    std::string valence_path;
    std::string emotion_path;
    bias_cmd->add_option("--matrix", matrix_path, "matrix_raw.tsv written by spread")->required()->check(CLI::ExistingFile);
    bias_cmd->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
    bias_cmd->add_option("--valence", valence_path, "Valence lexicon")->check(CLI::ExistingFile);
    bias_cmd->add_option("--emotions", emotion_path, "NRC emotion lexicon")->check(CLI::ExistingFile);
    bias_cmd->add_option("--norm", norm_name, "Override the approach's default norm")->check(CLI::IsMember({"l1", "l2"}));
    bias_cmd->add_option("--out", out_dir)->required();

    // stream
    auto* stream_cmd = app.add_subcommand("stream", "Extract a prime -> target mindset stream as DOT");
    std::string prime;
    std::string target;
    std::string cost_name = "inverse_weight";
    stream_cmd->add_option("--network", network_path)->required()->check(CLI::ExistingFile);
    stream_cmd->add_option("--prime", prime)->required();
    stream_cmd->add_option("--target", target)->required();
    stream_cmd->add_option("--valence", valence_path)->check(CLI::ExistingFile);
    stream_cmd->add_option("--cost-mode", cost_name)->check(CLI::IsMember(cost_choices));
    stream_cmd->add_option("--max-paths", max_paths);
    stream_cmd->add_option("--out", out_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    auto optional_path = [](const std::string& p) -> std::optional<fs::path> {
        if (p.empty()) return std::nullopt;
        return fs::path(p);
    };

    try {
        if (*run) {
            auto cfg = load_run_config(config_path);
            if (retention) cfg.spread.retention = retention;
            if (steps) cfg.spread.steps = steps;
            if (initial_activation) cfg.spread.initial_activation = initial_activation;
            if (!norm_name.empty()) {
                for (auto& [approach, norm] : cfg.normalization) norm = *parse_norm(norm_name);
            }
            if (max_paths) cfg.max_paths = *max_paths;
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (no_cache) cfg.cache = false;
            run_pipeline(cfg, quiet ? RunLog{} : RunLog{log_to_stderr});
        } else if (*build) {
            const auto records = read_norms_file(norms_path, *parse_norm_format(norms_format));
            std::optional<std::unordered_set<std::string>> vocab;
            if (!vocab_path.empty()) {
                std::ifstream in(vocab_path);
                vocab = load_vocabulary(in);
            }
            const auto net = build_network(records, vocab ? &*vocab : nullptr, min_weight);
            const auto s = write_build_stage(out_dir, net, diameter_method_from(diameter_name));
            std::cerr << s.node_count << " nodes, " << s.edge_count << " edges\n";
        } else if (*stats_cmd) {
            const auto net = read_network_file(network_path);
            if (out_dir.empty()) {
                std::cout << stats_to_json(network_stats(net, diameter_method_from(diameter_name)));
            } else {
                write_stats_stage(out_dir, net, diameter_method_from(diameter_name));
            }
        } else if (*spread_cmd) {
            const auto net = read_network_file(network_path);
            const auto spec = read_prime_spec_file(spec_path);
            SpreadOverrides overrides{retention, steps, initial_activation};
            // the diameter is only needed when steps are derived from it
            const int diam = steps ? 0 : diameter(net);
            const auto params = resolve_spread_params(net, diam, overrides);
            write_spread_stage(out_dir, spread_batch(net, spec.all_primes(), params, threads));
        } else if (*bias_cmd) {
            const auto raw = read_matrix_files(matrix_path);
            const auto spec = read_prime_spec_file(spec_path);
            const auto lex = read_lexicon_files(optional_path(valence_path), optional_path(emotion_path));
            const Norm norm = norm_name.empty() ? default_norm(spec.approach) : *parse_norm(norm_name);
            const auto report = write_bias_stage(out_dir, raw, spec, &lex, norm);
            std::cout << report_to_json(report);
        } else if (*stream_cmd) {
            const auto net = read_network_file(network_path);
            const auto lex = read_lexicon_files(optional_path(valence_path), std::nullopt);
            const auto s = write_stream_stage(out_dir, net, {text::normalize_token(prime), text::normalize_token(target)}, *parse_cost_mode(cost_name),
                                              max_paths.value_or(kDefaultMaxPaths), lex);
            std::cerr << s.paths.size() << " co-minimal path(s), hop length " << s.hop_length() << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    return 0;
}
