// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "assocnet/activation.hpp"
#include "assocnet/bias.hpp"
#include "assocnet/ingest.hpp"
#include "assocnet/network.hpp"
#include "assocnet/stream.hpp"

namespace assocnet {

namespace fs = std::filesystem;

struct StreamRequest {
    std::string prime;
    std::string target;
};

/// Optional overrides of the spreading parameters; unset fields take the
/// network-derived defaults.
struct SpreadOverrides {
    std::optional<double> retention;
    std::optional<int> steps;
    std::optional<double> initial_activation;
};

struct RunConfig {
    fs::path association_norms;
    NormFormat norms_format = NormFormat::aggregated;
    std::optional<fs::path> vocabulary;
    std::optional<fs::path> valence_lexicon;
    std::optional<fs::path> emotion_lexicon;
    std::vector<fs::path> prime_specs;

    Weight min_weight = 2;
    DiameterMethod diameter_method = DiameterMethod::exact;
    SpreadOverrides spread;
    std::map<Approach, Norm> normalization{
        {Approach::stereotypes, Norm::l2}, {Approach::valence, Norm::l2}, {Approach::emotions, Norm::l1}};
    /// Also evaluate every identity under the other norm. Valence identities
    /// are skipped under L1, where the design matrix is always singular.
    bool compare_norms = false;

    std::vector<StreamRequest> streams;
    CostMode stream_cost_mode = CostMode::inverse_weight;
    int max_paths = kDefaultMaxPaths;

    fs::path output_dir;
    bool cache = true;
    std::optional<fs::path> cache_dir;  // defaults to "<output_dir>.cache"
    unsigned threads = 0;

    /// Throws ConfigError for missing inputs or an unusable output location.
    void validate() const;
    fs::path resolved_cache_dir() const;
};

/// Relative paths are resolved against the config file's directory.
RunConfig load_run_config(const fs::path& path);
RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir);

using RunLog = std::function<void(std::string_view)>;

/// Runs every stage and promotes the output tree into config.output_dir only
/// when all of them succeed. Stage failures are rethrown with a "[stage]" tag.
void run_pipeline(const RunConfig& config, const RunLog& log = {});

// ---------------------------------------------------------------------------
// Stage entry points shared by run_pipeline and the CLI subcommands. Each
// writes exactly the files run_pipeline writes for that stage.

std::vector<NormRecord> read_norms_file(const fs::path& path, NormFormat format);
Lexicon read_lexicon_files(const std::optional<fs::path>& valence, const std::optional<fs::path>& emotions);
PrimeSpec read_prime_spec_file(const fs::path& path);
AssociationNetwork read_network_file(const fs::path& path);
ActivationMatrix read_matrix_files(const fs::path& tsv);

/// network.tsv + stats.json
NetworkStats write_build_stage(const fs::path& dir, const AssociationNetwork& net, DiameterMethod method);
/// stats.json only
NetworkStats write_stats_stage(const fs::path& dir, const AssociationNetwork& net, DiameterMethod method);

SpreadParams resolve_spread_params(const AssociationNetwork& net, int diameter, const SpreadOverrides& overrides);
/// matrix_raw.tsv + matrix_raw.json
void write_spread_stage(const fs::path& dir, const ActivationMatrix& raw);
/// matrix_<norm>.tsv/.json, report_<norm>.json and the approach's CSV.
BiasReport write_bias_stage(const fs::path& dir, const ActivationMatrix& raw, const PrimeSpec& spec,
                            const Lexicon* lex, Norm norm);
/// <prime>--<target>.dot and .json
MindsetStream write_stream_stage(const fs::path& dir, const AssociationNetwork& net, const StreamRequest& request,
                                 CostMode mode, int max_paths, const Lexicon& lex);

void write_text_file(const fs::path& path, std::string_view contents);
std::string read_text_file(const fs::path& path);

/// Exclusive ownership of an output location via "<dir>.lock".
class OutputLock {
public:
    explicit OutputLock(const fs::path& output_dir);
    ~OutputLock();
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    fs::path lock_path_;
};

}  // namespace assocnet
