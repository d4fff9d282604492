// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "assocnet/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "assocnet/error.hpp"
#include "assocnet/text.hpp"

namespace assocnet {

namespace {

template <typename F>
auto staged(std::string_view stage, F&& f) -> decltype(f()) {
    const std::string tag = "[" + std::string(stage) + "] ";
    try {
        return f();
    } catch (const Error& e) {
        throw_error(e.kind(), tag + e.what());
    } catch (const std::exception& e) {
        throw ComputationError(tag + e.what());
    }
}

std::string safe_name(std::string_view s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
        out += ok ? c : '_';
    }
    return out.empty() ? "_" : out;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
    auto in = open_input(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const fs::path& path, std::string_view contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::vector<NormRecord> read_norms_file(const fs::path& path, NormFormat format) {
    auto in = open_input(path);
    return parse_trials(in, format);
}

Lexicon read_lexicon_files(const std::optional<fs::path>& valence, const std::optional<fs::path>& emotions) {
    Lexicon lex;
    if (valence) {
        auto in = open_input(*valence);
        load_valence(in, lex);
    }
    if (emotions) {
        auto in = open_input(*emotions);
        load_emotions(in, lex);
    }
    return lex;
}

PrimeSpec read_prime_spec_file(const fs::path& path) {
    auto in = open_input(path);
    return load_prime_spec(in);
}

AssociationNetwork read_network_file(const fs::path& path) {
    auto in = open_input(path);
    return read_network(in);
}

ActivationMatrix read_matrix_files(const fs::path& tsv) {
    auto in = open_input(tsv);
    auto m = read_matrix(in);
    auto sidecar = tsv;
    sidecar.replace_extension(".json");
    if (fs::exists(sidecar)) apply_matrix_sidecar(read_text_file(sidecar), m);
    return m;
}

// ---------------------------------------------------------------------------

NetworkStats write_stats_stage(const fs::path& dir, const AssociationNetwork& net, DiameterMethod method) {
    const auto stats = network_stats(net, method);
    write_text_file(dir / "stats.json", stats_to_json(stats));
    return stats;
}

NetworkStats write_build_stage(const fs::path& dir, const AssociationNetwork& net, DiameterMethod method) {
    std::ostringstream edges;
    write_network(edges, net);
    write_text_file(dir / "network.tsv", edges.str());
    return write_stats_stage(dir, net, method);
}

SpreadParams resolve_spread_params(const AssociationNetwork& net, int diameter, const SpreadOverrides& overrides) {
    auto params = SpreadParams::defaults_for(net, diameter);
    if (overrides.retention) params.retention = *overrides.retention;
    if (overrides.steps) params.steps = *overrides.steps;
    if (overrides.initial_activation) params.initial_activation = *overrides.initial_activation;
    params.validate();
    return params;
}

void write_spread_stage(const fs::path& dir, const ActivationMatrix& raw) {
    std::ostringstream tsv;
    write_matrix(tsv, raw);
    write_text_file(dir / "matrix_raw.tsv", tsv.str());
    write_text_file(dir / "matrix_raw.json", matrix_sidecar_json(raw));
}

BiasReport write_bias_stage(const fs::path& dir, const ActivationMatrix& raw, const PrimeSpec& spec,
                            const Lexicon* lex, Norm norm) {
    // the matrix is restricted to this identity's primes before row normalization
    const auto primes = spec.all_primes();
    ActivationMatrix own = raw;
    own.prime_labels = primes;
    own.values.resize(raw.values.rows(), static_cast<Eigen::Index>(primes.size()));
    for (std::size_t k = 0; k < primes.size(); ++k) {
        const auto c = raw.column_of(primes[k]);
        if (!c) throw DataError("missing prime: '" + primes[k] + "' has no column in the activation matrix");
        own.values.col(static_cast<Eigen::Index>(k)) = raw.values.col(*c);
    }

    const auto normalized = normalize_matrix(own, norm);
    const auto report = evaluate_bias(normalized, spec, lex);

    const std::string suffix = to_string(norm);
    std::ostringstream tsv;
    write_matrix(tsv, normalized);
    write_text_file(dir / ("matrix_" + suffix + ".tsv"), tsv.str());
    write_text_file(dir / ("matrix_" + suffix + ".json"), matrix_sidecar_json(normalized));
    write_text_file(dir / ("report_" + suffix + ".json"), report_to_json(report));
    if (report.matrix_slice) write_text_file(dir / ("heatmap_" + suffix + ".csv"), heatmap_csv(*report.matrix_slice));
    if (report.coefficients) {
        write_text_file(dir / ("coefficients_" + suffix + ".csv"), coefficients_csv(*report.coefficients));
    }
    return report;
}

MindsetStream write_stream_stage(const fs::path& dir, const AssociationNetwork& net, const StreamRequest& request,
                                 CostMode mode, int max_paths, const Lexicon& lex) {
    auto stream = extract_stream(net, request.prime, request.target, mode, max_paths);
    const std::string stem = safe_name(request.prime) + "--" + safe_name(request.target);
    write_text_file(dir / (stem + ".dot"), render_dot(stream, lex));
    write_text_file(dir / (stem + ".json"), stream_to_json(stream, lex));
    return stream;
}

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
    auto require_file = [](const fs::path& p, const char* what) {
        if (p.empty()) throw ConfigError(std::string(what) + " path is not set");
        if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " '" + p.string() + "' does not exist");
    };
    require_file(association_norms, "association norms");
    if (vocabulary) require_file(*vocabulary, "vocabulary");
    if (valence_lexicon) require_file(*valence_lexicon, "valence lexicon");
    if (emotion_lexicon) require_file(*emotion_lexicon, "emotion lexicon");
    for (const auto& p : prime_specs) require_file(p, "prime spec");
    if (min_weight < 1) throw ConfigError("min_weight must be >= 1");
    if (max_paths < 1) throw ConfigError("max_paths must be >= 1");
    if (spread.retention && !(*spread.retention >= 0.0 && *spread.retention <= 1.0)) {
        throw ConfigError("retention must lie in [0, 1]");
    }
    if (spread.steps && *spread.steps < 1) throw ConfigError("steps must be >= 1");
    if (spread.initial_activation && !(*spread.initial_activation > 0.0)) {
        throw ConfigError("initial activation must be positive");
    }
    if (output_dir.empty()) throw ConfigError("output directory is not set");
    const auto parent = fs::absolute(output_dir).parent_path();
    if (!fs::is_directory(parent)) throw ConfigError("parent of output directory '" + parent.string() + "' does not exist");
    if (access(parent.c_str(), W_OK) != 0) throw ConfigError("output location '" + parent.string() + "' is not writable");
}

fs::path RunConfig::resolved_cache_dir() const {
    if (cache_dir) return *cache_dir;
    auto p = fs::absolute(output_dir).lexically_normal();
    if (!p.has_filename()) p = p.parent_path();
    return p.parent_path() / (p.filename().string() + ".cache");
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("run config: top level must be an object");

    static const std::set<std::string> known = {
        "association_norms", "norms_format", "vocabulary", "valence_lexicon", "emotion_lexicon", "prime_specs",
        "min_weight", "diameter_method", "spread", "normalization", "compare_norms", "streams", "stream_cost_mode",
        "max_paths", "output_dir", "cache", "cache_dir", "threads"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) throw ConfigError("run config: unknown key '" + key + "'");
    }

    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        return path.is_absolute() ? path : (base_dir / path).lexically_normal();
    };

    RunConfig cfg;
    try {
        cfg.association_norms = resolve(doc.at("association_norms").get<std::string>());
        if (doc.contains("norms_format")) {
            const auto f = parse_norm_format(doc["norms_format"].get<std::string>());
            if (!f) throw ConfigError("run config: norms_format must be 'trial' or 'aggregated'");
            cfg.norms_format = *f;
        }
        if (doc.contains("vocabulary")) cfg.vocabulary = resolve(doc["vocabulary"].get<std::string>());
        if (doc.contains("valence_lexicon")) cfg.valence_lexicon = resolve(doc["valence_lexicon"].get<std::string>());
        if (doc.contains("emotion_lexicon")) cfg.emotion_lexicon = resolve(doc["emotion_lexicon"].get<std::string>());
        if (doc.contains("prime_specs")) {
            for (const auto& p : doc["prime_specs"]) cfg.prime_specs.push_back(resolve(p.get<std::string>()));
        }
        if (doc.contains("min_weight")) cfg.min_weight = doc["min_weight"].get<Weight>();
        if (doc.contains("diameter_method")) {
            const auto m = doc["diameter_method"].get<std::string>();
            if (m == "exact") {
                cfg.diameter_method = DiameterMethod::exact;
            } else if (m == "double_sweep_lower_bound") {
                cfg.diameter_method = DiameterMethod::double_sweep_lower_bound;
            } else {
                throw ConfigError("run config: unknown diameter_method '" + m + "'");
            }
        }
        if (doc.contains("spread")) {
            const auto& s = doc["spread"];
            if (s.contains("retention") && !s["retention"].is_null()) cfg.spread.retention = s["retention"].get<double>();
            if (s.contains("steps") && !s["steps"].is_null()) cfg.spread.steps = s["steps"].get<int>();
            if (s.contains("initial_activation") && !s["initial_activation"].is_null()) {
                cfg.spread.initial_activation = s["initial_activation"].get<double>();
            }
        }
        if (doc.contains("normalization")) {
            for (const auto& [name, value] : doc["normalization"].items()) {
                const auto approach = parse_approach(name);
                const auto norm = parse_norm(value.get<std::string>());
                if (!approach || !norm) throw ConfigError("run config: bad normalization entry '" + name + "'");
                cfg.normalization[*approach] = *norm;
            }
        }
        if (doc.contains("compare_norms")) cfg.compare_norms = doc["compare_norms"].get<bool>();
        if (doc.contains("streams")) {
            for (const auto& s : doc["streams"]) {
                cfg.streams.push_back({text::normalize_token(s.at("prime").get<std::string>()),
                                       text::normalize_token(s.at("target").get<std::string>())});
            }
        }
        if (doc.contains("stream_cost_mode")) {
            const auto mode = parse_cost_mode(doc["stream_cost_mode"].get<std::string>());
            if (!mode) throw ConfigError("run config: stream_cost_mode must be 'inverse_weight' or 'unit'");
            cfg.stream_cost_mode = *mode;
        }
        if (doc.contains("max_paths")) cfg.max_paths = doc["max_paths"].get<int>();
        cfg.output_dir = resolve(doc.at("output_dir").get<std::string>());
        if (doc.contains("cache")) cfg.cache = doc["cache"].get<bool>();
        if (doc.contains("cache_dir")) cfg.cache_dir = resolve(doc["cache_dir"].get<std::string>());
        if (doc.contains("threads")) cfg.threads = doc["threads"].get<unsigned>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw ConfigError("config '" + path.string() + "' does not exist");
    return parse_run_config(read_text_file(path), fs::absolute(path).parent_path());
}

// ---------------------------------------------------------------------------

OutputLock::OutputLock(const fs::path& output_dir) {
    auto p = fs::absolute(output_dir).lexically_normal();
    if (!p.has_filename()) p = p.parent_path();
    lock_path_ = p.parent_path() / (p.filename().string() + ".lock");
    std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
    if (!f) throw ConfigError("output directory '" + p.string() + "' is locked by another run (" + lock_path_.string() + ")");
    std::fprintf(f, "%ld\n", static_cast<long>(getpid()));
    std::fclose(f);
}

OutputLock::~OutputLock() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
}

namespace {

class Cache {
public:
    Cache(fs::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {
        if (enabled_) fs::create_directories(dir_);
    }

    std::optional<fs::path> find(const std::string& name) const {
        if (!enabled_) return std::nullopt;
        const auto p = dir_ / name;
        if (fs::is_regular_file(p)) return p;
        return std::nullopt;
    }

    void store(const std::string& name, std::string_view contents) const {
        if (!enabled_) return;
        const auto tmp = dir_ / (name + ".tmp-" + std::to_string(getpid()));
        write_text_file(tmp, contents);
        fs::rename(tmp, dir_ / name);
    }

private:
    fs::path dir_;
    bool enabled_;
};

class StageTimer {
public:
    StageTimer(const RunLog& log, std::string stage)
        : log_(log), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        if (!log_) return;
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
        log_("[" + stage_ + "] done in " + std::to_string(ms.count()) + " ms");
    }
    void note(const std::string& msg) const {
        if (log_) log_("[" + stage_ + "] " + msg);
    }

private:
    const RunLog& log_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

void promote(const fs::path& staging, const fs::path& output) {
    const auto old = output.parent_path() / ("." + output.filename().string() + ".old-" + std::to_string(getpid()));
    if (fs::exists(output)) fs::rename(output, old);
    fs::rename(staging, output);
    std::error_code ec;
    fs::remove_all(old, ec);
}

}  // namespace

void run_pipeline(const RunConfig& config, const RunLog& log) {
    staged("config", [&] { config.validate(); });

    auto output = fs::absolute(config.output_dir).lexically_normal();
    if (!output.has_filename()) output = output.parent_path();
    OutputLock lock(output);
    const auto staging = output.parent_path() / ("." + output.filename().string() + ".staging-" + std::to_string(getpid()));
    fs::remove_all(staging);
    fs::create_directories(staging);

    try {
        const Cache cache(config.resolved_cache_dir(), config.cache);
        nlohmann::json manifest;

        // ingest
        std::vector<NormRecord> records;
        std::optional<std::unordered_set<std::string>> vocab;
        Lexicon lex;
        std::vector<PrimeSpec> specs;
        std::string network_key;
        staged("ingest", [&] {
            StageTimer t(log, "ingest");
            const auto norms_text = read_text_file(config.association_norms);
            text::Fnv1a h;
            h.update(norms_text).update(static_cast<std::int64_t>(config.norms_format));
            std::istringstream norms_in(norms_text);
            records = parse_trials(norms_in, config.norms_format);
            if (config.vocabulary) {
                const auto vocab_text = read_text_file(*config.vocabulary);
                h.update(vocab_text);
                std::istringstream vin(vocab_text);
                vocab = load_vocabulary(vin);
            } else {
                h.update(std::string_view("<no vocabulary>"));
            }
            h.update(static_cast<std::int64_t>(config.min_weight))
                .update(static_cast<std::int64_t>(config.diameter_method));
            network_key = h.hex();
            lex = read_lexicon_files(config.valence_lexicon, config.emotion_lexicon);
            std::set<std::string> identities;
            for (const auto& p : config.prime_specs) {
                specs.push_back(read_prime_spec_file(p));
                if (!identities.insert(safe_name(specs.back().identity)).second) {
                    throw ConfigError("duplicate identity '" + specs.back().identity + "'");
                }
            }
            t.note(std::to_string(records.size()) + " records, " + std::to_string(specs.size()) + " prime specs");
        });

        // build
        AssociationNetwork net;
        NetworkStats stats;
        staged("build", [&] {
            StageTimer t(log, "build");
            const auto net_file = "network-" + network_key + ".tsv";
            const auto stats_file = "network-" + network_key + ".stats.json";
            const auto cached_net = cache.find(net_file);
            const auto cached_stats = cache.find(stats_file);
            if (cached_net && cached_stats) {
                net = read_network_file(*cached_net);
                stats = stats_from_json(read_text_file(*cached_stats));
                write_text_file(staging / "network.tsv", read_text_file(*cached_net));
                write_text_file(staging / "stats.json", stats_to_json(stats));
                t.note("cache hit " + network_key);
            } else {
                net = build_network(records, vocab ? &*vocab : nullptr, config.min_weight);
                stats = write_build_stage(staging, net, config.diameter_method);
                cache.store(net_file, read_text_file(staging / "network.tsv"));
                cache.store(stats_file, stats_to_json(stats));
            }
            t.note(std::to_string(stats.node_count) + " nodes, " + std::to_string(stats.edge_count) + " edges, diameter " +
                   std::to_string(stats.diameter));
        });
        manifest["network"] = {{"edges", "network.tsv"}, {"stats", "stats.json"}};

        const auto params = staged("spread", [&] { return resolve_spread_params(net, stats.diameter, config.spread); });
        manifest["spread"] = {{"retention", params.retention},
                              {"steps", params.steps},
                              {"initial_activation", params.initial_activation},
                              {"diameter", stats.diameter}};

        nlohmann::json identities = nlohmann::json::object();
        for (const auto& spec : specs) {
            const auto dir_name = safe_name(spec.identity);
            const auto dir = staging / dir_name;
            const auto primes = spec.all_primes();

            const auto raw = staged("spread", [&] {
                StageTimer t(log, "spread:" + spec.identity);
                text::Fnv1a h;
                h.update(network_key).update(params.retention).update(static_cast<std::int64_t>(params.steps))
                    .update(params.initial_activation);
                for (const auto& p : primes) h.update(p);
                const auto key = "matrix-" + h.hex();
                if (const auto hit = cache.find(key + ".tsv"); hit && cache.find(key + ".json")) {
                    t.note("cache hit " + key);
                    auto m = read_matrix_files(*hit);
                    if (m.node_labels != net.labels()) throw DataError("cached matrix rows do not match the network");
                    write_spread_stage(dir, m);
                    return m;
                }
                auto m = spread_batch(net, primes, params, config.threads);
                write_spread_stage(dir, m);
                cache.store(key + ".tsv", read_text_file(dir / "matrix_raw.tsv"));
                cache.store(key + ".json", read_text_file(dir / "matrix_raw.json"));
                return m;
            });

            const Norm primary = config.normalization.at(spec.approach);
            std::vector<Norm> norms{primary};
            // L1 rows sum to one, which makes the valence design collinear with the intercept
            const bool singular_alternative = spec.approach == Approach::valence && primary == Norm::l2;
            if (config.compare_norms && !singular_alternative) norms.push_back(primary == Norm::l1 ? Norm::l2 : Norm::l1);
            nlohmann::json reports = nlohmann::json::object();
            staged("bias", [&] {
                for (Norm norm : norms) {
                    StageTimer t(log, "bias:" + spec.identity + ":" + to_string(norm));
                    write_bias_stage(dir, raw, spec, &lex, norm);
                    reports[to_string(norm)] = dir_name + "/report_" + to_string(norm) + ".json";
                }
            });
            identities[spec.identity] = {{"approach", std::string(to_string(spec.approach))},
                                         {"directory", dir_name},
                                         {"primary_norm", to_string(primary)},
                                         {"reports", reports}};
        }
        manifest["identities"] = identities;

        nlohmann::json streams = nlohmann::json::array();
        staged("stream", [&] {
            for (const auto& req : config.streams) {
                StageTimer t(log, "stream:" + req.prime + "--" + req.target);
                const auto s = write_stream_stage(staging / "streams", net, req, config.stream_cost_mode, config.max_paths, lex);
                streams.push_back({{"prime", req.prime},
                                   {"target", req.target},
                                   {"dot", "streams/" + safe_name(req.prime) + "--" + safe_name(req.target) + ".dot"},
                                   {"paths", s.paths.size()},
                                   {"hop_length", s.hop_length()}});
            }
        });
        manifest["streams"] = streams;

        write_text_file(staging / "manifest.json", manifest.dump(2) + "\n");
        promote(staging, output);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
}

}  // namespace assocnet
