// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "assocnet/bias.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "assocnet/error.hpp"
#include "assocnet/text.hpp"

namespace assocnet {

namespace {

void require_normalized(const ActivationMatrix& m, const char* who) {
    if (m.normalization == Normalization::raw) {
        throw DataError(std::string(who) + ": activation matrix must be normalized first");
    }
}

Eigen::Index require_column(const ActivationMatrix& m, const std::string& prime) {
    const auto c = m.column_of(prime);
    if (!c) throw DataError("missing prime: '" + prime + "' has no column in the activation matrix");
    return *c;
}

// All-zero difference sets carry no signal; report them as a null result
// instead of failing the whole report.
stats::TestResult wilcoxon_or_null(const std::vector<double>& d) {
    if (!d.empty() && std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) {
        stats::TestResult r;
        r.z_value = 0.0;
        r.method = "wilcoxon_signed_rank_all_zero";
        return r;
    }
    return stats::wilcoxon_signed_rank(d);
}

PairedDifferenceSet differences_for(const ActivationMatrix& m, const std::string& label,
                                    const std::vector<PrimePair>& pairs, const std::vector<std::string>& targets,
                                    bool reversed) {
    PairedDifferenceSet set;
    set.label = label;
    std::vector<std::pair<std::string, Eigen::Index>> present;
    for (const auto& t : targets) {
        if (const auto row = m.row_of(t)) {
            present.emplace_back(t, *row);
        } else {
            set.missing_targets.push_back(t);
        }
    }
    for (const auto& pair : pairs) {
        const auto a = require_column(m, pair.first);
        const auto b = require_column(m, pair.second);
        for (const auto& [t, row] : present) {
            const double diff = m.values(row, a) - m.values(row, b);
            set.differences.push_back(reversed ? -diff : diff);
            set.provenance.emplace_back(pair, t);
        }
    }
    return set;
}

}  // namespace

Norm default_norm(Approach approach) { return approach == Approach::emotions ? Norm::l1 : Norm::l2; }

std::pair<PairedDifferenceSet, PairedDifferenceSet> stereotype_differences(const ActivationMatrix& m,
                                                                           const PrimeSpec& spec) {
    if (spec.approach != Approach::stereotypes || spec.targets.size() != 2) {
        throw DataError("stereotype bias needs a stereotypes prime spec with two target sets");
    }
    auto first = differences_for(m, spec.targets[0].name, spec.pairs, spec.targets[0].words, false);
    auto second = differences_for(m, spec.targets[1].name, spec.pairs, spec.targets[1].words, true);
    return {std::move(first), std::move(second)};
}

PairedDifferenceSet emotion_differences(const ActivationMatrix& m, const PrimePair& pair, const Lexicon& lex,
                                        Emotion emotion) {
    const auto& words = lex.emotion_words(emotion);
    std::vector<std::string> targets(words.begin(), words.end());
    auto set = differences_for(m, std::string(to_string(emotion)), {pair}, targets, false);
    // lexicon sets are large; only report how many were missing
    set.missing_targets.clear();
    return set;
}

BiasReport stereotype_bias(const ActivationMatrix& m, const PrimeSpec& spec) {
    require_normalized(m, "stereotype bias");
    spec.validate();
    if (spec.approach != Approach::stereotypes) throw DataError("stereotype bias: spec approach is not stereotypes");

    BiasReport report;
    report.identity = spec.identity;
    report.approach = Approach::stereotypes;
    report.normalization = m.normalization;
    if (m.normalization != Normalization::l2_col_row) {
        report.warnings.push_back("stereotypes approach evaluated on " + to_string(m.normalization) +
                                  " matrix; the default is l2_col_row");
    }

    for (const auto& p : spec.all_primes()) require_column(m, p);
    const auto [first, second] = stereotype_differences(m, spec);
    const PairedDifferenceSet* sets[] = {&first, &second};
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& set = *sets[i];
        if (set.differences.empty()) {
            throw DataError("stereotype bias: no target of set '" + set.label + "' is a node of the network");
        }
        for (const auto& t : set.missing_targets) {
            report.warnings.push_back("target '" + t + "' of set '" + set.label + "' is not in the network");
        }
        LabeledResult lr;
        lr.label = set.label;
        lr.result = wilcoxon_or_null(set.differences);
        lr.targets_missing = set.missing_targets.size();
        lr.targets_used = spec.targets[i].words.size() - lr.targets_missing;
        report.results.push_back(std::move(lr));
    }

    std::vector<HeatmapCell> cells;
    for (const auto& set : spec.targets) {
        for (const auto& t : set.words) {
            const auto row = m.row_of(t);
            if (!row) continue;
            for (const auto& p : spec.all_primes()) cells.push_back({t, p, m.values(*row, *m.column_of(p))});
        }
    }
    report.matrix_slice = std::move(cells);
    return report;
}

BiasReport valence_bias(const ActivationMatrix& m, const PrimeSpec& spec, const Lexicon& lex) {
    require_normalized(m, "valence bias");
    spec.validate();
    if (spec.approach != Approach::valence) throw DataError("valence bias: spec approach is not valence");

    BiasReport report;
    report.identity = spec.identity;
    report.approach = Approach::valence;
    report.normalization = m.normalization;

    std::vector<Eigen::Index> cols;
    for (const auto& p : spec.primes) cols.push_back(require_column(m, p));

    std::vector<Eigen::Index> rows;
    std::vector<double> scores;
    for (std::size_t r = 0; r < m.node_labels.size(); ++r) {
        if (const auto v = lex.valence_of(m.node_labels[r])) {
            rows.push_back(static_cast<Eigen::Index>(r));
            scores.push_back(*v);
        }
    }
    const std::size_t needed = spec.primes.size() + 2;
    if (rows.size() < needed) {
        throw DataError("valence bias: " + std::to_string(rows.size()) + " rated nodes, need at least " +
                        std::to_string(needed));
    }
    report.observations = rows.size();

    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(cols.size());
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(scores.data(), n);
    Eigen::MatrixXd x(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = 0; c < k; ++c) x(i, c) = m.values(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(c)]);
    }

    const auto multi = stats::ols_fit(y, x, spec.primes);
    std::vector<int> slopes(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) slopes[static_cast<std::size_t>(c)] = c + 1;

    std::vector<CoefficientRow> table;
    for (Eigen::Index c = 0; c < k; ++c) {
        const auto uni = stats::ols_fit(y, x.col(c), {spec.primes[static_cast<std::size_t>(c)]});
        CoefficientRow row;
        row.prime = spec.primes[static_cast<std::size_t>(c)];
        row.coefficient = uni.coefficients(1);
        row.std_error = uni.standard_errors()(1);
        row.p_value = uni.p_values()(1);
        row.multivariate_coefficient = multi.coefficients(c + 1);
        table.push_back(std::move(row));
    }
    report.coefficients = std::move(table);

    LabeledResult lr;
    lr.label = "wald_equal_coefficients";
    lr.result = stats::wald_equal_coefficients(multi, slopes);
    report.results.push_back(std::move(lr));
    return report;
}

BiasReport emotion_bias(const ActivationMatrix& m, const PrimeSpec& spec, const Lexicon& lex) {
    require_normalized(m, "emotion bias");
    spec.validate();
    if (spec.approach != Approach::emotions) throw DataError("emotion bias: spec approach is not emotions");

    BiasReport report;
    report.identity = spec.identity;
    report.approach = Approach::emotions;
    report.normalization = m.normalization;
    if (m.normalization != Normalization::l1_col_row) {
        report.warnings.push_back("emotions approach evaluated on " + to_string(m.normalization) +
                                  " matrix; the default is l1_col_row");
    }

    const auto& pair = spec.pairs.front();
    require_column(m, pair.first);
    require_column(m, pair.second);

    for (Emotion e : kAllEmotions) {
        const auto set = emotion_differences(m, pair, lex, e);
        if (set.differences.empty()) {
            throw DataError("emotion bias: no '" + std::string(to_string(e)) + "' word of the lexicon is in the network");
        }
        LabeledResult lr;
        lr.label = std::string(to_string(e));
        lr.result = wilcoxon_or_null(set.differences);
        lr.targets_used = set.differences.size();
        lr.targets_missing = lex.emotion_words(e).size() - set.differences.size();
        report.results.push_back(std::move(lr));
    }
    return report;
}

BiasReport evaluate_bias(const ActivationMatrix& m, const PrimeSpec& spec, const Lexicon* lex) {
    switch (spec.approach) {
        case Approach::stereotypes: return stereotype_bias(m, spec);
        case Approach::valence:
            if (!lex) throw ConfigError("valence approach needs a valence lexicon");
            return valence_bias(m, spec, *lex);
        case Approach::emotions:
            if (!lex) throw ConfigError("emotions approach needs an emotion lexicon");
            return emotion_bias(m, spec, *lex);
    }
    throw DataError("unknown approach");
}

// ---------------------------------------------------------------------------

std::string report_to_json(const BiasReport& report) {
    using nlohmann::json;
    json doc;
    doc["identity"] = report.identity;
    doc["approach"] = std::string(to_string(report.approach));
    doc["normalization"] = to_string(report.normalization);
    json results = json::array();
    for (const auto& lr : report.results) {
        json r;
        r["label"] = lr.label;
        r["method"] = lr.result.method;
        r["statistic"] = lr.result.statistic;
        r["z_value"] = lr.result.z_value ? json(*lr.result.z_value) : json(nullptr);
        r["p_value"] = lr.result.p_value;
        r["effect_size"] = lr.result.effect_size;
        r["n"] = lr.result.n;
        r["df"] = lr.result.df ? json(*lr.result.df) : json(nullptr);
        r["significance"] = stats::significance_stars(lr.result.p_value);
        if (report.approach != Approach::valence) {
            r["targets_used"] = lr.targets_used;
            r["targets_missing"] = lr.targets_missing;
        }
        results.push_back(std::move(r));
    }
    doc["results"] = std::move(results);
    if (report.coefficients) {
        json coeffs = json::array();
        for (const auto& c : *report.coefficients) {
            coeffs.push_back({{"prime", c.prime},
                              {"coefficient", c.coefficient},
                              {"std_error", c.std_error},
                              {"p_value", c.p_value},
                              {"significance", stats::significance_stars(c.p_value)},
                              {"multivariate_coefficient", c.multivariate_coefficient}});
        }
        doc["coefficients"] = std::move(coeffs);
        doc["observations"] = report.observations;
    }
    if (report.matrix_slice) doc["heatmap_cells"] = report.matrix_slice->size();
    doc["warnings"] = report.warnings;
    return doc.dump(2) + "\n";
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string heatmap_csv(const std::vector<HeatmapCell>& cells) {
    std::ostringstream out;
    out << "target,prime,value\n";
    for (const auto& c : cells) out << csv_field(c.target) << ',' << csv_field(c.prime) << ',' << text::format_double(c.value) << '\n';
    return out.str();
}

std::string coefficients_csv(const std::vector<CoefficientRow>& rows) {
    std::ostringstream out;
    out << "prime,coefficient,std_error,p_value,multivariate_coefficient\n";
    for (const auto& r : rows) {
        out << csv_field(r.prime) << ',' << text::format_double(r.coefficient) << ',' << text::format_double(r.std_error) << ','
            << text::format_double(r.p_value) << ',' << text::format_double(r.multivariate_coefficient) << '\n';
    }
    return out.str();
}

}  // namespace assocnet
