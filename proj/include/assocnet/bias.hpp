// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "assocnet/activation.hpp"
#include "assocnet/ingest.hpp"
#include "assocnet/stats.hpp"

namespace assocnet {

/// Differences aligned with the (prime pair, target) that produced each one.
struct PairedDifferenceSet {
    std::string label;
    std::vector<double> differences;
    std::vector<std::pair<PrimePair, std::string>> provenance;
    std::vector<std::string> missing_targets;
};

struct LabeledResult {
    std::string label;
    stats::TestResult result;
    std::size_t targets_used = 0;
    std::size_t targets_missing = 0;
};

struct CoefficientRow {
    std::string prime;
    double coefficient = 0.0;  // slope of the univariate fit
    double std_error = 0.0;
    double p_value = 1.0;
    double multivariate_coefficient = 0.0;
};

struct HeatmapCell {
    std::string target;
    std::string prime;
    double value = 0.0;
};

struct BiasReport {
    std::string identity;
    Approach approach = Approach::stereotypes;
    Normalization normalization = Normalization::raw;
    std::vector<LabeledResult> results;
    std::optional<std::vector<CoefficientRow>> coefficients;  // valence only
    std::optional<std::vector<HeatmapCell>> matrix_slice;     // stereotypes only
    std::size_t observations = 0;                             // valence: rated nodes used
    std::vector<std::string> warnings;
};

/// Diff for set 0 is AL(first) - AL(second) over its targets, for set 1 the
/// reverse, so positive values always mean stereotype-consistent.
std::pair<PairedDifferenceSet, PairedDifferenceSet> stereotype_differences(const ActivationMatrix& m,
                                                                           const PrimeSpec& spec);

/// AL(first) - AL(second) over the emotion's lexicon words present in `m`.
PairedDifferenceSet emotion_differences(const ActivationMatrix& m, const PrimePair& pair,
                                        const Lexicon& lex, Emotion emotion);

BiasReport stereotype_bias(const ActivationMatrix& m, const PrimeSpec& spec);
BiasReport valence_bias(const ActivationMatrix& m, const PrimeSpec& spec, const Lexicon& lex);
BiasReport emotion_bias(const ActivationMatrix& m, const PrimeSpec& spec, const Lexicon& lex);

/// Dispatches on spec.approach; `lex` may be null for stereotypes.
BiasReport evaluate_bias(const ActivationMatrix& m, const PrimeSpec& spec, const Lexicon* lex);

/// Default column-then-row norm for an approach: L2, L2, L1.
Norm default_norm(Approach approach);

std::string report_to_json(const BiasReport& report);
/// `target,prime,value` long format.
std::string heatmap_csv(const std::vector<HeatmapCell>& cells);
std::string coefficients_csv(const std::vector<CoefficientRow>& rows);

}  // namespace assocnet
