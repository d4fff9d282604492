// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace assocnet {

/// One cue -> response association with its frequency.
struct NormRecord {
    std::string cue;
    std::string response;
    std::int64_t count = 0;

    friend bool operator==(const NormRecord&, const NormRecord&) = default;
};

enum class NormFormat {
    trial,       // cue R1 R2 R3, "NA" for a missing response
    aggregated,  // cue response count
};

std::optional<NormFormat> parse_norm_format(std::string_view name);

/// Reads free-association norms. Trial rows are expanded to one record per
/// response and summed per (cue, response); the result is sorted by key.
/// Aggregated rows are returned in file order without merging.
std::vector<NormRecord> parse_trials(std::istream& in, NormFormat format);

/// Canonical aggregated form, the inverse of parse_trials(.., aggregated).
void write_aggregated(std::ostream& out, const std::vector<NormRecord>& records);

/// One word per line (first TAB column), normalized. Blank lines and lines
/// starting with '#' are skipped.
std::unordered_set<std::string> load_vocabulary(std::istream& in);

// ---------------------------------------------------------------------------
// Lexicons

/// Plutchik's eight basic emotions, in the NRC lexicon's alphabetical order.
enum class Emotion { anger, anticipation, disgust, fear, joy, sadness, surprise, trust };

inline constexpr std::array<Emotion, 8> kAllEmotions = {
    Emotion::anger, Emotion::anticipation, Emotion::disgust, Emotion::fear,
    Emotion::joy,   Emotion::sadness,      Emotion::surprise, Emotion::trust};

std::string_view to_string(Emotion e);
std::optional<Emotion> parse_emotion(std::string_view name);

struct Lexicon {
    std::unordered_map<std::string, double> valence;
    std::map<Emotion, std::set<std::string>> emotions;

    std::optional<double> valence_of(const std::string& word) const;
    const std::set<std::string>& emotion_words(Emotion e) const;
};

/// `word<TAB>valence[<TAB>...]`. Extra columns (arousal, dominance) are ignored.
/// A first row whose first cell is "word" is treated as a header.
void load_valence(std::istream& in, Lexicon& lex);

/// NRC word-level format `word<TAB>emotion<TAB>flag`. The NRC sentiment rows
/// ("positive", "negative") are skipped.
void load_emotions(std::istream& in, Lexicon& lex);

Lexicon load_lexicons(std::istream& valence_in, std::istream& emotion_in);

// ---------------------------------------------------------------------------
// Prime specifications

enum class Approach { stereotypes, valence, emotions };

std::string_view to_string(Approach a);
std::optional<Approach> parse_approach(std::string_view name);

struct PrimePair {
    std::string first;
    std::string second;

    friend bool operator==(const PrimePair&, const PrimePair&) = default;
};

struct TargetSet {
    std::string name;
    std::vector<std::string> words;
};

/// Which primes to activate for a social identity and how to score them.
/// For stereotypes, targets[0] is the set consistent with the first prime of
/// every pair and targets[1] with the second.
struct PrimeSpec {
    std::string identity;
    Approach approach = Approach::stereotypes;
    std::vector<PrimePair> pairs;
    std::vector<std::string> primes;
    std::vector<TargetSet> targets;

    /// Every prime word, de-duplicated, in order of first appearance.
    std::vector<std::string> all_primes() const;

    /// Throws DataError when the approach-specific shape rules are violated.
    void validate() const;
};

/// JSON document:
///   {"identity": "gender", "approach": "stereotypes",
///    "prime_pairs": [["woman", "man"], ...],
///    "targets": {"female": [...], "male": [...]}}
/// Valence specs use "primes": [...] instead of pairs and carry no targets.
/// Target sets keep document order.
PrimeSpec load_prime_spec(std::istream& in);

std::string prime_spec_to_json(const PrimeSpec& spec);

}  // namespace assocnet
