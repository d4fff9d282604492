// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "assocnet/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "assocnet/error.hpp"
#include "assocnet/text.hpp"

namespace assocnet {

namespace {

std::string checked_token(std::string_view raw, std::size_t line, const char* what) {
    std::string token = text::normalize_token(raw);
    if (token.empty()) throw ParseError(line, std::string("empty ") + what);
    if (token.find('\n') != std::string::npos) throw ParseError(line, std::string("newline in ") + what);
    return token;
}

bool is_header(std::string_view first_cell, std::string_view expected) {
    return text::lower(text::trim(first_cell)) == expected;
}

}  // namespace

std::optional<NormFormat> parse_norm_format(std::string_view name) {
    if (name == "trial") return NormFormat::trial;
    if (name == "aggregated") return NormFormat::aggregated;
    return std::nullopt;
}

std::vector<NormRecord> parse_trials(std::istream& in, NormFormat format) {
    const std::size_t columns = format == NormFormat::trial ? 4 : 3;
    std::map<std::pair<std::string, std::string>, std::int64_t> merged;
    std::vector<NormRecord> passthrough;

    std::string line;
    std::size_t line_no = 0;
    bool seen_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto cells = text::split_tabs(line);
        if (!seen_row) {
            seen_row = true;
            if (text::trim(cells.front()) == "cue") continue;
        }
        if (cells.size() != columns) {
            throw ParseError(line_no, "expected " + std::to_string(columns) + " TAB-separated columns, got " +
                                          std::to_string(cells.size()));
        }
        std::string cue = checked_token(cells[0], line_no, "cue");

        if (format == NormFormat::trial) {
            for (std::size_t c = 1; c < cells.size(); ++c) {
                if (text::trim(cells[c]) == "NA") continue;
                merged[{cue, checked_token(cells[c], line_no, "response")}] += 1;
            }
        } else {
            std::string response = checked_token(cells[1], line_no, "response");
            std::int64_t count = 0;
            if (!text::parse_int64(cells[2], count)) {
                throw ParseError(line_no, "count is not an integer: '" + std::string(cells[2]) + "'");
            }
            if (count <= 0) throw ParseError(line_no, "count must be positive, got " + std::to_string(count));
            passthrough.push_back({std::move(cue), std::move(response), count});
        }
    }

    if (format == NormFormat::aggregated) return passthrough;
    std::vector<NormRecord> out;
    out.reserve(merged.size());
    for (auto& [key, count] : merged) out.push_back({key.first, key.second, count});
    return out;
}

void write_aggregated(std::ostream& out, const std::vector<NormRecord>& records) {
    for (const auto& r : records) out << r.cue << '\t' << r.response << '\t' << r.count << '\n';
}

std::unordered_set<std::string> load_vocabulary(std::istream& in) {
    std::unordered_set<std::string> vocab;
    std::string line;
    while (std::getline(in, line)) {
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto word = text::normalize_token(text::split_tabs(line).front());
        if (!word.empty()) vocab.insert(std::move(word));
    }
    return vocab;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Emotion e) {
    switch (e) {
        case Emotion::anger: return "anger";
        case Emotion::anticipation: return "anticipation";
        case Emotion::disgust: return "disgust";
        case Emotion::fear: return "fear";
        case Emotion::joy: return "joy";
        case Emotion::sadness: return "sadness";
        case Emotion::surprise: return "surprise";
        case Emotion::trust: return "trust";
    }
    return "unknown";
}

std::optional<Emotion> parse_emotion(std::string_view name) {
    for (Emotion e : kAllEmotions) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

std::optional<double> Lexicon::valence_of(const std::string& word) const {
    if (auto it = valence.find(word); it != valence.end()) return it->second;
    return std::nullopt;
}

const std::set<std::string>& Lexicon::emotion_words(Emotion e) const {
    static const std::set<std::string> empty;
    if (auto it = emotions.find(e); it != emotions.end()) return it->second;
    return empty;
}

void load_valence(std::istream& in, Lexicon& lex) {
    std::string line;
    std::size_t line_no = 0;
    bool seen_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto cells = text::split_tabs(line);
        if (!seen_row) {
            seen_row = true;
            if (is_header(cells.front(), "word")) continue;
        }
        if (cells.size() < 2) throw ParseError(line_no, "expected word<TAB>valence");
        std::string word = checked_token(cells[0], line_no, "word");
        double value = 0.0;
        if (!text::parse_double(cells[1], value)) {
            throw ParseError(line_no, "valence is not a number: '" + std::string(cells[1]) + "'");
        }
        if (!(value >= 0.0 && value <= 1.0)) {
            throw ParseError(line_no, "valence " + std::string(text::trim(cells[1])) + " outside [0, 1]");
        }
        if (!lex.valence.emplace(word, value).second) {
            throw ParseError(line_no, "duplicate valence entry for '" + word + "'");
        }
    }
}

void load_emotions(std::istream& in, Lexicon& lex) {
    std::string line;
    std::size_t line_no = 0;
    bool seen_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto cells = text::split_tabs(line);
        if (!seen_row) {
            seen_row = true;
            if (is_header(cells.front(), "word")) continue;
        }
        if (cells.size() != 3) throw ParseError(line_no, "expected word<TAB>emotion<TAB>flag");
        std::string word = checked_token(cells[0], line_no, "word");
        const std::string name = text::normalize_token(cells[1]);
        std::int64_t flag = 0;
        if (!text::parse_int64(cells[2], flag) || (flag != 0 && flag != 1)) {
            throw ParseError(line_no, "flag must be 0 or 1, got '" + std::string(cells[2]) + "'");
        }
        if (name == "positive" || name == "negative") continue;
        const auto emotion = parse_emotion(name);
        if (!emotion) throw ParseError(line_no, "unknown emotion '" + name + "'");
        auto& words = lex.emotions[*emotion];
        if (flag == 1) words.insert(std::move(word));
    }
}

Lexicon load_lexicons(std::istream& valence_in, std::istream& emotion_in) {
    Lexicon lex;
    load_valence(valence_in, lex);
    load_emotions(emotion_in, lex);
    return lex;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Approach a) {
    switch (a) {
        case Approach::stereotypes: return "stereotypes";
        case Approach::valence: return "valence";
        case Approach::emotions: return "emotions";
    }
    return "unknown";
}

std::optional<Approach> parse_approach(std::string_view name) {
    if (name == "stereotypes") return Approach::stereotypes;
    if (name == "valence") return Approach::valence;
    if (name == "emotions") return Approach::emotions;
    return std::nullopt;
}

std::vector<std::string> PrimeSpec::all_primes() const {
    std::vector<std::string> out;
    auto add = [&](const std::string& w) {
        if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    };
    for (const auto& p : pairs) {
        add(p.first);
        add(p.second);
    }
    for (const auto& p : primes) add(p);
    return out;
}

void PrimeSpec::validate() const {
    const std::string where = "prime spec '" + identity + "': ";
    if (identity.empty()) throw DataError("prime spec: missing identity");
    for (const auto& p : pairs) {
        if (p.first.empty() || p.second.empty()) throw DataError(where + "empty prime in pair");
        if (p.first == p.second) throw DataError(where + "pair (" + p.first + ", " + p.second + ") repeats a word");
    }
    switch (approach) {
        case Approach::stereotypes:
            if (pairs.empty()) throw DataError(where + "stereotypes approach needs at least one prime pair");
            if (!primes.empty()) throw DataError(where + "stereotypes approach takes prime_pairs, not primes");
            if (targets.size() != 2) {
                throw DataError(where + "stereotypes approach needs exactly two target sets, got " +
                                std::to_string(targets.size()));
            }
            for (const auto& t : targets) {
                if (t.words.empty()) throw DataError(where + "target set '" + t.name + "' is empty");
            }
            break;
        case Approach::valence:
            if (primes.size() < 3) {
                throw DataError(where + "valence approach needs at least 3 primes, got " +
                                std::to_string(primes.size()));
            }
            if (!pairs.empty()) throw DataError(where + "valence approach takes primes, not prime_pairs");
            if (!targets.empty()) throw DataError(where + "valence approach takes no target sets");
            break;
        case Approach::emotions:
            if (pairs.size() != 1) {
                throw DataError(where + "emotions approach needs exactly one prime pair, got " +
                                std::to_string(pairs.size()));
            }
            if (!primes.empty()) throw DataError(where + "emotions approach takes prime_pairs, not primes");
            if (!targets.empty()) throw DataError(where + "emotions approach takes targets from the lexicon");
            break;
    }
    for (const auto& w : primes) {
        if (w.empty()) throw DataError(where + "empty prime");
    }
}

PrimeSpec load_prime_spec(std::istream& in) {
    using json = nlohmann::ordered_json;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("prime spec: ") + e.what());
    }
    if (!doc.is_object()) throw DataError("prime spec: top level must be an object");

    auto words_of = [](const json& arr, const std::string& field) {
        if (!arr.is_array()) throw DataError("prime spec: '" + field + "' must be an array");
        std::vector<std::string> out;
        for (const auto& w : arr) {
            if (!w.is_string()) throw DataError("prime spec: '" + field + "' must hold strings");
            out.push_back(text::normalize_token(w.get<std::string>()));
        }
        return out;
    };

    PrimeSpec spec;
    try {
        spec.identity = doc.at("identity").get<std::string>();
        const auto approach = parse_approach(doc.at("approach").get<std::string>());
        if (!approach) throw DataError("prime spec: unknown approach '" + doc.at("approach").get<std::string>() + "'");
        spec.approach = *approach;
    } catch (const json::exception& e) {
        throw DataError(std::string("prime spec: ") + e.what());
    }

    if (doc.contains("prime_pairs")) {
        const auto& pairs = doc["prime_pairs"];
        if (!pairs.is_array()) throw DataError("prime spec: 'prime_pairs' must be an array");
        for (const auto& p : pairs) {
            const auto words = words_of(p, "prime_pairs");
            if (words.size() != 2) throw DataError("prime spec: every prime pair needs exactly two words");
            spec.pairs.push_back({words[0], words[1]});
        }
    }
    if (doc.contains("primes")) spec.primes = words_of(doc["primes"], "primes");
    if (doc.contains("targets")) {
        const auto& targets = doc["targets"];
        if (!targets.is_object()) throw DataError("prime spec: 'targets' must be an object of word lists");
        for (const auto& [name, words] : targets.items()) {
            spec.targets.push_back({name, words_of(words, "targets." + name)});
        }
    }
    spec.validate();
    return spec;
}

std::string prime_spec_to_json(const PrimeSpec& spec) {
    nlohmann::ordered_json doc;
    doc["identity"] = spec.identity;
    doc["approach"] = std::string(to_string(spec.approach));
    if (!spec.pairs.empty()) {
        auto pairs = nlohmann::ordered_json::array();
        for (const auto& p : spec.pairs) pairs.push_back({p.first, p.second});
        doc["prime_pairs"] = pairs;
    }
    if (!spec.primes.empty()) doc["primes"] = spec.primes;
    if (!spec.targets.empty()) {
        nlohmann::ordered_json targets = nlohmann::ordered_json::object();
        for (const auto& t : spec.targets) targets[t.name] = t.words;
        doc["targets"] = targets;
    }
    return doc.dump(2);
}

}  // namespace assocnet
