// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "assocnet/bias.hpp"
#include "assocnet/error.hpp"

using namespace assocnet;

namespace {

ActivationMatrix matrix(std::vector<std::string> rows, std::vector<std::string> cols, const Eigen::MatrixXd& v,
                        Normalization norm = Normalization::l2_col_row) {
    ActivationMatrix m;
    m.node_labels = std::move(rows);
    m.prime_labels = std::move(cols);
    m.values = v;
    m.normalization = norm;
    return m;
}

PrimeSpec stereo(std::vector<PrimePair> pairs, std::vector<std::string> f, std::vector<std::string> mm) {
    PrimeSpec s;
    s.identity = "gender";
    s.approach = Approach::stereotypes;
    s.pairs = std::move(pairs);
    s.targets = {{"female", std::move(f)}, {"male", std::move(mm)}};
    return s;
}

std::string word(const char* prefix, int i) { return prefix + std::to_string(i); }

// Five pairs and 25 targets per side; consistent ALs exceed inconsistent ones by 0.1.
std::pair<ActivationMatrix, PrimeSpec> consistent_fixture() {
    std::vector<std::string> rows;
    std::vector<std::string> f;
    std::vector<std::string> mm;
    for (int i = 0; i < 25; ++i) {
        f.push_back(word("ft", i));
        mm.push_back(word("mt", i));
    }
    rows = f;
    rows.insert(rows.end(), mm.begin(), mm.end());
    std::vector<std::string> cols;
    std::vector<PrimePair> pairs;
    for (int p = 0; p < 5; ++p) {
        pairs.push_back({word("fp", p), word("mp", p)});
        cols.push_back(word("fp", p));
        cols.push_back(word("mp", p));
    }
    Eigen::MatrixXd v(50, 10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2, 0.6);
    for (int r = 0; r < 50; ++r) {
        for (int p = 0; p < 5; ++p) {
            const double base = u(rng);
            const bool female_row = r < 25;
            v(r, 2 * p) = female_row ? base + 0.1 : base;
            v(r, 2 * p + 1) = female_row ? base : base + 0.1;
        }
    }
    return {matrix(rows, cols, v), stereo(pairs, f, mm)};
}

Lexicon emotion_lexicon(const std::vector<std::string>& words) {
    Lexicon lex;
    for (std::size_t i = 0; i < words.size(); ++i) {
        lex.emotions[kAllEmotions[i % kAllEmotions.size()]].insert(words[i]);
    }
    return lex;
}

PrimeSpec emotion_spec() {
    PrimeSpec s;
    s.identity = "politics";
    s.approach = Approach::emotions;
    s.pairs = {{"democrat", "republican"}};
    return s;
}

PrimeSpec valence_spec(std::vector<std::string> primes) {
    PrimeSpec s;
    s.identity = "religion";
    s.approach = Approach::valence;
    s.primes = std::move(primes);
    return s;
}

}  // namespace

TEST_CASE("single-target toy") {
    Eigen::MatrixXd v(2, 2);
    v << 0.8, 0.2, 0.3, 0.5;
    const auto m = matrix({"warm", "strong"}, {"f", "mm"}, v);
    const auto spec = stereo({{"f", "mm"}}, {"warm"}, {"strong"});
    const auto [fd, md] = stereotype_differences(m, spec);
    REQUIRE(fd.differences.size() == 1);
    CHECK(fd.differences[0] == doctest::Approx(0.6));
    CHECK(md.differences[0] == doctest::Approx(0.2));
    CHECK(fd.provenance[0].second == "warm");
}

TEST_CASE("125 constant consistent differences") {
    const auto [m, spec] = consistent_fixture();
    const auto [fd, md] = stereotype_differences(m, spec);
    CHECK(fd.differences.size() == 125);
    CHECK(fd.provenance.size() == 125);
    CHECK(md.differences.size() == 125);
    const auto report = stereotype_bias(m, spec);
    REQUIRE(report.results.size() == 2);
    for (const auto& r : report.results) {
        CHECK(r.result.effect_size > 0.0);
        CHECK(r.result.p_value < 0.05);
        CHECK(r.targets_used == 25);
    }
    CHECK(report.results[0].label == "female");
    CHECK(report.matrix_slice->size() == 50 * 10);
    CHECK(report.warnings.empty());
}

TEST_CASE("swapping every pair flips the effects") {
    auto [m, spec] = consistent_fixture();
    // break the ties of the constant fixture so the test has something to flip
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 0.05);
    for (Eigen::Index i = 0; i < m.values.size(); ++i) m.values.data()[i] += g(rng);
    const auto base = stereotype_bias(m, spec);
    auto swapped = spec;
    for (auto& p : swapped.pairs) std::swap(p.first, p.second);
    const auto flipped = stereotype_bias(m, stereo(swapped.pairs, spec.targets[0].words, spec.targets[1].words));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(flipped.results[i].result.effect_size == -base.results[i].result.effect_size);
        CHECK(flipped.results[i].result.p_value == base.results[i].result.p_value);
    }
}

TEST_CASE("missing targets, primes and normalization") {
    Eigen::MatrixXd v(2, 2);
    v << 0.8, 0.2, 0.3, 0.5;
    const auto m = matrix({"warm", "strong"}, {"f", "mm"}, v);
    const auto r = stereotype_bias(m, stereo({{"f", "mm"}}, {"warm", "gentle"}, {"strong"}));
    CHECK(r.results[0].targets_missing == 1);
    CHECK(r.results[0].targets_used == 1);
    CHECK(r.warnings.size() == 1);
    for (const auto& lr : r.results) CHECK_FALSE(std::isnan(lr.result.effect_size));

    CHECK_THROWS_AS(stereotype_bias(m, stereo({{"f", "mm"}}, {"gentle"}, {"strong"})), DataError);
    CHECK_THROWS_WITH_AS(stereotype_bias(m, stereo({{"f", "x"}}, {"warm"}, {"strong"})),
                         doctest::Contains("missing prime"), DataError);
    CHECK_THROWS_AS(stereotype_bias(matrix({"warm", "strong"}, {"f", "mm"}, v, Normalization::raw),
                                    stereo({{"f", "mm"}}, {"warm"}, {"strong"})),
                    DataError);
    const auto l1 = stereotype_bias(matrix({"warm", "strong"}, {"f", "mm"}, v, Normalization::l1_col_row),
                                    stereo({{"f", "mm"}}, {"warm"}, {"strong"}));
    CHECK(l1.warnings.size() == 1);
}

TEST_CASE("identical primes give a null result") {
    Eigen::MatrixXd v(3, 2);
    v << 0.5, 0.5, 0.2, 0.2, 0.1, 0.1;
    const auto r = stereotype_bias(matrix({"a", "b", "c"}, {"f", "mm"}, v), stereo({{"f", "mm"}}, {"a", "b"}, {"c"}));
    for (const auto& lr : r.results) {
        CHECK(lr.result.p_value == 1.0);
        CHECK(lr.result.effect_size == 0.0);
    }
}

TEST_CASE("valence tracks one prime") {
    const int n = 41;
    std::vector<std::string> rows;
    Eigen::MatrixXd v(n, 3);
    Lexicon lex;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.005);
    for (int i = 0; i < n; ++i) {
        const double x = 0.1 + 0.02 * i;
        rows.push_back(word("w", i));
        v(i, 0) = x;
        v(i, 1) = (x - 0.5) * (x - 0.5);  // uncorrelated with x over a symmetric grid
        v(i, 2) = 0.3 + 0.1 * std::cos(1.7 * i);
        lex.valence[rows.back()] = x + noise(rng);
    }
    const auto m = matrix(rows, {"a", "b", "c"}, v);
    const auto report = valence_bias(m, valence_spec({"a", "b", "c"}), lex);
    REQUIRE(report.coefficients);
    const auto& c = *report.coefficients;
    CHECK(c[0].coefficient == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(c[1].coefficient) < 0.05);
    CHECK(c[0].multivariate_coefficient == doctest::Approx(1.0).epsilon(0.02));
    CHECK(report.observations == static_cast<std::size_t>(n));
    REQUIRE(report.results.size() == 1);
    CHECK(report.results[0].result.p_value < 1e-6);
    CHECK(*report.results[0].result.df == 2);

    // shifting every score moves only the intercept
    Lexicon shifted = lex;
    for (auto& [w, s] : shifted.valence) s += 0.25;
    const auto moved = valence_bias(m, valence_spec({"a", "b", "c"}), shifted);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(moved.coefficients->at(i).coefficient == doctest::Approx(c[i].coefficient).epsilon(1e-9));
    }
}

TEST_CASE("constant valence carries no signal") {
    const int n = 12;
    std::vector<std::string> rows;
    Eigen::MatrixXd v = (Eigen::MatrixXd::Random(n, 3).array() + 1.0) / 2.0;
    Lexicon lex;
    for (int i = 0; i < n; ++i) {
        rows.push_back(word("w", i));
        lex.valence[rows.back()] = 0.5;
    }
    const auto report = valence_bias(matrix(rows, {"a", "b", "c"}, v), valence_spec({"a", "b", "c"}), lex);
    for (const auto& row : *report.coefficients) CHECK(std::abs(row.coefficient) < 1e-12);
    CHECK(report.results[0].result.statistic == 0.0);
    CHECK(report.results[0].result.p_value == 1.0);
}

TEST_CASE("valence needs enough rated nodes") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Random(6, 3).cwiseAbs();
    Lexicon lex;
    for (int i = 0; i < 4; ++i) lex.valence[word("w", i)] = 0.1 * i;
    std::vector<std::string> rows;
    for (int i = 0; i < 6; ++i) rows.push_back(word("w", i));
    CHECK_THROWS_AS(valence_bias(matrix(rows, {"a", "b", "c"}, v), valence_spec({"a", "b", "c"}), lex), DataError);
}

TEST_CASE("emotion signs") {
    std::vector<std::string> rows;
    for (int i = 0; i < 32; ++i) rows.push_back(word("e", i));
    const auto lex = emotion_lexicon(rows);
    Eigen::MatrixXd v(32, 2);
    for (int i = 0; i < 32; ++i) {
        const double base = 0.01 * (i + 1);
        const bool anger = kAllEmotions[static_cast<std::size_t>(i) % 8] == Emotion::anger;
        v(i, 0) = anger ? base : base + 0.001 * (i + 1);
        v(i, 1) = anger ? base + 0.001 * (i + 1) : base;
    }
    const auto report = emotion_bias(matrix(rows, {"democrat", "republican"}, v, Normalization::l1_col_row),
                                     emotion_spec(), lex);
    REQUIRE(report.results.size() == 8);
    for (const auto& r : report.results) {
        if (r.label == "anger") {
            CHECK(r.result.effect_size < 0.0);
        } else {
            CHECK(r.result.effect_size > 0.0);
        }
        CHECK(r.targets_used == 4);
    }
    CHECK(report.warnings.empty());

    // each emotion is evaluated on its own words only
    const auto m = matrix(rows, {"democrat", "republican"}, v, Normalization::l1_col_row);
    for (std::size_t i = 0; i < 8; ++i) {
        const auto set = emotion_differences(m, {"democrat", "republican"}, lex, kAllEmotions[i]);
        const auto alone = stats::wilcoxon_signed_rank(set.differences);
        CHECK(alone.p_value == report.results[i].result.p_value);
        CHECK(alone.effect_size == report.results[i].result.effect_size);
    }
}

TEST_CASE("symmetric emotion activations") {
    std::vector<std::string> rows;
    for (int i = 0; i < 16; ++i) rows.push_back(word("e", i));
    Eigen::MatrixXd v(16, 2);
    v.col(0) = Eigen::VectorXd::LinSpaced(16, 0.1, 0.9);
    v.col(1) = v.col(0);
    const auto report = emotion_bias(matrix(rows, {"democrat", "republican"}, v, Normalization::l1_col_row),
                                     emotion_spec(), emotion_lexicon(rows));
    for (const auto& r : report.results) {
        CHECK(r.result.effect_size == 0.0);
        CHECK(r.result.p_value == 1.0);
    }
}

TEST_CASE("emotion without words in the network") {
    std::vector<std::string> rows{"e0", "e1"};
    Eigen::MatrixXd v(2, 2);
    v << 0.1, 0.2, 0.3, 0.4;
    CHECK_THROWS_WITH_AS(emotion_bias(matrix(rows, {"democrat", "republican"}, v, Normalization::l1_col_row),
                                      emotion_spec(), emotion_lexicon(rows)),
                         doctest::Contains("disgust"), DataError);
}

TEST_CASE("reports serialize deterministically") {
    const auto [m, spec] = consistent_fixture();
    const auto a = report_to_json(stereotype_bias(m, spec));
    const auto b = report_to_json(stereotype_bias(m, spec));
    CHECK(a == b);
    CHECK(a.find("\"approach\": \"stereotypes\"") != std::string::npos);
    const auto csv = heatmap_csv({{"warm", "f", 0.5}, {"a,b", "mm", 0.25}});
    CHECK(csv == "target,prime,value\nwarm,f,0.5\n\"a,b\",mm,0.25\n");
    CHECK(default_norm(Approach::emotions) == Norm::l1);
    CHECK(default_norm(Approach::valence) == Norm::l2);
}
