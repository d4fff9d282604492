// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "assocnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "assocnet/error.hpp"

namespace assocnet::stats {

namespace {

double normal_two_sided(double z) { return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0))); }

}  // namespace

std::vector<std::uint64_t> signed_rank_null_counts(int n) {
    const int max_sum = n * (n + 1) / 2;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_sum) + 1, 0);
    counts[0] = 1;
    int reach = 0;
    for (int rank = 1; rank <= n; ++rank) {
        reach += rank;
        for (int s = reach; s >= rank; --s) counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - rank)];
    }
    return counts;
}

TestResult wilcoxon_signed_rank(std::span<const double> differences) {
    if (differences.empty()) throw DataError("wilcoxon: empty sample");

    std::vector<double> nonzero;
    nonzero.reserve(differences.size());
    for (double d : differences) {
        if (!std::isfinite(d)) throw DataError("wilcoxon: non-finite difference");
        if (d != 0.0) nonzero.push_back(d);
    }
    if (nonzero.empty()) throw ComputationError("wilcoxon: degenerate sample (all differences are zero)");

    const auto n = static_cast<std::int64_t>(nonzero.size());
    std::vector<std::size_t> order(nonzero.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(nonzero[a]) < std::abs(nonzero[b]); });

    // average ranks over tied magnitudes
    double w_plus = 0.0;
    double tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && std::abs(nonzero[order[j + 1]]) == std::abs(nonzero[order[i]])) ++j;
        const double t = static_cast<double>(j - i + 1);
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        if (t > 1) {
            ties = true;
            tie_term += t * t * t - t;
        }
        for (std::size_t k = i; k <= j; ++k) {
            if (nonzero[order[k]] > 0) w_plus += rank;
        }
        i = j + 1;
    }

    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    const double variance = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    const double sigma = std::sqrt(std::max(variance, 0.0));
    const double z = sigma > 0.0 ? (w_plus - mean) / sigma : 0.0;

    TestResult r;
    r.statistic = w_plus;
    r.z_value = z;
    r.n = n;
    r.effect_size = z / std::sqrt(nd);

    if (!ties && n <= kWilcoxonExactLimit) {
        const auto counts = signed_rank_null_counts(static_cast<int>(n));
        const auto w = static_cast<std::size_t>(std::llround(w_plus));
        const std::uint64_t below = std::accumulate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(w) + 1, std::uint64_t{0});
        const std::uint64_t above = std::accumulate(counts.begin() + static_cast<std::ptrdiff_t>(w), counts.end(), std::uint64_t{0});
        const double total = std::ldexp(1.0, static_cast<int>(n));
        r.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(below, above)) / total);
        r.method = "wilcoxon_signed_rank_exact";
    } else {
        double shifted = w_plus - mean;
        shifted = std::copysign(std::max(std::abs(shifted) - 0.5, 0.0), shifted);
        const double zc = sigma > 0.0 ? shifted / sigma : 0.0;
        r.p_value = normal_two_sided(zc);
        r.method = "wilcoxon_signed_rank_normal";
    }
    return r;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd GlmFit::p_values() const {
    const auto k = coefficients.size();
    const double df = static_cast<double>(n - k);
    Eigen::VectorXd p(k);
    const Eigen::VectorXd se = standard_errors();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (se(i) == 0.0) {
            p(i) = coefficients(i) == 0.0 ? 1.0 : 0.0;
            continue;
        }
        const boost::math::students_t dist(df);
        p(i) = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(coefficients(i) / se(i)))));
    }
    return p;
}

GlmFit ols_fit(const Eigen::VectorXd& response, const Eigen::MatrixXd& predictors, std::vector<std::string> labels) {
    const Eigen::Index n = response.size();
    const Eigen::Index k = predictors.cols() + 1;
    if (predictors.rows() != n) throw DataError("ols: predictor rows do not match response length");
    if (n <= k) {
        throw ComputationError("ols: need more observations (" + std::to_string(n) + ") than coefficients (" +
                               std::to_string(k) + ")");
    }
    if (labels.empty()) {
        for (Eigen::Index c = 0; c < predictors.cols(); ++c) labels.push_back("x" + std::to_string(c + 1));
    }
    if (static_cast<Eigen::Index>(labels.size()) != predictors.cols()) throw DataError("ols: label count mismatch");

    Eigen::MatrixXd design(n, k);
    design.col(0).setOnes();
    design.rightCols(k - 1) = predictors;

    GlmFit fit;
    fit.n = n;
    fit.predictor_labels.reserve(static_cast<std::size_t>(k));
    fit.predictor_labels.emplace_back("(intercept)");
    for (auto& l : labels) fit.predictor_labels.push_back(std::move(l));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < k) {
        std::string cols;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < k; ++i) {
            if (!cols.empty()) cols += ", ";
            cols += fit.predictor_labels[static_cast<std::size_t>(perm(i))];
        }
        throw ComputationError("ols: rank-deficient design, collinear column(s): " + cols);
    }

    // constant response: the slopes are exactly zero
    if ((response.array() == response(0)).all()) {
        fit.coefficients = Eigen::VectorXd::Zero(k);
        fit.coefficients(0) = response(0);
        fit.covariance = Eigen::MatrixXd::Zero(k, k);
        return fit;
    }

    fit.coefficients = qr.solve(response);
    const Eigen::VectorXd residuals = response - design * fit.coefficients;
    fit.rss = residuals.squaredNorm();
    fit.residual_variance = fit.rss / static_cast<double>(n - k);

    // (X'X)^-1 = P R^-1 R^-T P'
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd permuted = r_inv * r_inv.transpose();
    const auto& p = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = p * permuted * p.transpose();
    fit.covariance = fit.residual_variance * xtx_inv;
    fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose());
    return fit;
}

TestResult wald_equal_coefficients(const GlmFit& fit, const std::vector<int>& indices) {
    const auto k = fit.coefficients.size();
    if (indices.size() < 2) throw DataError("wald: need at least two coefficients");
    for (int i : indices) {
        if (i <= 0 || i >= k) throw DataError("wald: coefficient index " + std::to_string(i) + " out of range");
    }
    const auto m = static_cast<Eigen::Index>(indices.size()) - 1;
    Eigen::MatrixXd contrast = Eigen::MatrixXd::Zero(m, k);
    for (Eigen::Index row = 0; row < m; ++row) {
        contrast(row, indices[static_cast<std::size_t>(row)]) += 1.0;
        contrast(row, indices[static_cast<std::size_t>(row) + 1]) -= 1.0;
    }

    TestResult r;
    r.df = static_cast<int>(m);
    r.n = fit.n;
    r.method = "wald_equal_coefficients";

    const Eigen::VectorXd diff = contrast * fit.coefficients;
    if ((diff.array() == 0.0).all()) {
        r.statistic = 0.0;
        r.p_value = 1.0;
        r.effect_size = 0.0;
        return r;
    }

    const Eigen::MatrixXd v = contrast * fit.covariance * contrast.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v, Eigen::EigenvaluesOnly);
    const double largest = eig.eigenvalues().maxCoeff();
    if (!(largest > 0.0) || eig.eigenvalues().minCoeff() <= largest * 1e-13) {
        throw ComputationError("wald: degenerate contrast (singular contrast covariance)");
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(v);
    r.statistic = diff.dot(ldlt.solve(diff));
    r.p_value = chi_square_sf(r.statistic, r.df.value());
    r.effect_size = std::sqrt(r.statistic / static_cast<double>(fit.n));
    return r;
}

double chi_square_sf(double x, int df) {
    if (x <= 0.0) return 1.0;
    return std::clamp(boost::math::gamma_q(0.5 * df, 0.5 * x), 0.0, 1.0);
}

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

}  // namespace assocnet::stats
