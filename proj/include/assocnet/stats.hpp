// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace assocnet::stats {

struct TestResult {
    double statistic = 0.0;        // W+ for Wilcoxon, chi-square for Wald
    std::optional<double> z_value;  // Wilcoxon only: the standardized W+ behind the effect size
    double p_value = 1.0;
    double effect_size = 0.0;
    std::int64_t n = 0;
    std::optional<int> df;  // Wald only
    std::string method;
};

/// Two-sided Wilcoxon signed-rank test on paired differences.
///
/// Zero differences are dropped. With n <= 25 and no tied magnitudes the
/// p-value is exact, p = min(1, 2 * min(P[W <= W+], P[W >= W+])) under the
/// uniform sign-flip null; otherwise a tie-corrected normal approximation with
/// a 0.5 continuity correction is used. The effect size is r = Z / sqrt(n),
/// with Z = (W+ - n(n+1)/4) / sigma taken without the continuity correction,
/// positive when positive differences dominate.
TestResult wilcoxon_signed_rank(std::span<const double> differences);

/// Number of subsets of {1..n} with each possible sum; index s in [0, n(n+1)/2].
std::vector<std::uint64_t> signed_rank_null_counts(int n);

inline constexpr int kWilcoxonExactLimit = 25;

struct GlmFit {
    Eigen::VectorXd coefficients;  // intercept first
    Eigen::MatrixXd covariance;
    double residual_variance = 0.0;
    double rss = 0.0;
    std::int64_t n = 0;
    std::vector<std::string> predictor_labels;  // "(intercept)" first

    Eigen::VectorXd standard_errors() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }
    /// Two-sided t-test p-values for each coefficient (df = n - k).
    Eigen::VectorXd p_values() const;
};

/// Gaussian identity-link GLM, i.e. ordinary least squares, with an intercept
/// column prepended to `predictors`. Solved by column-pivoted Householder QR;
/// covariance = sigma^2 (X'X)^-1 with sigma^2 = RSS / (n - k).
GlmFit ols_fit(const Eigen::VectorXd& response, const Eigen::MatrixXd& predictors,
               std::vector<std::string> labels = {});

/// Wald test of H0: all selected coefficients are equal, using the chained
/// contrasts beta[i_k] - beta[i_{k+1}]. Effect size is Cohen's w = sqrt(chi2 / n).
TestResult wald_equal_coefficients(const GlmFit& fit, const std::vector<int>& indices);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, int df);

/// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, "" otherwise.
std::string significance_stars(double p);

}  // namespace assocnet::stats
