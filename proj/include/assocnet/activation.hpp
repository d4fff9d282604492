// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "assocnet/network.hpp"

namespace assocnet {

struct SpreadParams {
    double retention = 0.5;
    int steps = 1;
    double initial_activation = 1.0;

    /// retention 0.5, steps 2 * diameter, initial activation = node count.
    static SpreadParams defaults_for(const AssociationNetwork& net, int diameter);

    void validate() const;
};

enum class Norm { l1, l2 };
enum class Normalization { raw, l1_col_row, l2_col_row };

std::string to_string(Norm n);
std::string to_string(Normalization n);
std::optional<Norm> parse_norm(std::string_view name);
std::optional<Normalization> parse_normalization(std::string_view name);

/// Final activation levels: rows are network nodes, columns are primes.
struct ActivationMatrix {
    std::vector<std::string> node_labels;
    std::vector<std::string> prime_labels;
    Eigen::MatrixXd values;
    Normalization normalization = Normalization::raw;
    SpreadParams params;

    /// First column whose label is `prime`.
    std::optional<Eigen::Index> column_of(const std::string& prime) const;
    std::optional<Eigen::Index> row_of(const std::string& word) const;
};

/// Column-stochastic diffusion operator T with T(j, i) = w_ij / s_i, so one
/// step of spreading is a <- r * a + (1 - r) * T * a.
template <typename Scalar = double>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> transition_operator(const AssociationNetwork& net) {
    std::vector<Eigen::Triplet<Scalar>> entries;
    entries.reserve(2 * net.edge_count());
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        const auto u = static_cast<NodeId>(i);
        const Scalar s = static_cast<Scalar>(net.strength(u));
        const auto nbrs = net.neighbors(u);
        const auto ws = net.weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            entries.emplace_back(nbrs[k], u, static_cast<Scalar>(ws[k]) / s);
        }
    }
    const auto n = static_cast<Eigen::Index>(net.node_count());
    Eigen::SparseMatrix<Scalar, Eigen::RowMajor> t(n, n);
    t.setFromTriplets(entries.begin(), entries.end());
    return t;
}

/// Synchronous spreading from an arbitrary initial vector, no decay.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diffuse(const Eigen::SparseMatrix<Scalar, Eigen::RowMajor>& transition,
                                                 Eigen::Matrix<Scalar, Eigen::Dynamic, 1> activation,
                                                 Scalar retention, int steps) {
    const Scalar passed = Scalar(1) - retention;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next(activation.size());
    for (int t = 0; t < steps; ++t) {
        next.noalias() = transition * activation;
        next = retention * activation + passed * next;
        activation.swap(next);
    }
    return activation;
}

/// Final activation vector after spreading from a single prime.
Eigen::VectorXd spread(const AssociationNetwork& net, const std::string& prime, const SpreadParams& params);

/// One spread() column per prime. Every prime is checked before any work
/// starts. Columns are computed independently, so the result does not depend
/// on `threads` (0 = hardware concurrency).
ActivationMatrix spread_batch(const AssociationNetwork& net, const std::vector<std::string>& primes,
                              const SpreadParams& params, unsigned threads = 0);

/// Divides each column by its norm, then each row of the result by its norm.
/// All-zero columns and rows are left untouched.
template <typename Derived>
void normalize_columns_then_rows(Eigen::MatrixBase<Derived>& m, Norm norm) {
    using Scalar = typename Derived::Scalar;
    auto norm_of = [norm](const auto& v) -> Scalar {
        return norm == Norm::l1 ? v.template lpNorm<1>() : v.norm();
    };
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const Scalar n = norm_of(m.col(c));
        if (n > Scalar(0)) m.col(c) /= n;
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const Scalar n = norm_of(m.row(r));
        if (n > Scalar(0)) m.row(r) /= n;
    }
}

/// Requires a raw matrix; the result is tagged with the norm applied.
ActivationMatrix normalize_matrix(const ActivationMatrix& m, Norm norm);

/// TSV: header `node<TAB>prime...`, then one row per node, 17 significant digits.
void write_matrix(std::ostream& out, const ActivationMatrix& m);
ActivationMatrix read_matrix(std::istream& in);

/// JSON sidecar recording the spread parameters and normalization tag.
std::string matrix_sidecar_json(const ActivationMatrix& m);
/// Restores params and normalization from a sidecar onto `m`.
void apply_matrix_sidecar(const std::string& doc, ActivationMatrix& m);

}  // namespace assocnet
