// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "assocnet/activation.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "assocnet/error.hpp"
#include "assocnet/text.hpp"

namespace assocnet {

SpreadParams SpreadParams::defaults_for(const AssociationNetwork& net, int diameter) {
    SpreadParams p;
    p.retention = 0.5;
    p.steps = std::max(1, 2 * diameter);
    p.initial_activation = static_cast<double>(net.node_count());
    return p;
}

void SpreadParams::validate() const {
    if (!(retention >= 0.0 && retention <= 1.0)) throw ConfigError("retention must lie in [0, 1]");
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (!(initial_activation > 0.0) || !std::isfinite(initial_activation)) {
        throw ConfigError("initial activation must be positive");
    }
}

std::string to_string(Norm n) { return n == Norm::l1 ? "l1" : "l2"; }

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::raw: return "raw";
        case Normalization::l1_col_row: return "l1_col_row";
        case Normalization::l2_col_row: return "l2_col_row";
    }
    return "unknown";
}

std::optional<Norm> parse_norm(std::string_view name) {
    if (name == "l1") return Norm::l1;
    if (name == "l2") return Norm::l2;
    return std::nullopt;
}

std::optional<Normalization> parse_normalization(std::string_view name) {
    if (name == "raw") return Normalization::raw;
    if (name == "l1_col_row") return Normalization::l1_col_row;
    if (name == "l2_col_row") return Normalization::l2_col_row;
    return std::nullopt;
}

std::optional<Eigen::Index> ActivationMatrix::column_of(const std::string& prime) const {
    const auto it = std::find(prime_labels.begin(), prime_labels.end(), prime);
    if (it == prime_labels.end()) return std::nullopt;
    return static_cast<Eigen::Index>(it - prime_labels.begin());
}

std::optional<Eigen::Index> ActivationMatrix::row_of(const std::string& word) const {
    // node rows come from a network and are sorted
    const auto it = std::lower_bound(node_labels.begin(), node_labels.end(), word);
    if (it != node_labels.end() && *it == word) return static_cast<Eigen::Index>(it - node_labels.begin());
    const auto lin = std::find(node_labels.begin(), node_labels.end(), word);
    if (lin == node_labels.end()) return std::nullopt;
    return static_cast<Eigen::Index>(lin - node_labels.begin());
}

namespace {

Eigen::VectorXd spread_from(const Eigen::SparseMatrix<double, Eigen::RowMajor>& transition, NodeId prime,
                            const SpreadParams& params) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(transition.rows());
    a(prime) = params.initial_activation;
    return diffuse<double>(transition, std::move(a), params.retention, params.steps);
}

}  // namespace

Eigen::VectorXd spread(const AssociationNetwork& net, const std::string& prime, const SpreadParams& params) {
    params.validate();
    const auto id = net.find(prime);
    if (!id) throw DataError("missing prime: '" + prime + "' is not a node of the network");
    return spread_from(transition_operator<double>(net), *id, params);
}

ActivationMatrix spread_batch(const AssociationNetwork& net, const std::vector<std::string>& primes,
                              const SpreadParams& params, unsigned threads) {
    params.validate();
    std::vector<NodeId> ids;
    std::string missing;
    for (const auto& p : primes) {
        if (const auto id = net.find(p)) {
            ids.push_back(*id);
        } else {
            missing += (missing.empty() ? "" : ", ") + ("'" + p + "'");
        }
    }
    if (!missing.empty()) throw DataError("missing prime(s) not in the network: " + missing);

    ActivationMatrix m;
    m.node_labels = net.labels();
    m.prime_labels = primes;
    m.params = params;
    m.normalization = Normalization::raw;
    m.values.resize(static_cast<Eigen::Index>(net.node_count()), static_cast<Eigen::Index>(primes.size()));
    if (primes.empty()) return m;

    const auto transition = transition_operator<double>(net);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(primes.size()));

    // each worker claims whole columns; columns never share state
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < ids.size(); k = next++) {
            m.values.col(static_cast<Eigen::Index>(k)) = spread_from(transition, ids[k], params);
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    return m;
}

ActivationMatrix normalize_matrix(const ActivationMatrix& m, Norm norm) {
    if (m.normalization != Normalization::raw) {
        throw DataError("matrix is already normalized (" + to_string(m.normalization) + ")");
    }
    ActivationMatrix out = m;
    normalize_columns_then_rows(out.values, norm);
    out.normalization = norm == Norm::l1 ? Normalization::l1_col_row : Normalization::l2_col_row;
    return out;
}

// ---------------------------------------------------------------------------

void write_matrix(std::ostream& out, const ActivationMatrix& m) {
    out << "node";
    for (const auto& p : m.prime_labels) out << '\t' << p;
    out << '\n';
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        out << m.node_labels[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.values.cols(); ++c) out << '\t' << text::format_double(m.values(r, c));
        out << '\n';
    }
}

ActivationMatrix read_matrix(std::istream& in) {
    ActivationMatrix m;
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> flat;
    bool header = false;
    std::unordered_set<std::string> seen_rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto cells = text::split_tabs(line);
        if (!header) {
            header = true;
            if (cells.size() < 2) throw ParseError(line_no, "matrix header needs at least one prime column");
            for (std::size_t c = 1; c < cells.size(); ++c) m.prime_labels.emplace_back(text::trim(cells[c]));
            continue;
        }
        if (cells.size() != m.prime_labels.size() + 1) {
            throw ParseError(line_no, "expected " + std::to_string(m.prime_labels.size() + 1) + " columns");
        }
        std::string label(text::trim(cells[0]));
        if (!seen_rows.insert(label).second) throw ParseError(line_no, "duplicate node row '" + label + "'");
        m.node_labels.push_back(std::move(label));
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            if (!text::parse_double(cells[c], v) || !std::isfinite(v)) throw ParseError(line_no, "bad matrix value");
            flat.push_back(v);
        }
    }
    if (!header) throw DataError("empty matrix file");
    const auto rows = static_cast<Eigen::Index>(m.node_labels.size());
    const auto cols = static_cast<Eigen::Index>(m.prime_labels.size());
    m.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), rows, cols);
    return m;
}

std::string matrix_sidecar_json(const ActivationMatrix& m) {
    nlohmann::json doc;
    doc["normalization"] = to_string(m.normalization);
    doc["retention"] = m.params.retention;
    doc["steps"] = m.params.steps;
    doc["initial_activation"] = m.params.initial_activation;
    doc["decay"] = 0.0;
    doc["suppress"] = 0.0;
    doc["rows"] = m.node_labels.size();
    doc["primes"] = m.prime_labels;
    return doc.dump(2) + "\n";
}

void apply_matrix_sidecar(const std::string& doc, ActivationMatrix& m) {
    try {
        const auto j = nlohmann::json::parse(doc);
        const auto norm = parse_normalization(j.at("normalization").get<std::string>());
        if (!norm) throw DataError("matrix sidecar: unknown normalization");
        m.normalization = *norm;
        m.params.retention = j.at("retention").get<double>();
        m.params.steps = j.at("steps").get<int>();
        m.params.initial_activation = j.at("initial_activation").get<double>();
        if (j.at("primes").get<std::vector<std::string>>() != m.prime_labels) {
            throw DataError("matrix sidecar primes do not match the matrix header");
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("matrix sidecar: ") + e.what());
    }
}

}  // namespace assocnet
