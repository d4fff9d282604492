// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <tuple>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "assocnet/ingest.hpp"

namespace assocnet {

using NodeId = std::int32_t;
using Weight = std::int64_t;

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    Weight weight = 0;
};

/// Undirected weighted word graph in CSR form.
///
/// Node ids are dense and follow the lexicographic order of the labels, so two
/// networks built from the same edge set are identical, ids included. The
/// graph carries no self-loops and every weight is positive. Construction does
/// not require connectivity; build_network() always returns a connected graph
/// and read_network() checks it.
class AssociationNetwork {
public:
    AssociationNetwork() = default;

    /// Edges are given by label; each unordered pair must appear once.
    static AssociationNetwork from_edges(
        const std::vector<std::tuple<std::string, std::string, Weight>>& edges);

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(NodeId id) const { return labels_.at(static_cast<std::size_t>(id)); }
    std::optional<NodeId> find(const std::string& word) const;
    bool contains(const std::string& word) const { return index_.count(word) != 0; }

    std::span<const NodeId> neighbors(NodeId id) const;
    std::span<const Weight> weights(NodeId id) const;
    std::size_t degree(NodeId id) const { return neighbors(id).size(); }
    /// Sum of incident edge weights.
    double strength(NodeId id) const { return strength_[static_cast<std::size_t>(id)]; }
    std::optional<Weight> edge_weight(NodeId u, NodeId v) const;

    /// Each undirected edge once with u < v, ordered by (u, v).
    std::vector<Edge> edges() const;

    bool is_connected() const;

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adjacency_;
    std::vector<Weight> adjacency_weights_;
    std::vector<double> strength_;
    std::size_t edge_count_ = 0;
};

/// Builds the largest connected component of the filtered, undirected network:
/// vocabulary filter, self-loop removal, undirecting with the larger of the two
/// directed weights, min-weight threshold, then LCC (ties go to the component
/// with the lexicographically smallest word).
AssociationNetwork build_network(const std::vector<NormRecord>& records,
                                 const std::unordered_set<std::string>* vocabulary,
                                 Weight min_weight = 2);

enum class DiameterMethod { exact, double_sweep_lower_bound };

/// Unweighted hop diameter. `exact` runs the iFUB bound-pruned BFS search;
/// `double_sweep_lower_bound` reports the eccentricity of the node found
/// farthest from node 0.
int diameter(const AssociationNetwork& net, DiameterMethod method = DiameterMethod::exact);

/// Hop distances from `source`; -1 for unreachable nodes.
std::vector<int> bfs_distances(const AssociationNetwork& net, NodeId source);

struct NetworkStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double density = 0.0;
    double average_degree = 0.0;
    int diameter = 0;
};

NetworkStats network_stats(const AssociationNetwork& net, DiameterMethod method = DiameterMethod::exact);

/// JSON object with keys node_count, edge_count, density, average_degree, diameter.
std::string stats_to_json(const NetworkStats& stats);
NetworkStats stats_from_json(const std::string& doc);

/// `# node_count=N edge_count=M` header, then `word_i<TAB>word_j<TAB>weight`
/// with word_i < word_j, sorted.
void write_network(std::ostream& out, const AssociationNetwork& net);

/// Inverse of write_network. Rejects self-loops, duplicates, non-positive
/// weights, header count mismatches and disconnected graphs.
AssociationNetwork read_network(std::istream& in);

}  // namespace assocnet
