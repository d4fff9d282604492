// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "assocnet/network.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "assocnet/error.hpp"
#include "assocnet/text.hpp"

namespace assocnet {

AssociationNetwork AssociationNetwork::from_edges(
    const std::vector<std::tuple<std::string, std::string, Weight>>& edges) {
    AssociationNetwork net;

    std::vector<std::string> labels;
    labels.reserve(edges.size() * 2);
    for (const auto& [a, b, w] : edges) {
        labels.push_back(a);
        labels.push_back(b);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    net.labels_ = std::move(labels);
    net.index_.reserve(net.labels_.size());
    for (std::size_t i = 0; i < net.labels_.size(); ++i) net.index_.emplace(net.labels_[i], static_cast<NodeId>(i));

    const std::size_t n = net.labels_.size();
    std::vector<std::vector<std::pair<NodeId, Weight>>> adj(n);
    for (const auto& [a, b, w] : edges) {
        if (a == b) throw DataError("self-loop on '" + a + "'");
        if (w <= 0) throw DataError("non-positive weight on edge " + a + " -- " + b);
        const NodeId u = net.index_.at(a);
        const NodeId v = net.index_.at(b);
        adj[static_cast<std::size_t>(u)].emplace_back(v, w);
        adj[static_cast<std::size_t>(v)].emplace_back(u, w);
    }

    net.offsets_.assign(n + 1, 0);
    net.strength_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = adj[i];
        std::sort(row.begin(), row.end());
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (row[k].first == row[k - 1].first) {
                throw DataError("duplicate edge " + net.labels_[i] + " -- " +
                                net.labels_[static_cast<std::size_t>(row[k].first)]);
            }
        }
        net.offsets_[i + 1] = net.offsets_[i] + row.size();
        for (const auto& [v, w] : row) {
            net.adjacency_.push_back(v);
            net.adjacency_weights_.push_back(w);
            net.strength_[i] += static_cast<double>(w);
        }
    }
    net.edge_count_ = edges.size();
    return net;
}

std::optional<NodeId> AssociationNetwork::find(const std::string& word) const {
    if (auto it = index_.find(word); it != index_.end()) return it->second;
    return std::nullopt;
}

std::span<const NodeId> AssociationNetwork::neighbors(NodeId id) const {
    const auto i = static_cast<std::size_t>(id);
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::span<const Weight> AssociationNetwork::weights(NodeId id) const {
    const auto i = static_cast<std::size_t>(id);
    return {adjacency_weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::optional<Weight> AssociationNetwork::edge_weight(NodeId u, NodeId v) const {
    const auto nbrs = neighbors(u);
    const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
    if (it == nbrs.end() || *it != v) return std::nullopt;
    return weights(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<Edge> AssociationNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < node_count(); ++i) {
        const auto u = static_cast<NodeId>(i);
        const auto nbrs = neighbors(u);
        const auto ws = weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            if (nbrs[k] > u) out.push_back({u, nbrs[k], ws[k]});
        }
    }
    return out;
}

std::vector<int> bfs_distances(const AssociationNetwork& net, NodeId source) {
    std::vector<int> dist(net.node_count(), -1);
    std::vector<NodeId> frontier{source};
    dist[static_cast<std::size_t>(source)] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const NodeId u = frontier[head];
        const int next = dist[static_cast<std::size_t>(u)] + 1;
        for (NodeId v : net.neighbors(u)) {
            auto& d = dist[static_cast<std::size_t>(v)];
            if (d < 0) {
                d = next;
                frontier.push_back(v);
            }
        }
    }
    return dist;
}

bool AssociationNetwork::is_connected() const {
    if (node_count() == 0) return false;
    const auto dist = bfs_distances(*this, 0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

// ---------------------------------------------------------------------------

AssociationNetwork build_network(const std::vector<NormRecord>& records,
                                 const std::unordered_set<std::string>* vocabulary, Weight min_weight) {
    if (min_weight < 1) throw ConfigError("min_weight must be >= 1");

    std::set<std::pair<std::string_view, std::string_view>> seen;
    for (const auto& r : records) {
        if (!seen.emplace(r.cue, r.response).second) {
            throw DataError("records are not aggregated: duplicate " + r.cue + " -> " + r.response);
        }
        if (r.count < 1) throw DataError("record " + r.cue + " -> " + r.response + " has count < 1");
    }

    // undirected weight = max of the two directed counts
    std::map<std::pair<std::string, std::string>, Weight> undirected;
    for (const auto& r : records) {
        if (vocabulary && (!vocabulary->count(r.cue) || !vocabulary->count(r.response))) continue;
        if (r.cue == r.response) continue;
        auto key = r.cue < r.response ? std::make_pair(r.cue, r.response) : std::make_pair(r.response, r.cue);
        auto& w = undirected[std::move(key)];
        w = std::max(w, r.count);
    }

    std::vector<std::tuple<std::string, std::string, Weight>> kept;
    for (const auto& [key, w] : undirected) {
        if (w >= min_weight) kept.emplace_back(key.first, key.second, w);
    }
    if (kept.empty()) throw DataError("empty network: no edges survive filtering");

    const auto full = AssociationNetwork::from_edges(kept);

    // Components are discovered in order of their smallest id, which is also
    // their lexicographically smallest word, so strict '>' implements the tie-break.
    std::vector<int> component(full.node_count(), -1);
    int best = -1;
    std::size_t best_size = 0;
    int next_component = 0;
    for (std::size_t start = 0; start < full.node_count(); ++start) {
        if (component[start] >= 0) continue;
        std::vector<NodeId> queue{static_cast<NodeId>(start)};
        component[start] = next_component;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (NodeId v : full.neighbors(queue[head])) {
                if (component[static_cast<std::size_t>(v)] < 0) {
                    component[static_cast<std::size_t>(v)] = next_component;
                    queue.push_back(v);
                }
            }
        }
        if (queue.size() > best_size) {
            best_size = queue.size();
            best = next_component;
        }
        ++next_component;
    }

    std::vector<std::tuple<std::string, std::string, Weight>> lcc;
    for (const auto& e : full.edges()) {
        if (component[static_cast<std::size_t>(e.u)] == best) lcc.emplace_back(full.label(e.u), full.label(e.v), e.weight);
    }
    return AssociationNetwork::from_edges(lcc);
}

// ---------------------------------------------------------------------------

namespace {

int eccentricity(const AssociationNetwork& net, NodeId source) {
    const auto dist = bfs_distances(net, source);
    return *std::max_element(dist.begin(), dist.end());
}

void require_connected(const AssociationNetwork& net) {
    if (net.node_count() == 0) throw DataError("diameter of an empty network");
    if (!net.is_connected()) throw DataError("diameter requires a connected network");
}

// iFUB (Crescenzi et al.): BFS from a central-ish node u, then visit the BFS
// fringe levels from the outside in. Once the lower bound exceeds 2*(level-1),
// no node at a lower level can have a larger eccentricity.
int ifub_diameter(const AssociationNetwork& net) {
    NodeId root = 0;
    for (std::size_t i = 1; i < net.node_count(); ++i) {
        if (net.degree(static_cast<NodeId>(i)) > net.degree(root)) root = static_cast<NodeId>(i);
    }
    const auto dist = bfs_distances(net, root);
    const int ecc_root = *std::max_element(dist.begin(), dist.end());

    std::vector<std::vector<NodeId>> levels(static_cast<std::size_t>(ecc_root) + 1);
    for (std::size_t i = 0; i < dist.size(); ++i) levels[static_cast<std::size_t>(dist[i])].push_back(static_cast<NodeId>(i));

    int lower = ecc_root;
    int upper = 2 * ecc_root;
    for (int level = ecc_root; level > 0 && upper > lower; --level) {
        int level_max = 0;
        for (NodeId v : levels[static_cast<std::size_t>(level)]) level_max = std::max(level_max, eccentricity(net, v));
        lower = std::max(lower, level_max);
        if (lower > 2 * (level - 1)) return lower;
        upper = 2 * (level - 1);
    }
    return lower;
}

}  // namespace

int diameter(const AssociationNetwork& net, DiameterMethod method) {
    require_connected(net);
    if (net.node_count() == 1) return 0;
    if (method == DiameterMethod::exact) return ifub_diameter(net);

    const auto first = bfs_distances(net, 0);
    const auto far = static_cast<NodeId>(std::max_element(first.begin(), first.end()) - first.begin());
    return eccentricity(net, far);
}

NetworkStats network_stats(const AssociationNetwork& net, DiameterMethod method) {
    NetworkStats s;
    s.node_count = net.node_count();
    s.edge_count = net.edge_count();
    const auto n = static_cast<double>(s.node_count);
    const auto m = static_cast<double>(s.edge_count);
    s.density = s.node_count > 1 ? 2.0 * m / (n * (n - 1.0)) : 0.0;
    s.average_degree = s.node_count > 0 ? 2.0 * m / n : 0.0;
    s.diameter = diameter(net, method);
    return s;
}

std::string stats_to_json(const NetworkStats& stats) {
    nlohmann::json doc;
    doc["node_count"] = stats.node_count;
    doc["edge_count"] = stats.edge_count;
    doc["density"] = stats.density;
    doc["average_degree"] = stats.average_degree;
    doc["diameter"] = stats.diameter;
    return doc.dump(2) + "\n";
}

NetworkStats stats_from_json(const std::string& doc) {
    try {
        const auto j = nlohmann::json::parse(doc);
        NetworkStats s;
        s.node_count = j.at("node_count").get<std::size_t>();
        s.edge_count = j.at("edge_count").get<std::size_t>();
        s.density = j.at("density").get<double>();
        s.average_degree = j.at("average_degree").get<double>();
        s.diameter = j.at("diameter").get<int>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("stats document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

void write_network(std::ostream& out, const AssociationNetwork& net) {
    out << "# node_count=" << net.node_count() << " edge_count=" << net.edge_count() << '\n';
    // ids follow label order, so (u, v) with u < v is already lexicographic
    for (const auto& e : net.edges()) out << net.label(e.u) << '\t' << net.label(e.v) << '\t' << e.weight << '\n';
}

AssociationNetwork read_network(std::istream& in) {
    std::vector<std::tuple<std::string, std::string, Weight>> edges;
    std::optional<std::size_t> declared_nodes;
    std::optional<std::size_t> declared_edges;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        if (trimmed.front() == '#') {
            std::int64_t value = 0;
            for (const auto* key : {"node_count=", "edge_count="}) {
                const auto pos = trimmed.find(key);
                if (pos == std::string_view::npos) continue;
                auto rest = trimmed.substr(pos + std::char_traits<char>::length(key));
                rest = rest.substr(0, rest.find(' '));
                if (!text::parse_int64(rest, value) || value < 0) throw ParseError(line_no, "bad header count");
                (std::string_view(key) == "node_count=" ? declared_nodes : declared_edges) = static_cast<std::size_t>(value);
            }
            continue;
        }
        const auto cells = text::split_tabs(line);
        if (cells.size() != 3) throw ParseError(line_no, "expected word_i<TAB>word_j<TAB>weight");
        std::int64_t w = 0;
        if (!text::parse_int64(cells[2], w)) throw ParseError(line_no, "weight is not an integer");
        if (w <= 0) throw ParseError(line_no, "weight must be positive");
        auto a = text::normalize_token(cells[0]);
        auto b = text::normalize_token(cells[1]);
        if (a.empty() || b.empty()) throw ParseError(line_no, "empty word");
        if (a == b) throw ParseError(line_no, "self-loop on '" + a + "'");
        edges.emplace_back(std::move(a), std::move(b), w);
    }
    if (edges.empty()) throw DataError("empty network file");

    auto net = AssociationNetwork::from_edges(edges);
    if (declared_nodes && *declared_nodes != net.node_count()) {
        throw DataError("header declares " + std::to_string(*declared_nodes) + " nodes, file has " +
                        std::to_string(net.node_count()));
    }
    if (declared_edges && *declared_edges != net.edge_count()) {
        throw DataError("header declares " + std::to_string(*declared_edges) + " edges, file has " +
                        std::to_string(net.edge_count()));
    }
    if (!net.is_connected()) throw DataError("network file is not connected");
    return net;
}

}  // namespace assocnet
