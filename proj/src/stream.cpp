// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "assocnet/stream.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "assocnet/error.hpp"
#include "assocnet/text.hpp"

namespace assocnet {

std::string to_string(CostMode mode) { return mode == CostMode::unit ? "unit" : "inverse_weight"; }

std::optional<CostMode> parse_cost_mode(std::string_view name) {
    if (name == "unit") return CostMode::unit;
    if (name == "inverse_weight") return CostMode::inverse_weight;
    return std::nullopt;
}

std::vector<std::string> MindsetStream::nodes() const {
    std::set<std::string> seen;
    for (const auto& p : paths) seen.insert(p.begin(), p.end());
    return {seen.begin(), seen.end()};
}

namespace {

bool same_cost(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

MindsetStream extract_stream(const AssociationNetwork& net, const std::string& prime, const std::string& target,
                             CostMode mode, int max_paths) {
    if (max_paths < 1) throw ConfigError("max_paths must be >= 1");
    const auto source = net.find(prime);
    if (!source) throw DataError("missing prime: '" + prime + "' is not a node of the network");
    const auto sink = net.find(target);
    if (!sink) throw DataError("missing target: '" + target + "' is not a node of the network");
    if (*source == *sink) throw DataError("degenerate stream: prime and target are both '" + prime + "'");

    const std::size_t n = net.node_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<bool> settled(n, false);

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(*source)] = 0.0;
    queue.emplace(0.0, *source);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        const auto ui = static_cast<std::size_t>(u);
        if (settled[ui]) continue;
        settled[ui] = true;
        if (u == *sink) break;
        const auto nbrs = net.neighbors(u);
        const auto ws = net.weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const auto vi = static_cast<std::size_t>(nbrs[k]);
            if (settled[vi]) continue;
            const double cand = d + (mode == CostMode::unit ? 1.0 : 1.0 / static_cast<double>(ws[k]));
            if (dist[vi] < inf && same_cost(cand, dist[vi])) {
                preds[vi].push_back(u);
            } else if (cand < dist[vi]) {
                dist[vi] = cand;
                preds[vi].assign(1, u);
                queue.emplace(cand, nbrs[k]);
            }
        }
    }
    if (!std::isfinite(dist[static_cast<std::size_t>(*sink)])) {
        throw DataError("no path from '" + prime + "' to '" + target + "'");
    }

    // successor lists of the predecessor DAG, restricted to nodes that reach the sink
    std::vector<std::vector<NodeId>> succ(n);
    std::vector<bool> on_dag(n, false);
    std::vector<NodeId> stack{*sink};
    on_dag[static_cast<std::size_t>(*sink)] = true;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : preds[static_cast<std::size_t>(v)]) {
            succ[static_cast<std::size_t>(u)].push_back(v);
            if (!on_dag[static_cast<std::size_t>(u)]) {
                on_dag[static_cast<std::size_t>(u)] = true;
                stack.push_back(u);
            }
        }
    }
    // ids follow label order, so sorting ids sorts words
    for (auto& s : succ) std::sort(s.begin(), s.end());

    MindsetStream stream;
    stream.prime = prime;
    stream.target = target;
    stream.cost_mode = mode;
    stream.cost = dist[static_cast<std::size_t>(*sink)];

    std::vector<NodeId> path{*source};
    std::function<void()> walk = [&] {
        if (stream.truncated) return;
        const NodeId u = path.back();
        if (u == *sink) {
            if (static_cast<int>(stream.paths.size()) == max_paths) {
                stream.truncated = true;
                return;
            }
            std::vector<std::string> words;
            words.reserve(path.size());
            for (NodeId id : path) words.push_back(net.label(id));
            stream.paths.push_back(std::move(words));
            return;
        }
        for (NodeId v : succ[static_cast<std::size_t>(u)]) {
            path.push_back(v);
            walk();
            path.pop_back();
        }
    };
    walk();

    std::set<std::tuple<std::string, std::string, Weight>> edges;
    for (const auto& p : stream.paths) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const auto w = net.edge_weight(*net.find(p[i]), *net.find(p[i + 1]));
            const auto& a = std::min(p[i], p[i + 1]);
            const auto& b = std::max(p[i], p[i + 1]);
            edges.emplace(a, b, *w);
        }
    }
    stream.edges.assign(edges.begin(), edges.end());
    return stream;
}

ValenceClass classify_valence(std::optional<double> valence) {
    if (!valence) return ValenceClass::neutral;
    if (*valence >= 0.6) return ValenceClass::positive;
    if (*valence <= 0.4) return ValenceClass::negative;
    return ValenceClass::neutral;
}

std::string_view to_string(ValenceClass c) {
    switch (c) {
        case ValenceClass::positive: return "positive";
        case ValenceClass::neutral: return "neutral";
        case ValenceClass::negative: return "negative";
    }
    return "neutral";
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

const char* fill_for(ValenceClass c) {
    switch (c) {
        case ValenceClass::positive: return "#4393c3";
        case ValenceClass::negative: return "#d6604d";
        case ValenceClass::neutral: break;
    }
    return "#f0f0f0";
}

}  // namespace

std::string render_dot(const MindsetStream& stream, const Lexicon& lex) {
    std::ostringstream out;
    out << "graph mindset_stream {\n";
    out << "  graph [label=" << quoted(stream.prime + " -- " + stream.target) << ", labelloc=t, cost_mode="
        << quoted(to_string(stream.cost_mode)) << "];\n";
    out << "  node [shape=ellipse, style=filled, fontname=\"Helvetica\"];\n";
    for (const auto& word : stream.nodes()) {
        const auto cls = classify_valence(lex.valence_of(word));
        out << "  " << quoted(word) << " [class=" << quoted(std::string(to_string(cls)))
            << ", fillcolor=" << quoted(fill_for(cls));
        if (word == stream.prime) out << ", shape=doublecircle, xlabel=\"prime\"";
        if (word == stream.target) out << ", shape=doublecircle, xlabel=\"target\"";
        out << "];\n";
    }
    for (const auto& [a, b, w] : stream.edges) {
        out << "  " << quoted(a) << " -- " << quoted(b) << " [label=\"" << w << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string stream_to_json(const MindsetStream& stream, const Lexicon& lex) {
    using nlohmann::json;
    json doc;
    doc["prime"] = stream.prime;
    doc["target"] = stream.target;
    doc["cost_mode"] = to_string(stream.cost_mode);
    doc["cost"] = stream.cost;
    doc["hop_length"] = stream.hop_length();
    doc["truncated"] = stream.truncated;
    json paths = json::array();
    for (const auto& p : stream.paths) {
        paths.push_back({{"nodes", p}, {"hop_length", p.size() - 1}});
    }
    doc["paths"] = std::move(paths);
    json edges = json::array();
    for (const auto& [a, b, w] : stream.edges) edges.push_back({a, b, w});
    doc["edges"] = std::move(edges);
    json valence = json::object();
    for (const auto& word : stream.nodes()) {
        const auto v = lex.valence_of(word);
        valence[word] = {{"valence", v ? json(*v) : json(nullptr)},
                         {"class", std::string(to_string(classify_valence(v)))}};
    }
    doc["nodes"] = std::move(valence);
    return doc.dump(2) + "\n";
}

}  // namespace assocnet
