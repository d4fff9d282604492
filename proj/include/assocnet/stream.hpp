// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "assocnet/ingest.hpp"
#include "assocnet/network.hpp"

namespace assocnet {

enum class CostMode {
    inverse_weight,  // edge cost 1 / weight: strong associations are short
    unit,            // hop count
};

std::string to_string(CostMode mode);
std::optional<CostMode> parse_cost_mode(std::string_view name);

/// Union of the co-minimal prime -> target paths of a network.
struct MindsetStream {
    std::string prime;
    std::string target;
    CostMode cost_mode = CostMode::inverse_weight;
    double cost = 0.0;
    /// Lexicographic by node labels; each starts at prime and ends at target.
    std::vector<std::vector<std::string>> paths;
    /// Union of the path edges, each as (a, b, weight) with a < b, sorted.
    std::vector<std::tuple<std::string, std::string, Weight>> edges;
    /// True when more co-minimal paths exist than were enumerated.
    bool truncated = false;

    std::vector<std::string> nodes() const;
    std::size_t hop_length() const { return paths.empty() ? 0 : paths.front().size() - 1; }
};

inline constexpr int kDefaultMaxPaths = 16;

/// Costs within a relative 1e-12 of each other count as equal, so paths whose
/// inverse-weight sums differ only by rounding are all reported.
MindsetStream extract_stream(const AssociationNetwork& net, const std::string& prime, const std::string& target,
                             CostMode mode = CostMode::inverse_weight, int max_paths = kDefaultMaxPaths);

enum class ValenceClass { positive, neutral, negative };

/// positive at >= 0.6, negative at <= 0.4, neutral otherwise or when unrated.
ValenceClass classify_valence(std::optional<double> valence);
std::string_view to_string(ValenceClass c);

/// Undirected DOT graph; node fill encodes the valence class, edges are
/// labeled with weights, prime and target are drawn as double circles.
std::string render_dot(const MindsetStream& stream, const Lexicon& lex);

/// Path node lists, cost, hop length and per-node valence.
std::string stream_to_json(const MindsetStream& stream, const Lexicon& lex);

}  // namespace assocnet
