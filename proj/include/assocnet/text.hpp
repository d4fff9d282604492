// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace assocnet::text {

std::string_view trim(std::string_view s);

/// ASCII lowercase; bytes outside ASCII pass through untouched.
std::string lower(std::string_view s);

/// Trim then lowercase.
std::string normalize_token(std::string_view s);

/// Splits on TAB only. A trailing '\r' is stripped first.
std::vector<std::string_view> split_tabs(std::string_view line);

/// Shortest decimal text with 17 significant digits, round-trip exact.
std::string format_double(double value);

/// Parses a full string as a double; returns false on trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_int64(std::string_view s, std::int64_t& out);

/// 64-bit FNV-1a; used for cache keys only.
class Fnv1a {
public:
    Fnv1a& update(std::string_view bytes);
    Fnv1a& update(double value);
    Fnv1a& update(std::int64_t value);
    std::uint64_t digest() const noexcept { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace assocnet::text
