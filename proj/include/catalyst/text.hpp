// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace catalyst {

// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
std::string format_double(double v);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Throws ConfigError naming `what` when `s` is not a complete number.
double parse_double(std::string_view s, std::string_view what);
long parse_long(std::string_view s, std::string_view what);

}  // namespace catalyst
