// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace casesift {

/// Binary case label; SJ is the positive class throughout.
enum class Label { sj, non_sj };

constexpr std::string_view to_string(Label l) noexcept { return l == Label::sj ? "SJ" : "non-SJ"; }

/// Accepts "SJ"/"non-SJ" in any case, plus "yes"/"no", "1"/"0" and "true"/"false".
std::optional<Label> parse_label(std::string_view s);

}  // namespace casesift
