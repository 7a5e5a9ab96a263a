// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/labels.hpp"

#include "casesift/text.hpp"

namespace casesift {

std::optional<Label> parse_label(std::string_view s) {
  const auto v = text::to_lower(text::trim(s));
  if (v == "sj" || v == "yes" || v == "1" || v == "true") return Label::sj;
  if (v == "non-sj" || v == "nonsj" || v == "non_sj" || v == "no" || v == "0" || v == "false") return Label::non_sj;
  return std::nullopt;
}

}  // namespace casesift
