#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gausskey {

/// Bob's detection strategy within a two-mode block.
enum class Protocol {
  no_switching,     ///< heterodyne on both modes
  switching,        ///< homodyne, same quadrature on both modes of a block
  switching_mixed,  ///< homodyne, q on one mode and p on the other
};

inline std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::no_switching: return "noswitching";
    case Protocol::switching: return "switching";
    case Protocol::switching_mixed: return "switching-mixed";
  }
  return "unknown";
}

inline std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "noswitching" || s == "no-switching") return Protocol::no_switching;
  if (s == "switching") return Protocol::switching;
  if (s == "switching-mixed") return Protocol::switching_mixed;
  return std::nullopt;
}

}  // namespace gausskey
