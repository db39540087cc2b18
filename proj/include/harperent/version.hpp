#pragma once

#include <string_view>

namespace harperent {

inline constexpr std::string_view kToolName = "harper-ent";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace harperent
