#pragma once

namespace fsb {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fsb
