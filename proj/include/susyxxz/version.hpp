#pragma once

namespace susyxxz {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace susyxxz
