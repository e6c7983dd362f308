#pragma once

namespace mmes {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace mmes
