#pragma once

namespace nnspline {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nnspline
