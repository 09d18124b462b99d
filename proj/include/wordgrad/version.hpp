#pragma once

namespace wordgrad {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wordgrad
