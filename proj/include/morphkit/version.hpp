#pragma once

namespace morphkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace morphkit
