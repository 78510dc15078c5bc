#pragma once

namespace refsde {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace refsde
