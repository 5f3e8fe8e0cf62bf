#pragma once

namespace isacsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace isacsim
