#pragma once

namespace holorecon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace holorecon
