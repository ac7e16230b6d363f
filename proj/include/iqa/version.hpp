#pragma once

namespace iqa {

inline constexpr const char* kVersion = "0.1.0";

} // namespace iqa
