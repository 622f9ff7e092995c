#pragma once

namespace chemotax {

inline constexpr const char* kVersion = "chemotax 0.1.0";

} // namespace chemotax
