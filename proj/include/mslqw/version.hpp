/*
 * version.hpp — library version constant
 */

#pragma once

namespace mslqw {

inline constexpr const char* version_string = "0.1.0";

} // namespace mslqw
