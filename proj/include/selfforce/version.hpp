#pragma once

namespace selfforce {

inline constexpr const char* version_string = "1.0.0";

}  // namespace selfforce
