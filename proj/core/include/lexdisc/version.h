#pragma once

namespace lexdisc {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace lexdisc
