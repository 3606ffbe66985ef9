// SPDX-License-Identifier: MIT
#pragma once

namespace capdisc {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace capdisc
