#pragma once

namespace cogsplit {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cogsplit
