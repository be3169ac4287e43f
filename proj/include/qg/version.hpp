#pragma once

namespace qg {

inline constexpr const char* version = "0.1.0";

}
