#pragma once

namespace hadacov {

inline constexpr const char* version = "1.0.0";

}
