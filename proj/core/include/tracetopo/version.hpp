#pragma once

namespace tracetopo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tracetopo
