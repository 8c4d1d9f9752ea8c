#ifndef WCOH_VERSION_HPP
#define WCOH_VERSION_HPP

namespace wcoh {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
