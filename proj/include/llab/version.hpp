#ifndef LLAB_VERSION_HPP
#define LLAB_VERSION_HPP

namespace llab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace llab

#endif  // LLAB_VERSION_HPP
