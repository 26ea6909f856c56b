#ifndef PERCOLAB_VERSION_HPP_
#define PERCOLAB_VERSION_HPP_

namespace percolab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace percolab

#endif  // PERCOLAB_VERSION_HPP_
