#ifndef PERCOLAB_ERROR_HPP_
#define PERCOLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace percolab {

enum class ErrorCode {
  InvalidArgument,
  ForeignPoint,
  DegenerateCell,
  RadiusExceeded,
  BallTooLarge,
  MeasureNotInduced,
  RadiusTooSmall,
  BracketNotStraddling,
  RegionTooThin,
  EmptySample,
};

// Every library failure carries a code so the CLI can map it onto an exit
// status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) {
    fail(ErrorCode::InvalidArgument, what);
  }
}

}  // namespace percolab

#endif  // PERCOLAB_ERROR_HPP_
