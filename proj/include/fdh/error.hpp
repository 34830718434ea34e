#pragma once

#include <stdexcept>
#include <string>

namespace fdh {

enum class Errc {
  NotSorted,
  DuplicateX,
  Empty,
  QueryInsideHull,
  UnknownPoint,
  AlreadyDeleted,
  BucketOverflow,
  MalformedLine,
  CoordinateOutOfRange,
  MalformedWorkload,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::NotSorted: return "NotSorted";
    case Errc::DuplicateX: return "DuplicateX";
    case Errc::Empty: return "Empty";
    case Errc::QueryInsideHull: return "QueryInsideHull";
    case Errc::UnknownPoint: return "UnknownPoint";
    case Errc::AlreadyDeleted: return "AlreadyDeleted";
    case Errc::BucketOverflow: return "BucketOverflow";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::CoordinateOutOfRange: return "CoordinateOutOfRange";
    case Errc::MalformedWorkload: return "MalformedWorkload";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fdh
