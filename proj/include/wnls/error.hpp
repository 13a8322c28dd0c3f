// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wnls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field contains NaN or Inf samples.
class DivergedField : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Littlewood-Paley frequency N <= 0.
class InvalidFrequency : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A zero coupling where a weighted-gradient structure needs a nonzero one.
class InvalidCoupling : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnsupportedDimension : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Blowup certification requested for couplings that are not both negative.
class NotFocusing : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Too few samples to form a verdict.
class NotEnoughData : public Error {
 public:
  using Error::Error;
};

/// Malformed checkpoint. `offset()` is the byte position where decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedVersion : public FormatError {
 public:
  UnsupportedVersion(unsigned version, std::size_t offset)
      : FormatError("unsupported checkpoint version " + std::to_string(version), offset),
        version_(version) {}
  unsigned version() const noexcept { return version_; }

 private:
  unsigned version_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wnls
