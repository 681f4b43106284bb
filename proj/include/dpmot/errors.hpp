// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpmot {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct DegenerateGeometry : Error { using Error::Error; };
struct BehindCamera : Error { using Error::Error; };

// filtering
struct NonFiniteState : Error { using Error::Error; };
struct SingularInnovation : Error { using Error::Error; };

// association
struct ZeroVector : Error { using Error::Error; };
struct UnsortedInput : Error { using Error::Error; };

// tracking
struct InvalidFrameOrder : Error { using Error::Error; };

// metrics
struct EmptyGroundTruth : Error { using Error::Error; };
struct MismatchedIndexSets : Error { using Error::Error; };

// i/o
struct ParseError : Error {
  ParseError(const std::string& path, int line_no, const std::string& reason)
      : Error(path + ":" + std::to_string(line_no) + ": " + reason), line(line_no) {}
  int line;
};

struct EmptyFile : Error { using Error::Error; };
struct MissingField : Error { using Error::Error; };
struct BadMagic : Error { using Error::Error; };

struct TruncatedFile : Error {
  TruncatedFile(const std::string& what_arg, std::size_t byte_offset)
      : Error(what_arg + " (byte offset " + std::to_string(byte_offset) + ")"),
        offset(byte_offset) {}
  std::size_t offset;
};

struct DimMismatch : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace dpmot
