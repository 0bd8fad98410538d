#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace printqc {

enum class Errc {
  EvenKernel,
  DegenerateHistogram,
  NotBinary,
  NoTextRegion,
  NoGlyphs,
  MalformedHocr,
  EmptySet,
  DegenerateData,
  InvalidLabel,
  EmptyTrainingSet,
  CorruptStore,
  SpecError,
  OutOfBounds,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
/// what() is prefixed with the code name, e.g. "NoGlyphs: empty image".
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// MalformedHocr with the 1-based line and byte offset of the offending
/// title attribute.
class HocrError : public Error {
 public:
  HocrError(std::size_t line, std::size_t offset, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

}  // namespace printqc
