#include "printqc/error.hpp"

namespace printqc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EvenKernel: return "EvenKernel";
    case Errc::DegenerateHistogram: return "DegenerateHistogram";
    case Errc::NotBinary: return "NotBinary";
    case Errc::NoTextRegion: return "NoTextRegion";
    case Errc::NoGlyphs: return "NoGlyphs";
    case Errc::MalformedHocr: return "MalformedHocr";
    case Errc::EmptySet: return "EmptySet";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::InvalidLabel: return "InvalidLabel";
    case Errc::EmptyTrainingSet: return "EmptyTrainingSet";
    case Errc::CorruptStore: return "CorruptStore";
    case Errc::SpecError: return "SpecError";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

HocrError::HocrError(std::size_t line, std::size_t offset, const std::string& message)
    : Error(Errc::MalformedHocr,
            "line " + std::to_string(line) + ", offset " + std::to_string(offset) + ": " + message),
      line_(line),
      offset_(offset) {}

}  // namespace printqc
