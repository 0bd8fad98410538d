#pragma once

#include <filesystem>
#include <string>

#include "printqc/raster.hpp"

namespace printqc {

/// Reads an 8-bit gray or RGB(A) PNG; gray input is replicated into all
/// three channels. Throws Error(Io).
RgbImage read_png(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_png(const std::filesystem::path& path, const RgbImage& img);

/// In-memory PNG bytes.
std::string encode_png(const GrayImage& img);

}  // namespace printqc
