#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace raycut {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

std::string encode_png_gray8(const GrayImage& image);
GrayImage decode_png_gray8(std::string_view png);

}  // namespace raycut
