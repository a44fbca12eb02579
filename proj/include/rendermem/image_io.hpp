#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rendermem/render.hpp"

namespace rendermem {

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // 3 * width * height
};

struct IdImage {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> labels;
};

// Binary PPM (P6, maxval 255), byte-exact across platforms.
void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb);
RgbImage read_ppm(const std::string& path);

// Binary PGM (P5, maxval 65535), big-endian 16-bit samples.
void write_pgm16(const std::string& path, int width, int height,
                 const std::vector<uint16_t>& values);
IdImage read_pgm16(const std::string& path);

// RGB buffer as PPM, ID buffer as 16-bit PGM.
void write_view(const RenderedView& view, const std::string& rgb_path,
                const std::string& id_path);

// In-memory PPM bytes (same format as write_ppm), for the wire protocol.
std::string encode_ppm(int width, int height, const std::vector<uint8_t>& rgb);

}  // namespace rendermem
