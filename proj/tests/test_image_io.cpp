#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rendermem/image_io.hpp"
#include "rendermem/rng.hpp"

using namespace rendermem;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("PPM payload bytes are exactly as specified") {
  const std::string path = temp_path("rendermem_io_test.ppm");
  write_ppm(path, 2, 1, {255, 0, 0, 0, 255, 0});
  const std::string bytes = file_bytes(path);
  const std::string expected = std::string("P6\n2 1\n255\n") +
                               '\xFF' + '\x00' + '\x00' + '\x00' + '\xFF' + '\x00';
  CHECK(bytes == expected);
  CHECK(encode_ppm(2, 1, {255, 0, 0, 0, 255, 0}) == expected);
  std::remove(path.c_str());
}

TEST_CASE("PGM 16-bit samples are big-endian") {
  const std::string path = temp_path("rendermem_io_test.pgm");
  write_pgm16(path, 2, 1, {0, 3});
  const std::string bytes = file_bytes(path);
  std::string expected = "P5\n2 1\n65535\n";
  expected += '\x00';
  expected += '\x00';
  expected += '\x00';
  expected += '\x03';
  CHECK(bytes == expected);
  std::remove(path.c_str());
}

TEST_CASE("write then read restores buffers exactly") {
  Rng rng(1234);
  const int w = 37, h = 23;
  std::vector<uint8_t> rgb(static_cast<size_t>(w) * h * 3);
  std::vector<uint16_t> ids(static_cast<size_t>(w) * h);
  for (auto& v : rgb) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
  for (auto& v : ids) v = static_cast<uint16_t>(rng.uniform_int(0, 65535));

  const std::string ppm = temp_path("rendermem_roundtrip.ppm");
  const std::string pgm = temp_path("rendermem_roundtrip.pgm");
  write_ppm(ppm, w, h, rgb);
  write_pgm16(pgm, w, h, ids);

  const RgbImage img = read_ppm(ppm);
  CHECK(img.width == w);
  CHECK(img.height == h);
  CHECK(img.pixels == rgb);

  const IdImage labels = read_pgm16(pgm);
  CHECK(labels.width == w);
  CHECK(labels.height == h);
  CHECK(labels.labels == ids);

  std::remove(ppm.c_str());
  std::remove(pgm.c_str());
}

TEST_CASE("size mismatches and unreadable files raise IoError") {
  CHECK_THROWS_AS(write_ppm(temp_path("x.ppm"), 2, 2, {1, 2, 3}), IoError);
  CHECK_THROWS_AS(write_pgm16(temp_path("x.pgm"), 2, 2, {1}), IoError);
  CHECK_THROWS_AS(read_ppm("/nonexistent/nowhere.ppm"), IoError);
  CHECK_THROWS_AS(write_ppm("/nonexistent/dir/file.ppm", 1, 1, {0, 0, 0}), IoError);
}

TEST_CASE("truncated payload is detected") {
  const std::string path = temp_path("rendermem_truncated.ppm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n4 4\n255\nxx";
  }
  CHECK_THROWS_AS(read_ppm(path), IoError);
  std::remove(path.c_str());
}
