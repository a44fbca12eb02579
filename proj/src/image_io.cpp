#include "rendermem/image_io.hpp"

#include <fstream>

namespace rendermem {

namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_pnm_int(std::istream& in, const std::string& path) {
  skip_space_and_comments(in);
  int value = 0;
  if (!(in >> value) || value < 0) {
    throw IoError("malformed PNM header in '" + path + "'");
  }
  return value;
}

}  // namespace

void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb) {
  if (width < 1 || height < 1 ||
      rgb.size() != static_cast<size_t>(width) * height * 3) {
    throw IoError("PPM buffer size does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << "P6\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()),
            static_cast<std::streamsize>(rgb.size()));
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

RgbImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::string magic;
  in >> magic;
  if (magic != "P6") {
    throw IoError("'" + path + "' is not a binary PPM");
  }
  RgbImage img;
  img.width = read_pnm_int(in, path);
  img.height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (maxval != 255 || img.width < 1 || img.height < 1) {
    throw IoError("unsupported PPM parameters in '" + path + "'");
  }
  in.get();  // single whitespace after maxval
  img.pixels.resize(static_cast<size_t>(img.width) * img.height * 3);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw IoError("truncated PPM payload in '" + path + "'");
  }
  return img;
}

void write_pgm16(const std::string& path, int width, int height,
                 const std::vector<uint16_t>& values) {
  if (width < 1 || height < 1 ||
      values.size() != static_cast<size_t>(width) * height) {
    throw IoError("PGM buffer size does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << "P5\n" << width << " " << height << "\n65535\n";
  std::vector<uint8_t> bytes;
  bytes.reserve(values.size() * 2);
  for (uint16_t v : values) {
    bytes.push_back(static_cast<uint8_t>(v >> 8));
    bytes.push_back(static_cast<uint8_t>(v & 0xff));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

IdImage read_pgm16(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::string magic;
  in >> magic;
  if (magic != "P5") {
    throw IoError("'" + path + "' is not a binary PGM");
  }
  IdImage img;
  img.width = read_pnm_int(in, path);
  img.height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (maxval != 65535 || img.width < 1 || img.height < 1) {
    throw IoError("unsupported PGM parameters in '" + path + "'");
  }
  in.get();
  const size_t n = static_cast<size_t>(img.width) * img.height;
  std::vector<uint8_t> bytes(n * 2);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw IoError("truncated PGM payload in '" + path + "'");
  }
  img.labels.resize(n);
  for (size_t i = 0; i < n; ++i) {
    img.labels[i] = static_cast<uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
  }
  return img;
}

void write_view(const RenderedView& view, const std::string& rgb_path,
                const std::string& id_path) {
  write_ppm(rgb_path, view.width, view.height, view.rgb);
  write_pgm16(id_path, view.width, view.height, view.ids);
}

std::string encode_ppm(int width, int height, const std::vector<uint8_t>& rgb) {
  if (width < 1 || height < 1 ||
      rgb.size() != static_cast<size_t>(width) * height * 3) {
    throw IoError("PPM buffer size does not match dimensions");
  }
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

}  // namespace rendermem
