#include "quatcomp/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "quatcomp/errors.hpp"

namespace quatcomp {

namespace {

struct Header {
  int width = 0;
  int height = 0;
  std::size_t offset = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

Header parse_header(const std::string& bytes, const char* magic, const char* kind) {
  if (bytes.size() < 2 || bytes.compare(0, 2, magic) != 0) {
    throw IoError(std::string(kind) + ": missing magic number " + magic);
  }
  std::size_t pos = 2;
  long fields[3] = {0, 0, 0};
  for (long& field : fields) {
    bool saw_space = false;
    while (pos < bytes.size() && (is_space(bytes[pos]) || bytes[pos] == '#')) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        ++pos;
      }
      saw_space = true;
    }
    if (!saw_space || pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      throw IoError(std::string(kind) + ": malformed header");
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000) throw IoError(std::string(kind) + ": header value too large");
      ++pos;
    }
    field = value;
  }
  if (pos >= bytes.size() || !is_space(bytes[pos])) {
    throw IoError(std::string(kind) + ": header must end with one whitespace byte");
  }
  ++pos;
  if (fields[0] <= 0 || fields[1] <= 0) throw IoError(std::string(kind) + ": empty image");
  if (fields[2] != 255) throw IoError(std::string(kind) + ": only maxval 255 is supported");
  return {static_cast<int>(fields[0]), static_cast<int>(fields[1]), pos};
}

std::string header(const char* magic, int width, int height) {
  std::ostringstream os;
  os << magic << '\n' << width << ' ' << height << '\n' << 255 << '\n';
  return os.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

template <typename Image>
Image decode(const std::string& bytes, const char* magic, const char* kind, int channels) {
  const Header h = parse_header(bytes, magic, kind);
  const std::size_t expected = static_cast<std::size_t>(h.width) * h.height * channels;
  if (bytes.size() - h.offset != expected) {
    std::ostringstream os;
    os << kind << ": expected " << expected << " data bytes, found " << bytes.size() - h.offset;
    throw IoError(os.str());
  }
  Image out;
  out.width = h.width;
  out.height = h.height;
  out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.offset), bytes.end());
  return out;
}

template <typename Image>
std::string encode(const Image& image, const char* magic, const char* kind, int channels) {
  if (image.width <= 0 || image.height <= 0 ||
      image.data.size() != static_cast<std::size_t>(image.width) * image.height * channels) {
    throw IoError(std::string(kind) + ": raster size does not match dimensions");
  }
  std::string out = header(magic, image.width, image.height);
  out.append(image.data.begin(), image.data.end());
  return out;
}

}  // namespace

RgbImage decode_ppm(const std::string& bytes) { return decode<RgbImage>(bytes, "P6", "PPM", 3); }
std::string encode_ppm(const RgbImage& image) { return encode(image, "P6", "PPM", 3); }
RgbImage read_ppm(const std::filesystem::path& path) { return decode_ppm(read_file(path)); }
void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  write_file(path, encode_ppm(image));
}

GrayImage decode_pgm(const std::string& bytes) { return decode<GrayImage>(bytes, "P5", "PGM", 1); }
std::string encode_pgm(const GrayImage& image) { return encode(image, "P5", "PGM", 1); }
GrayImage read_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }
void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  write_file(path, encode_pgm(image));
}

QMatrixd to_qmatrix(const RgbImage& image) {
  QMatrixd out(image.height, image.width);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      const std::size_t at = 3 * (static_cast<std::size_t>(r) * image.width + c);
      out.im_i()(r, c) = image.data[at];
      out.im_j()(r, c) = image.data[at + 1];
      out.im_k()(r, c) = image.data[at + 2];
    }
  }
  return out;
}

RgbImage to_image(const QMatrixd& theta) {
  RgbImage out;
  out.height = static_cast<int>(theta.rows());
  out.width = static_cast<int>(theta.cols());
  out.data.resize(3 * static_cast<std::size_t>(theta.size()));
  auto quantize = [](double v) {
    return static_cast<std::uint8_t>(std::nearbyint(std::clamp(v, 0.0, 255.0)));
  };
  for (int r = 0; r < out.height; ++r) {
    for (int c = 0; c < out.width; ++c) {
      const std::size_t at = 3 * (static_cast<std::size_t>(r) * out.width + c);
      out.data[at] = quantize(theta.im_i()(r, c));
      out.data[at + 1] = quantize(theta.im_j()(r, c));
      out.data[at + 2] = quantize(theta.im_k()(r, c));
    }
  }
  return out;
}

}  // namespace quatcomp
