#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "eigensal/error.hpp"
#include "eigensal/imagekit.hpp"

namespace eigensal {

namespace fs = std::filesystem;

namespace {

enum class FileKind { Png, Bmp, Pnm, Unknown };

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

FileKind sniff(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::array<std::uint8_t, 8> kPngSig = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSig.begin(), kPngSig.end(), bytes.begin())) {
    return FileKind::Png;
  }
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return FileKind::Bmp;
  if (bytes.size() >= 2 && bytes[0] == 'P' && std::strchr("2356", bytes[1]) != nullptr) {
    return FileKind::Pnm;
  }
  return FileKind::Unknown;
}

// Interleaved 8-bit pixels with 1 (gray) or 3 (RGB) samples each.
RgbImage from_interleaved(std::size_t height, std::size_t width, std::size_t channels,
                          const std::uint8_t* data) {
  Plane r(height, width), g(height, width), b(height, width);
  for (std::size_t i = 0; i < height * width; ++i) {
    const std::uint8_t* px = data + i * channels;
    r.values()[i] = px[0];
    g.values()[i] = channels == 3 ? px[1] : px[0];
    b.values()[i] = channels == 3 ? px[2] : px[0];
  }
  return RgbImage(std::move(r), std::move(g), std::move(b));
}

RgbImage decode_png(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::CorruptData, path.string() + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = color ? 3 : 1;
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw Error(ErrorCode::CorruptData, path.string() + ": empty image");
  }
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::CorruptData, path.string() + ": " + msg);
  }
  return from_interleaved(image.height, image.width, channels, buffer.data());
}

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t le16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

RgbImage decode_bmp(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  const std::string name = path.string();
  if (bytes.size() < 54) throw Error(ErrorCode::CorruptData, name + ": truncated BMP header");
  const std::uint32_t data_offset = le32(bytes, 10);
  const std::uint32_t header_size = le32(bytes, 14);
  if (header_size < 40) throw Error(ErrorCode::UnsupportedFormat, name + ": OS/2 BMP headers");
  const auto raw_width = static_cast<std::int32_t>(le32(bytes, 18));
  const auto raw_height = static_cast<std::int32_t>(le32(bytes, 22));
  const std::uint16_t bpp = le16(bytes, 28);
  const std::uint32_t compression = le32(bytes, 30);
  if (compression != 0 && !(compression == 3 && bpp == 32)) {
    throw Error(ErrorCode::UnsupportedFormat, name + ": compressed BMP");
  }
  if (bpp != 8 && bpp != 24 && bpp != 32) {
    throw Error(ErrorCode::UnsupportedFormat, name + ": " + std::to_string(bpp) + "-bit BMP");
  }
  if (raw_width <= 0 || raw_height == 0) throw Error(ErrorCode::CorruptData, name + ": bad BMP size");
  const bool top_down = raw_height < 0;
  const std::size_t width = static_cast<std::size_t>(raw_width);
  const std::size_t height = static_cast<std::size_t>(top_down ? -static_cast<std::int64_t>(raw_height) : raw_height);

  std::vector<std::array<std::uint8_t, 3>> palette;
  if (bpp == 8) {
    std::uint32_t colors = le32(bytes, 46);
    if (colors == 0) colors = 256;
    const std::size_t pal_at = 14 + header_size;
    if (pal_at + 4ull * colors > bytes.size()) throw Error(ErrorCode::CorruptData, name + ": truncated palette");
    for (std::uint32_t i = 0; i < colors; ++i) {
      const std::size_t at = pal_at + 4ull * i;
      palette.push_back({bytes[at + 2], bytes[at + 1], bytes[at]});
    }
  }

  const std::size_t bytes_pp = bpp / 8;
  const std::size_t stride = (width * bytes_pp + 3) / 4 * 4;
  if (data_offset + stride * height > bytes.size()) {
    throw Error(ErrorCode::CorruptData, name + ": truncated pixel data");
  }
  std::vector<std::uint8_t> rgb(height * width * 3);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t src_row = top_down ? y : height - 1 - y;
    const std::uint8_t* src = bytes.data() + data_offset + src_row * stride;
    for (std::size_t x = 0; x < width; ++x) {
      std::uint8_t* dst = rgb.data() + (y * width + x) * 3;
      if (bpp == 8) {
        const std::uint8_t idx = src[x];
        if (idx >= palette.size()) throw Error(ErrorCode::CorruptData, name + ": palette index");
        std::copy(palette[idx].begin(), palette[idx].end(), dst);
      } else {
        const std::uint8_t* px = src + x * bytes_pp;
        dst[0] = px[2];
        dst[1] = px[1];
        dst[2] = px[0];
      }
    }
  }
  return from_interleaved(height, width, 3, rgb.data());
}

class PnmReader {
 public:
  PnmReader(const std::vector<std::uint8_t>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  std::size_t next_uint() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::CorruptData, name_ + ": malformed PNM header");
    }
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1u << 24)) throw Error(ErrorCode::CorruptData, name_ + ": PNM value too large");
    }
    return v;
  }

  // Binary payload starts after exactly one whitespace byte.
  std::size_t payload_start() const { return pos_ + 1; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 2;
};

RgbImage decode_pnm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  const std::string name = path.string();
  const char kind = static_cast<char>(bytes[1]);
  const bool gray = kind == '2' || kind == '5';
  const bool ascii = kind == '2' || kind == '3';
  PnmReader reader(bytes, name);
  const std::size_t width = reader.next_uint();
  const std::size_t height = reader.next_uint();
  const std::size_t maxval = reader.next_uint();
  if (width == 0 || height == 0 || maxval == 0) throw Error(ErrorCode::CorruptData, name + ": bad PNM header");
  if (maxval > 255) throw Error(ErrorCode::UnsupportedFormat, name + ": 16-bit PNM");
  const std::size_t channels = gray ? 1 : 3;
  const std::size_t count = width * height * channels;
  std::vector<std::uint8_t> samples(count);
  if (ascii) {
    for (auto& s : samples) {
      const std::size_t v = reader.next_uint();
      if (v > maxval) throw Error(ErrorCode::CorruptData, name + ": sample exceeds maxval");
      s = static_cast<std::uint8_t>(v);
    }
  } else {
    const std::size_t start = reader.payload_start();
    if (start + count > bytes.size()) throw Error(ErrorCode::CorruptData, name + ": truncated PNM data");
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(start), count, samples.begin());
  }
  if (maxval != 255) {
    for (auto& s : samples) {
      if (s > maxval) throw Error(ErrorCode::CorruptData, name + ": sample exceeds maxval");
      s = static_cast<std::uint8_t>((s * 255u * 2 + maxval) / (2 * maxval));
    }
  }
  return from_interleaved(height, width, channels, samples.data());
}

void write_png(const fs::path& path, std::size_t height, std::size_t width, bool color,
               const std::vector<std::uint8_t>& pixels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::IoFailure, path.string() + ": " + msg);
  }
}

}  // namespace

RgbImage load_image(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::MissingFile, path.string());
  }
  const auto bytes = read_bytes(path);
  switch (sniff(bytes)) {
    case FileKind::Png: return decode_png(bytes, path);
    case FileKind::Bmp: return decode_bmp(bytes, path);
    case FileKind::Pnm: return decode_pnm(bytes, path);
    case FileKind::Unknown: break;
  }
  throw Error(ErrorCode::UnsupportedFormat, path.string() + ": not PNG, BMP or PPM");
}

std::uint8_t quantize_unit(double v) noexcept {
  const double scaled = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

void save_plane(const Plane& p, const fs::path& path) {
  const Plane unit = normalize_unit(p);
  std::vector<std::uint8_t> pixels(unit.size());
  std::transform(unit.values().begin(), unit.values().end(), pixels.begin(), quantize_unit);
  write_png(path, p.height(), p.width(), false, pixels);
}

void save_binary(const BinaryMap& m, const fs::path& path) {
  std::vector<std::uint8_t> pixels(m.size());
  std::transform(m.bits().begin(), m.bits().end(), pixels.begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 255 : 0); });
  write_png(path, m.height(), m.width(), false, pixels);
}

void save_rgb(const RgbImage& img, const fs::path& path) {
  std::vector<std::uint8_t> pixels(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = std::floor(std::clamp(img.channel(c).values()[i], 0.0, 255.0) + 0.5);
      pixels[i * 3 + c] = static_cast<std::uint8_t>(std::min(v, 255.0));
    }
  }
  write_png(path, img.height(), img.width(), true, pixels);
}

}  // namespace eigensal
