#include "setavg/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "setavg/error.hpp"

namespace setavg {

namespace {

class Reader {
 public:
  Reader(std::vector<char> data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int integer() {
    skip_space();
    if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      fail("expected an integer");
    }
    long v = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      v = v * 10 + (data_[pos_++] - '0');
      if (v > 1 << 30) fail("integer too large");
    }
    return static_cast<int>(v);
  }

  // P1 allows bits without separators.
  int bit() {
    skip_space();
    if (pos_ >= data_.size()) fail("truncated bitmap");
    const char c = data_[pos_++];
    if (c != '0' && c != '1') fail("bad PBM digit");
    return c - '0';
  }

  // Exactly one whitespace byte separates the header from raster data.
  void end_header() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      fail("malformed header");
    }
    ++pos_;
  }

  unsigned char byte() {
    if (pos_ >= data_.size()) fail("truncated raster data");
    return static_cast<unsigned char>(data_[pos_++]);
  }

  std::string magic() {
    if (data_.size() < 2 || data_[0] != 'P') fail("not a PNM file");
    pos_ = 2;
    return std::string(data_.begin(), data_.begin() + 2);
  }

  [[noreturn]] void fail(const std::string& what) const { throw IoError(path_ + ": " + what); }

 private:
  std::vector<char> data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

Raster read_pnm(const std::string& path, int threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader rd(std::move(data), path);

  const std::string magic = rd.magic();
  if (magic != "P1" && magic != "P2" && magic != "P4" && magic != "P5") {
    rd.fail("unsupported magic number " + magic);
  }
  const int w = rd.integer();
  const int h = rd.integer();
  if (w <= 0 || h <= 0) rd.fail("empty image");
  const bool pgm = magic == "P2" || magic == "P5";
  int maxval = 1;
  if (pgm) {
    maxval = rd.integer();
    if (maxval <= 0 || maxval > 65535) rd.fail("bad maxval");
  }

  Geometry g;
  g.width = w;
  g.height = h;
  Raster out(g);
  const std::size_t n = g.cell_count();
  if (magic == "P1") {
    for (std::size_t i = 0; i < n; ++i) out.set_at(i, rd.bit() == 1);
  } else if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) out.set_at(i, rd.integer() > threshold);
  } else if (magic == "P4") {
    rd.end_header();
    const int row_bytes = (w + 7) / 8;
    for (int y = 0; y < h; ++y) {
      for (int b = 0; b < row_bytes; ++b) {
        const unsigned char v = rd.byte();
        for (int k = 0; k < 8 && b * 8 + k < w; ++k) out.set(b * 8 + k, y, (v >> (7 - k)) & 1);
      }
    }
  } else {
    rd.end_header();
    for (std::size_t i = 0; i < n; ++i) {
      int v = rd.byte();
      if (maxval > 255) v = (v << 8) | rd.byte();
      out.set_at(i, v > threshold);
    }
  }
  return out;
}

void write_pnm(const std::string& path, const Raster& r, PnmFormat format) {
  std::ostringstream os;
  const int w = r.width();
  const int h = r.height();
  switch (format) {
    case PnmFormat::P1:
      os << "P1\n" << w << ' ' << h << '\n';
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) os << (x ? " " : "") << (r.get(x, y) ? '1' : '0');
        os << '\n';
      }
      break;
    case PnmFormat::P2:
      os << "P2\n" << w << ' ' << h << "\n255\n";
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) os << (x ? " " : "") << (r.get(x, y) ? 255 : 0);
        os << '\n';
      }
      break;
    case PnmFormat::P4:
      os << "P4\n" << w << ' ' << h << '\n';
      for (int y = 0; y < h; ++y) {
        for (int b = 0; b < (w + 7) / 8; ++b) {
          unsigned char v = 0;
          for (int k = 0; k < 8 && b * 8 + k < w; ++k) {
            if (r.get(b * 8 + k, y)) v |= static_cast<unsigned char>(1u << (7 - k));
          }
          os.put(static_cast<char>(v));
        }
      }
      break;
    case PnmFormat::P5:
      os << "P5\n" << w << ' ' << h << "\n255\n";
      for (std::size_t i = 0; i < r.size(); ++i) os.put(r.at(i) ? char(255) : char(0));
      break;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  const std::string bytes = os.str();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path + ": write failed");
}

PnmFormat parse_pnm_format(const std::string& name) {
  if (name == "pbm" || name == "P4") return PnmFormat::P4;
  if (name == "pgm" || name == "P5") return PnmFormat::P5;
  if (name == "P1") return PnmFormat::P1;
  if (name == "P2") return PnmFormat::P2;
  throw InvalidArgumentError("unknown image format " + name);
}

}  // namespace setavg
