#include "ibtree/world.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ibtree/errors.hpp"
#include "ibtree/infotheory.hpp"
#include "ibtree/quadtree.hpp"

namespace ibtree {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Header tokenizer: whitespace-separated tokens with '#' comments running to
/// end of line.
class PgmCursor {
 public:
  explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

  std::string_view token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
           bytes_[pos_] != '#') {
      ++pos_;
    }
    if (start == pos_) throw FormatError("malformed PGM header: unexpected end of data");
    return bytes_.substr(start, pos_ - start);
  }

  std::uint32_t number(const char* what) {
    const std::string_view tok = token();
    std::uint64_t v = 0;
    for (const char c : tok) {
      if (c < '0' || c > '9') throw FormatError("malformed PGM header: bad " + std::string(what));
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      if (v > 0xFFFFFFFFull) throw FormatError("malformed PGM header: " + std::string(what) + " too large");
    }
    return static_cast<std::uint32_t>(v);
  }

  // Exactly one whitespace byte separates the header from a P5 raster.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("malformed PGM header: missing separator before raster");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void check_simplex(std::span<const double> p, const std::string& what) {
  double sum = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument(what + " has a negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kInputTolerance) {
    throw std::invalid_argument(what + " sums to " + std::to_string(sum) + ", not 1");
  }
}

int depth_for_side(std::uint32_t side) {
  int l = 0;
  while ((std::uint32_t{1} << l) < side) ++l;
  return l;
}

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
  PgmCursor cur(bytes);
  const std::string_view magic = cur.token();
  if (magic != "P2" && magic != "P5") throw FormatError("malformed PGM header: magic must be P2 or P5");
  GrayImage img;
  img.width = cur.number("width");
  img.height = cur.number("height");
  img.maxval = cur.number("maxval");
  if (img.width == 0 || img.height == 0) throw FormatError("malformed PGM header: zero dimension");
  if (img.maxval == 0 || img.maxval > 65535) throw FormatError("malformed PGM header: maxval outside [1, 65535]");
  if (std::uint64_t{img.width} * img.height > (std::uint64_t{1} << 30)) {
    throw FormatError("malformed PGM header: image too large");
  }
  const std::size_t count = std::size_t{img.width} * img.height;
  img.pixels.resize(count);

  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t v = cur.number("sample");
      if (v > img.maxval) throw FormatError("PGM sample exceeds maxval");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
    return img;
  }

  cur.skip_single_space();
  const std::size_t bytes_per_sample = img.maxval > 255 ? 2 : 1;
  std::size_t pos = cur.position();
  if (bytes.size() - pos < count * bytes_per_sample) throw FormatError("PGM raster is truncated");
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t v = static_cast<unsigned char>(bytes[pos++]);
    if (bytes_per_sample == 2) v = (v << 8) | static_cast<unsigned char>(bytes[pos++]);
    if (v > img.maxval) throw FormatError("PGM sample exceeds maxval");
    img.pixels[i] = static_cast<std::uint16_t>(v);
  }
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) { return parse_pgm(slurp(path)); }

void write_pgm_ascii(std::ostream& os, const GrayImage& image) {
  os << "P2\n" << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  for (std::size_t r = 0; r < image.height; ++r) {
    for (std::size_t c = 0; c < image.width; ++c) {
      if (c > 0) os << (c % 16 == 0 ? '\n' : ' ');
      os << image.pixels[r * image.width + c];
    }
    os << '\n';
  }
}

void write_pgm_ascii(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  write_pgm_ascii(out, image);
  if (!out) throw FormatError("error writing " + path.string());
}

WorldMap::WorldMap(int depth_l, int y_alphabet_size, std::vector<double> relevance,
                   std::vector<double> prior)
    : depth_l_(depth_l), ny_(y_alphabet_size), relevance_(std::move(relevance)), prior_(std::move(prior)) {
  if (depth_l < 0 || depth_l > kMaxDepth) throw std::invalid_argument("world depth out of range");
  if (y_alphabet_size < 2) throw std::invalid_argument("relevant variable needs at least 2 outcomes");
  const std::size_t cells = std::size_t{1} << (2 * depth_l);
  if (prior_.size() != cells) {
    throw std::invalid_argument("prior has " + std::to_string(prior_.size()) + " cells, expected " +
                                std::to_string(cells));
  }
  if (relevance_.size() != cells * static_cast<std::size_t>(ny_)) {
    throw std::invalid_argument("relevance table size does not match cells x alphabet");
  }
  check_simplex(prior_, "cell prior");
  for (std::size_t x = 0; x < cells; ++x) {
    check_simplex(this->relevance(x), "p(y|x) of cell " + std::to_string(x));
  }
}

WorldMap WorldMap::binary(int depth_l, std::span<const double> p_y1, std::span<const double> prior) {
  if (depth_l < 0 || depth_l > kMaxDepth) throw std::invalid_argument("world depth out of range");
  const std::size_t cells = std::size_t{1} << (2 * depth_l);
  if (p_y1.size() != cells) throw std::invalid_argument("p(y=1|x) needs one entry per cell");
  std::vector<double> rel(2 * cells);
  for (std::size_t x = 0; x < cells; ++x) {
    rel[2 * x] = 1.0 - p_y1[x];
    rel[2 * x + 1] = p_y1[x];
  }
  std::vector<double> px;
  if (prior.empty()) {
    px.assign(cells, 1.0 / static_cast<double>(cells));
  } else {
    px.assign(prior.begin(), prior.end());
  }
  return WorldMap(depth_l, 2, std::move(rel), std::move(px));
}

WorldMap WorldMap::with_prior(std::vector<double> prior) const {
  return WorldMap(depth_l_, ny_, relevance_, std::move(prior));
}

WorldMap world_from_image(const GrayImage& image, bool invert) {
  if (image.width != image.height) {
    throw FormatError("image is not square (" + std::to_string(image.width) + "x" +
                      std::to_string(image.height) + ")");
  }
  const std::uint32_t side = image.width;
  if ((side & (side - 1)) != 0) {
    throw FormatError("side not a power of two (" + std::to_string(side) + ")");
  }
  const int l = depth_for_side(side);
  if (l > kMaxDepth) throw FormatError("image side exceeds 2^" + std::to_string(kMaxDepth));
  std::vector<double> p_y1(image.pixels.size());
  const double maxval = image.maxval;
  for (std::size_t i = 0; i < p_y1.size(); ++i) {
    const double g = image.pixels[i] / maxval;
    p_y1[i] = invert ? 1.0 - g : g;
  }
  return WorldMap::binary(l, p_y1);
}

WorldMap load_pgm(const std::filesystem::path& path, bool invert) {
  return world_from_image(read_pgm(path), invert);
}

std::vector<double> parse_prior_weights(std::string_view text) {
  std::vector<double> weights;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double w = 0.0;
    if (!(ls >> w)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("prior weights line " + std::to_string(lineno) + ": not a number");
    }
    std::string rest;
    if (ls >> rest) throw FormatError("prior weights line " + std::to_string(lineno) + ": trailing text");
    weights.push_back(w);
  }
  return weights;
}

std::vector<double> read_prior_weights(const std::filesystem::path& path) {
  return parse_prior_weights(slurp(path));
}

WorldMap apply_prior_weights(const WorldMap& world, std::span<const double> weights) {
  if (weights.size() != world.cell_count()) {
    throw std::invalid_argument("weight count mismatch: " + std::to_string(weights.size()) + " weights for " +
                                std::to_string(world.cell_count()) + " cells");
  }
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("negative or non-finite prior weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("all-zero prior weights");
  std::vector<double> prior(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) prior[i] = weights[i] / total;
  return world.with_prior(std::move(prior));
}

WorldMap load_prior(const std::filesystem::path& path, const WorldMap& world) {
  return apply_prior_weights(world, read_prior_weights(path));
}

double mutual_info_xy(const WorldMap& world) {
  const auto ny = static_cast<std::size_t>(world.y_alphabet_size());
  std::vector<double> p_y(ny, 0.0);
  double h_y_given_x = 0.0;
  for (std::size_t x = 0; x < world.cell_count(); ++x) {
    const double px = world.prior(x);
    if (px <= 0.0) continue;
    const auto rel = world.relevance(x);
    for (std::size_t y = 0; y < ny; ++y) p_y[y] += px * rel[y];
    h_y_given_x += px * detail::entropy_unchecked(rel);
  }
  return std::max(0.0, detail::entropy_unchecked(p_y) - h_y_given_x);
}

}  // namespace ibtree
