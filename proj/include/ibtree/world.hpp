#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ibtree {

/// Raw grayscale raster as stored in a PGM file, row-major.
struct GrayImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> pixels;

  bool operator==(const GrayImage&) const = default;
};

/// Parses P2 (ASCII) or P5 (binary) PGM data, maxval <= 65535. Throws
/// FormatError on malformed headers or truncated rasters.
GrayImage parse_pgm(std::string_view bytes);
GrayImage read_pgm(const std::filesystem::path& path);

/// Serializes as P2 with at most 16 samples per line.
void write_pgm_ascii(std::ostream& os, const GrayImage& image);
void write_pgm_ascii(const std::filesystem::path& path, const GrayImage& image);

/// A 2^l x 2^l grid world: a relevance distribution p(y|x) per finest cell and
/// a prior p(x) over cells. Cells are indexed row-major. Immutable once built.
class WorldMap {
 public:
  /// relevance holds cell_count * y_alphabet_size entries, cell-major.
  /// Throws std::invalid_argument when any distribution is off the simplex by
  /// more than 1e-12 or when the sizes disagree with depth_l.
  WorldMap(int depth_l, int y_alphabet_size, std::vector<double> relevance,
           std::vector<double> prior);

  /// Binary-relevance world from p(y=1|x) per cell. An empty prior means
  /// uniform.
  static WorldMap binary(int depth_l, std::span<const double> p_y1,
                         std::span<const double> prior = {});

  int depth_l() const { return depth_l_; }
  std::uint32_t side() const { return std::uint32_t{1} << depth_l_; }
  std::size_t cell_count() const { return prior_.size(); }
  int y_alphabet_size() const { return ny_; }

  std::span<const double> relevance(std::size_t cell) const {
    return {relevance_.data() + cell * static_cast<std::size_t>(ny_), static_cast<std::size_t>(ny_)};
  }
  double prior(std::size_t cell) const { return prior_[cell]; }
  std::span<const double> prior() const { return prior_; }

  /// Same relevance, new prior (validated).
  WorldMap with_prior(std::vector<double> prior) const;

 private:
  int depth_l_;
  int ny_;
  std::vector<double> relevance_;
  std::vector<double> prior_;
};

/// Maps gray levels to p(y=1|x). With invert set, darker pixels are more
/// relevant: p(y=1|x) = 1 - gray/maxval; otherwise gray/maxval. Uniform prior.
/// Throws FormatError when the image is not square or its side is not a power
/// of two.
WorldMap world_from_image(const GrayImage& image, bool invert = true);
WorldMap load_pgm(const std::filesystem::path& path, bool invert = true);

/// One non-negative weight per line; blank lines and '#' comments ignored.
std::vector<double> read_prior_weights(const std::filesystem::path& path);
std::vector<double> parse_prior_weights(std::string_view text);

/// p(x) = weight(x) / sum(weights). Throws std::invalid_argument on a count
/// mismatch, a negative weight, or all-zero weights.
WorldMap apply_prior_weights(const WorldMap& world, std::span<const double> weights);
WorldMap load_prior(const std::filesystem::path& path, const WorldMap& world);

/// I(X;Y) = H(Y) - H(Y|X) in nats.
double mutual_info_xy(const WorldMap& world);

}  // namespace ibtree
