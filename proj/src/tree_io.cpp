#include "ibtree/tree_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ibtree/errors.hpp"

namespace ibtree {

namespace {

using nlohmann::json;

// %.17g keeps stored values exactly round-trippable.
std::string exact(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

std::string tree_to_json(const TreeSelection& z, const TreeInformation& info) {
  // Written by hand so the float format stays fixed across library versions.
  std::ostringstream os;
  os << "{\n  \"depth_l\": " << z.depth_l() << ",\n  \"selected\": [";
  bool first = true;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!z[i]) continue;
    const NodeId id = node_at(i);
    os << (first ? "" : ", ") << '[' << id.depth << ", " << id.morton << ']';
    first = false;
  }
  os << "],\n  \"leaf_count\": " << leaf_count(z) << ",\n  \"i_x_nats\": " << exact(info.i_x)
     << ",\n  \"i_y_nats\": " << exact(info.i_y) << "\n}\n";
  return os.str();
}

StoredTree tree_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("tree JSON: ") + e.what());
  }
  try {
    const int l = doc.at("depth_l").get<int>();
    if (l < 0 || l > kMaxDepth) throw FormatError("tree JSON: depth_l out of range");
    StoredTree t;
    t.selection = TreeSelection(l);
    for (const auto& node : doc.at("selected")) {
      if (!node.is_array() || node.size() != 2) throw FormatError("tree JSON: selected entries are [depth, morton]");
      const int d = node[0].get<int>();
      const auto m = node[1].get<std::uint64_t>();
      if (d < 0 || d >= l || m >= (std::uint64_t{1} << (2 * d))) {
        throw FormatError("tree JSON: node [" + std::to_string(d) + ", " + std::to_string(m) +
                          "] is not an interior candidate");
      }
      t.selection.set(canonical_index({d, m}), true);
    }
    t.i_x = doc.at("i_x_nats").get<double>();
    t.i_y = doc.at("i_y_nats").get<double>();
    return t;
  } catch (const json::exception& e) {
    throw FormatError(std::string("tree JSON: ") + e.what());
  }
}

GrayImage render_abstraction(const WorldMap& world, const TreeSelection& z, std::uint32_t maxval) {
  if (world.y_alphabet_size() != 2) throw std::invalid_argument("rendering needs a binary relevance variable");
  if (z.depth_l() != world.depth_l()) throw std::invalid_argument("selection depth does not match the world");
  const std::vector<NodeId> enc = encoder_of(z);
  const std::size_t cells = world.cell_count();

  // p(y=1|t) per leaf; zero-mass leaves fall back to the plain cell mean.
  std::vector<double> mass(cells, 0.0), rel(cells, 0.0), plain(cells, 0.0), count(cells, 0.0);
  std::vector<std::size_t> slot(cells);
  for (std::size_t x = 0; x < cells; ++x) {
    const NodeId t = enc[x];
    const CellRegion r = region_of(t, world.depth_l());
    const std::size_t key = std::size_t{r.row} * world.side() + r.col;  // top-left cell identifies the leaf
    slot[x] = key;
    mass[key] += world.prior(x);
    rel[key] += world.prior(x) * world.relevance(x)[1];
    plain[key] += world.relevance(x)[1];
    count[key] += 1.0;
  }
  GrayImage img;
  img.width = img.height = world.side();
  img.maxval = maxval;
  img.pixels.resize(cells);
  for (std::size_t x = 0; x < cells; ++x) {
    const std::size_t k = slot[x];
    const double p1 = mass[k] > 0.0 ? rel[k] / mass[k] : plain[k] / count[k];
    const double g = std::round(maxval * (1.0 - std::clamp(p1, 0.0, 1.0)));
    img.pixels[x] = static_cast<std::uint16_t>(g);
  }
  return img;
}

}  // namespace ibtree
