#include "aerogen/pcproc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace aerogen {

// ---------------------------------------------------------------------------
// class mappings

uint8_t ClassMapping::map(uint8_t src) const {
  if (src >= table.size() || table[src] == classes::kUnlabeled) {
    std::string who = src < source_names.size() ? source_names[src]
                                                : "id " + std::to_string(src);
    throw std::runtime_error("class mapping '" + name + "': class " + who + " unmapped");
  }
  return table[src];
}

bool ClassMapping::surjective(std::vector<uint8_t>* unused) const {
  std::vector<char> hit(target_names.size(), 0);
  for (uint8_t t : table)
    if (t != classes::kUnlabeled && t < hit.size()) hit[t] = 1;
  bool all = true;
  for (size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) {
      all = false;
      if (unused) unused->push_back(static_cast<uint8_t>(i));
    }
  }
  return all;
}

ClassMapping ClassMapping::synthetic18_to_real6() {
  using namespace classes;
  ClassMapping m;
  m.name = "synthetic18_to_real6";
  for (auto n : kNames) m.source_names.emplace_back(n);
  for (auto n : real6::kNames) m.target_names.emplace_back(n);
  m.table.assign(kCount, kUnlabeled);
  // road, dirt, grass -> ground
  m.table[kRoad] = real6::kGround;
  m.table[kDirt] = real6::kGround;
  m.table[kGrass] = real6::kGround;
  // vegetation -> tree
  m.table[kLowVeg] = real6::kTree;
  m.table[kMediumVeg] = real6::kTree;
  m.table[kHighVeg] = real6::kTree;
  // cars, trucks, military vehicles -> car
  m.table[kVehicle] = real6::kCar;
  m.table[kTruck] = real6::kCar;
  m.table[kMilitaryVehicle] = real6::kCar;
  // street signs join light poles
  m.table[kLightPole] = real6::kLightPole;
  m.table[kStreetSign] = real6::kLightPole;
  m.table[kFence] = real6::kFence;
  // everything else is man-made structure, window included (building surface)
  m.table[kBuilding] = real6::kBuilding;
  m.table[kWindow] = real6::kBuilding;
  m.table[kAircraft] = real6::kBuilding;
  m.table[kBike] = real6::kBuilding;
  m.table[kMotorcycle] = real6::kBuilding;
  m.table[kClutter] = real6::kBuilding;
  return m;
}

ClassMapping ClassMapping::instance14_to_reduced9() {
  using namespace classes;
  ClassMapping m;
  m.name = "instance14_to_reduced9";
  for (int i = 0; i < kInstanceCapableCount; ++i) m.source_names.emplace_back(kNames[i]);
  for (auto n : reduced9::kNames) m.target_names.emplace_back(n);
  m.table.assign(kInstanceCapableCount, kUnlabeled);
  m.table[kBuilding] = reduced9::kBuilding;
  m.table[kLowVeg] = reduced9::kVegetation;
  m.table[kMediumVeg] = reduced9::kVegetation;
  m.table[kHighVeg] = reduced9::kVegetation;
  m.table[kVehicle] = reduced9::kVehicle;
  m.table[kTruck] = reduced9::kLargeVehicle;
  m.table[kMilitaryVehicle] = reduced9::kLargeVehicle;
  m.table[kAircraft] = reduced9::kAircraft;
  m.table[kBike] = reduced9::kBike;
  m.table[kMotorcycle] = reduced9::kBike;
  m.table[kLightPole] = reduced9::kPolesAndSigns;
  m.table[kStreetSign] = reduced9::kPolesAndSigns;
  m.table[kClutter] = reduced9::kClutter;
  m.table[kFence] = reduced9::kFence;
  return m;
}

void save_mapping(const ClassMapping& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "# class mapping: " << m.name << "\n";
  f << "# columns: source_id target_id  (names in trailing comment)\n";
  f << "# targets:";
  for (size_t i = 0; i < m.target_names.size(); ++i)
    f << " " << i << "=" << m.target_names[i];
  f << "\n";
  for (size_t s = 0; s < m.table.size(); ++s) {
    f << s << " " << static_cast<int>(m.table[s]) << "  # " << m.source_names[s] << " -> "
      << (m.table[s] < m.target_names.size() ? m.target_names[m.table[s]] : "?") << "\n";
  }
}

ClassMapping load_mapping(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  ClassMapping m;
  m.name = path;
  std::string line;
  std::map<int, int> pairs;
  int max_src = -1, max_tgt = -1;
  while (std::getline(f, line)) {
    // targets comment carries the target names
    if (line.rfind("# targets:", 0) == 0) {
      std::istringstream ss(line.substr(10));
      std::string tok;
      while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        size_t id = std::stoul(tok.substr(0, eq));
        if (m.target_names.size() <= id) m.target_names.resize(id + 1);
        m.target_names[id] = tok.substr(eq + 1);
      }
      continue;
    }
    auto hash = line.find('#');
    std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    std::istringstream ss(body);
    int s, t;
    if (ss >> s >> t) {
      pairs[s] = t;
      max_src = std::max(max_src, s);
      max_tgt = std::max(max_tgt, t);
    }
  }
  if (pairs.empty()) throw std::runtime_error(path + ": no mapping rows");
  m.table.assign(static_cast<size_t>(max_src) + 1, classes::kUnlabeled);
  for (auto [s, t] : pairs) m.table[static_cast<size_t>(s)] = static_cast<uint8_t>(t);
  for (size_t s = 0; s < m.table.size(); ++s)
    m.source_names.push_back("class_" + std::to_string(s));
  if (m.target_names.size() <= static_cast<size_t>(max_tgt))
    m.target_names.resize(static_cast<size_t>(max_tgt) + 1, "?");
  return m;
}

// ---------------------------------------------------------------------------
// grid downsample

namespace {

struct VoxelKeyHash {
  size_t operator()(const std::array<int64_t, 3>& k) const {
    uint64_t h = static_cast<uint64_t>(k[0]) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<uint64_t>(k[1]) * 0xc2b2ae3d27d4eb4fULL;
    h ^= static_cast<uint64_t>(k[2]) * 0x165667b19e3779f9ULL;
    h ^= h >> 29;
    return static_cast<size_t>(h);
  }
};

template <typename K>
K majority_smallest(const std::map<K, size_t>& votes) {
  K best{};
  size_t best_n = 0;
  for (const auto& [k, n] : votes) {
    if (n > best_n) { best = k; best_n = n; }  // map order: ties keep smallest key
  }
  return best;
}

}  // namespace

LabeledPointCloud grid_downsample(const LabeledPointCloud& cloud, double spacing) {
  if (spacing <= 0.0) throw std::invalid_argument("grid_downsample: spacing must be > 0");
  cloud.validate();
  if (cloud.empty()) return cloud;

  Aabb bounds = cloud.bounds();
  const Vec3 org = bounds.lo;

  struct VoxelAgg {
    uint32_t rep = 0;       // input index of representative
    double rep_d2 = 0.0;    // distance^2 to the voxel centroid
    std::map<uint8_t, size_t> sem_votes;
    std::map<uint32_t, size_t> inst_votes;
    size_t order = 0;       // first-seen sequence for deterministic output
  };
  std::unordered_map<std::array<int64_t, 3>, VoxelAgg, VoxelKeyHash> voxels;

  for (uint32_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    std::array<int64_t, 3> key = {
        static_cast<int64_t>(std::floor((p.x - org.x) / spacing)),
        static_cast<int64_t>(std::floor((p.y - org.y) / spacing)),
        static_cast<int64_t>(std::floor((p.z - org.z) / spacing))};
    Vec3 centroid{org.x + (static_cast<double>(key[0]) + 0.5) * spacing,
                  org.y + (static_cast<double>(key[1]) + 0.5) * spacing,
                  org.z + (static_cast<double>(key[2]) + 0.5) * spacing};
    double d2 = (p - centroid).norm2();

    auto [it, inserted] = voxels.try_emplace(key);
    VoxelAgg& agg = it->second;
    if (inserted) {
      agg.rep = i;
      agg.rep_d2 = d2;
      agg.order = voxels.size() - 1;
    } else if (d2 < agg.rep_d2) {  // ties keep the earlier (lower) index
      agg.rep = i;
      agg.rep_d2 = d2;
    }
    agg.sem_votes[cloud.semantic[i]]++;
    agg.inst_votes[cloud.instance[i]]++;
  }

  std::vector<const VoxelAgg*> ordered(voxels.size());
  for (const auto& [key, agg] : voxels) ordered[agg.order] = &agg;

  LabeledPointCloud out;
  out.positions.reserve(ordered.size());
  for (const VoxelAgg* agg : ordered) {
    uint8_t sem = majority_smallest(agg->sem_votes);
    uint32_t inst = majority_smallest(agg->inst_votes);
    if (cloud.has_colors())
      out.push(cloud.positions[agg->rep], cloud.colors[agg->rep], sem, inst);
    else
      out.push(cloud.positions[agg->rep], sem, inst);
  }
  return out;
}

LabeledPointCloud map_classes(const LabeledPointCloud& cloud, const ClassMapping& mapping) {
  cloud.validate();
  LabeledPointCloud out = cloud;
  for (size_t i = 0; i < out.size(); ++i) out.semantic[i] = mapping.map(cloud.semantic[i]);
  return out;
}

// ---------------------------------------------------------------------------
// tilers

std::vector<Tile> tile_blocks(const LabeledPointCloud& cloud, double edge) {
  if (edge <= 0.0) throw std::invalid_argument("tile_blocks: edge must be > 0");
  cloud.validate();
  if (cloud.empty()) return {};

  Aabb b = cloud.bounds();
  const double ext_x = b.hi.x - b.lo.x, ext_y = b.hi.y - b.lo.y;
  const size_t nx = std::max<size_t>(1, static_cast<size_t>(std::ceil(ext_x / edge)));
  const size_t ny = std::max<size_t>(1, static_cast<size_t>(std::ceil(ext_y / edge)));

  std::vector<Tile> tiles(nx * ny);
  for (size_t by = 0; by < ny; ++by) {
    for (size_t bx = 0; bx < nx; ++bx) {
      Tile& t = tiles[by * nx + bx];
      t.kind = "block";
      t.block_lo = {b.lo.x + static_cast<double>(bx) * edge,
                    b.lo.y + static_cast<double>(by) * edge};
      t.block_hi = {t.block_lo.x + edge, t.block_lo.y + edge};
    }
  }

  for (uint32_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    size_t bx = std::min(nx - 1, static_cast<size_t>((p.x - b.lo.x) / edge));
    size_t by = std::min(ny - 1, static_cast<size_t>((p.y - b.lo.y) / edge));
    Tile& t = tiles[by * nx + bx];
    if (cloud.has_colors())
      t.points.push(p, cloud.colors[i], cloud.semantic[i], cloud.instance[i]);
    else
      t.points.push(p, cloud.semantic[i], cloud.instance[i]);
    t.source_indices.push_back(i);
  }
  return tiles;
}

Tile sample_sphere(const LabeledPointCloud& cloud, const Vec3& center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("sample_sphere: radius must be > 0");
  cloud.validate();
  Tile t;
  t.kind = "sphere";
  t.center = center;
  t.radius = radius;
  const double r2 = radius * radius;
  for (uint32_t i = 0; i < cloud.size(); ++i) {
    if ((cloud.positions[i] - center).norm2() <= r2) {
      if (cloud.has_colors())
        t.points.push(cloud.positions[i], cloud.colors[i], cloud.semantic[i], cloud.instance[i]);
      else
        t.points.push(cloud.positions[i], cloud.semantic[i], cloud.instance[i]);
      t.source_indices.push_back(i);
    }
  }
  return t;
}

Tile sample_fixed_count(const LabeledPointCloud& cloud, const Vec3& center, size_t n) {
  if (n == 0) throw std::invalid_argument("sample_fixed_count: n must be > 0");
  cloud.validate();
  Tile t;
  t.kind = "fixed_count";
  t.center = center;
  t.requested = n;
  if (cloud.empty()) return t;

  std::vector<uint32_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0u);
  auto closer = [&](uint32_t a, uint32_t b) {
    double da = (cloud.positions[a] - center).norm2();
    double db = (cloud.positions[b] - center).norm2();
    return da < db || (da == db && a < b);
  };
  size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(take), order.end(),
                    closer);

  for (size_t k = 0; k < n; ++k) {
    uint32_t i = order[k % take];  // repeat from the nearest when short
    if (cloud.has_colors())
      t.points.push(cloud.positions[i], cloud.colors[i], cloud.semantic[i], cloud.instance[i]);
    else
      t.points.push(cloud.positions[i], cloud.semantic[i], cloud.instance[i]);
    t.source_indices.push_back(i);
  }
  t.padded = take < n;
  return t;
}

// ---------------------------------------------------------------------------
// histograms

std::map<uint8_t, size_t> class_histogram(const LabeledPointCloud& cloud) {
  cloud.validate();
  std::map<uint8_t, size_t> hist;
  for (uint8_t s : cloud.semantic) hist[s]++;
  return hist;
}

void save_histogram_csv(const std::map<uint8_t, size_t>& hist,
                        const std::vector<std::string>& names, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "class_id,class_name,count,log10_count\n";
  for (const auto& [id, count] : hist) {
    std::string name = id < names.size() ? names[id] : "unlabeled";
    f << static_cast<int>(id) << "," << name << "," << count << ","
      << (count > 0 ? std::log10(static_cast<double>(count)) : 0.0) << "\n";
  }
}

DensityHistogram volume_density_histogram(const LabeledPointCloud& cloud,
                                          const DensityRegion& region, size_t bins) {
  cloud.validate();
  if (bins == 0) throw std::invalid_argument("volume_density_histogram: bins must be > 0");
  DensityHistogram h;
  h.bin_count.assign(bins, 0);
  h.bin_density.assign(bins, 0.0);
  h.bin_edge.assign(bins, 0.0);

  if (region.kind == "sphere") {
    if (region.radius <= 0.0)
      throw std::invalid_argument("volume_density_histogram: degenerate sphere");
    const double R = region.radius;
    // equal-volume shells: r_i = R * (i/bins)^(1/3)
    for (size_t i = 0; i < bins; ++i)
      h.bin_edge[i] = R * std::cbrt(static_cast<double>(i + 1) / static_cast<double>(bins));
    const double shell_vol = 4.0 / 3.0 * M_PI * R * R * R / static_cast<double>(bins);
    for (const Vec3& p : cloud.positions) {
      double d = (p - region.center).norm();
      if (d > R) continue;
      double frac = (d / R) * (d / R) * (d / R);
      size_t bin = std::min(bins - 1, static_cast<size_t>(frac * static_cast<double>(bins)));
      h.bin_count[bin]++;
    }
    for (size_t i = 0; i < bins; ++i)
      h.bin_density[i] = static_cast<double>(h.bin_count[i]) / shell_vol;
  } else if (region.kind == "box") {
    const Aabb& b = region.box;
    if (!b.valid() || b.hi.z <= b.lo.z || b.hi.x <= b.lo.x || b.hi.y <= b.lo.y)
      throw std::invalid_argument("volume_density_histogram: degenerate box");
    const double dz = (b.hi.z - b.lo.z) / static_cast<double>(bins);
    const double slab_vol = (b.hi.x - b.lo.x) * (b.hi.y - b.lo.y) * dz;
    for (size_t i = 0; i < bins; ++i) h.bin_edge[i] = b.lo.z + dz * static_cast<double>(i + 1);
    for (const Vec3& p : cloud.positions) {
      if (p.x < b.lo.x || p.x > b.hi.x || p.y < b.lo.y || p.y > b.hi.y ||
          p.z < b.lo.z || p.z > b.hi.z)
        continue;
      size_t bin = std::min(bins - 1, static_cast<size_t>((p.z - b.lo.z) / dz));
      h.bin_count[bin]++;
    }
    for (size_t i = 0; i < bins; ++i)
      h.bin_density[i] = static_cast<double>(h.bin_count[i]) / slab_vol;
  } else {
    throw std::invalid_argument("volume_density_histogram: unknown region kind");
  }
  return h;
}

void save_density_csv(const DensityHistogram& h, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "bin,edge,count,density\n";
  for (size_t i = 0; i < h.bin_count.size(); ++i)
    f << i << "," << h.bin_edge[i] << "," << h.bin_count[i] << "," << h.bin_density[i] << "\n";
}

}  // namespace aerogen
