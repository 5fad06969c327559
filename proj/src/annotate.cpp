#include "aerogen/annotate.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace aerogen {

void TransferParams::validate() const {
  if (max_nn_distance <= 0.0)
    throw std::invalid_argument("transfer: max_nn_distance must be > 0");
  if (ground_link_radius <= 0.0)
    throw std::invalid_argument("transfer: ground_link_radius must be > 0");
}

LabeledPointCloud transfer_labels(const LabeledPointCloud& recon,
                                  const LabeledPointCloud& proxy,
                                  const TransferParams& params, int workers,
                                  TransferStats* stats) {
  params.validate();
  proxy.validate();
  for (uint8_t s : proxy.semantic)
    if (s == classes::kUnlabeled)
      throw std::invalid_argument("transfer_labels: proxy must be fully labeled");

  KdTree index = build_point_index(proxy);
  LabeledPointCloud out = recon;
  out.semantic.assign(recon.size(), params.fallback_class);
  out.instance.assign(recon.size(), 0);
  const double max_d2 = params.max_nn_distance * params.max_nn_distance;

  std::atomic<size_t> fallback_count{0};
  auto run = [&](size_t i0, size_t i1) {
    size_t local_fallback = 0;
    for (size_t i = i0; i < i1; ++i) {
      KdTree::Nearest nn = index.nearest(recon.positions[i]);
      if (nn.valid() && nn.dist2 <= max_d2) {
        out.semantic[i] = proxy.semantic[nn.index];
        out.instance[i] = proxy.instance[nn.index];
      } else {
        ++local_fallback;
      }
    }
    fallback_count += local_fallback;
  };

  if (workers <= 1 || recon.size() < 4096) {
    run(0, recon.size());
  } else {
    std::vector<std::thread> pool;
    size_t per = (recon.size() + workers - 1) / static_cast<size_t>(workers);
    for (int w = 0; w < workers; ++w) {
      size_t i0 = static_cast<size_t>(w) * per;
      size_t i1 = std::min(recon.size(), i0 + per);
      if (i0 >= i1) break;
      pool.emplace_back(run, i0, i1);
    }
    for (auto& t : pool) t.join();
  }

  if (stats) {
    stats->total = recon.size();
    stats->out_of_range = fallback_count.load();
  }
  return out;
}

namespace {

// Union-find with component size and minimum member index.
class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n), size_(n, 1), min_idx_(n) {
    for (size_t i = 0; i < n; ++i) { parent_[i] = i; min_idx_[i] = i; }
  }
  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a); b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    min_idx_[a] = std::min(min_idx_[a], min_idx_[b]);
  }
  size_t size_of(size_t root) const { return size_[root]; }
  size_t min_of(size_t root) const { return min_idx_[root]; }

 private:
  std::vector<size_t> parent_, size_, min_idx_;
};

using CellKey = std::array<int64_t, 3>;

struct CellKeyHash {
  size_t operator()(const CellKey& k) const {
    uint64_t h = static_cast<uint64_t>(k[0]) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<uint64_t>(k[1]) * 0xc2b2ae3d27d4eb4fULL;
    h ^= static_cast<uint64_t>(k[2]) * 0x165667b19e3779f9ULL;
    h ^= h >> 29;
    return static_cast<size_t>(h);
  }
};

}  // namespace

LabeledPointCloud enforce_ground_connectivity(const LabeledPointCloud& cloud,
                                              const TransferParams& params,
                                              ConnectivityStats* stats) {
  params.validate();
  cloud.validate();

  std::vector<uint32_t> ground;  // indices into cloud, ascending
  for (size_t i = 0; i < cloud.size(); ++i)
    if (classes::ground_family(cloud.semantic[i])) ground.push_back(static_cast<uint32_t>(i));

  if (stats) {
    *stats = {};
    stats->ground_points = ground.size();
  }
  if (ground.empty()) {
    if (stats) stats->no_ground = true;
    return cloud;  // identity, recorded via stats
  }

  // Exact radius-graph components: bucket by cells of edge r/sqrt(3), so any
  // two points sharing a cell are within r and union directly; neighbor cells
  // (within Chebyshev distance 2) are linked iff some cross pair is within r.
  const double r = params.ground_link_radius;
  const double r2 = r * r;
  const double cell = r / std::sqrt(3.0);

  std::unordered_map<CellKey, std::vector<uint32_t>, CellKeyHash> grid;
  for (size_t gi = 0; gi < ground.size(); ++gi) {
    const Vec3& p = cloud.positions[ground[gi]];
    CellKey key = {static_cast<int64_t>(std::floor(p.x / cell)),
                   static_cast<int64_t>(std::floor(p.y / cell)),
                   static_cast<int64_t>(std::floor(p.z / cell))};
    grid[key].push_back(static_cast<uint32_t>(gi));
  }

  UnionFind uf(ground.size());
  // same-cell points are within r of each other (cell diagonal == r)
  for (const auto& [key, members] : grid)
    for (size_t k = 1; k < members.size(); ++k) uf.unite(members[0], members[k]);

  // Cell pairs within Chebyshev distance 2 may hold cross edges; each pair is
  // linked iff some cross pair of points is within r. One found edge merges
  // both whole cells, so the scan stops early almost always.
  for (const auto& [key, members] : grid) {
    for (int64_t dz = 0; dz <= 2; ++dz) {
      for (int64_t dy = dz == 0 ? 0 : -2; dy <= 2; ++dy) {
        for (int64_t dx = (dz == 0 && dy == 0) ? 1 : -2; dx <= 2; ++dx) {
          auto it = grid.find({key[0] + dx, key[1] + dy, key[2] + dz});
          if (it == grid.end()) continue;
          const auto& other = it->second;
          if (uf.find(members[0]) == uf.find(other[0])) continue;
          bool linked = false;
          for (uint32_t a : members) {
            const Vec3& pa = cloud.positions[ground[a]];
            for (uint32_t b : other) {
              if ((cloud.positions[ground[b]] - pa).norm2() <= r2) {
                uf.unite(a, b);
                linked = true;
                break;
              }
            }
            if (linked) break;
          }
        }
      }
    }
  }

  // Largest component wins; size ties go to the component holding the lowest
  // original point index.
  size_t best_root = uf.find(0);
  size_t n_components = 0;
  {
    std::vector<char> seen(ground.size(), 0);
    for (size_t gi = 0; gi < ground.size(); ++gi) {
      size_t root = uf.find(gi);
      if (seen[root]) continue;
      seen[root] = 1;
      ++n_components;
      size_t cur_size = uf.size_of(root), best_size = uf.size_of(best_root);
      if (cur_size > best_size ||
          (cur_size == best_size &&
           ground[uf.min_of(root)] < ground[uf.min_of(best_root)]))
        best_root = root;
    }
  }

  LabeledPointCloud out = cloud;
  size_t relabeled = 0;

  // Index over non-ground points for the relabel lookups.
  std::vector<Vec3> non_ground_pos;
  std::vector<uint32_t> non_ground_idx;
  for (size_t i = 0; i < cloud.size(); ++i) {
    if (!classes::ground_family(cloud.semantic[i])) {
      non_ground_pos.push_back(cloud.positions[i]);
      non_ground_idx.push_back(static_cast<uint32_t>(i));
    }
  }
  const double max_d2 = params.max_nn_distance * params.max_nn_distance;
  if (!non_ground_pos.empty()) {
    KdTree index(non_ground_pos);
    for (size_t gi = 0; gi < ground.size(); ++gi) {
      if (uf.find(gi) == best_root) continue;
      uint32_t i = ground[gi];
      KdTree::Nearest nn = index.nearest(cloud.positions[i]);
      if (nn.valid() && nn.dist2 <= max_d2) {
        uint32_t j = non_ground_idx[nn.index];
        out.semantic[i] = cloud.semantic[j];
        out.instance[i] = cloud.instance[j];
      } else {
        out.semantic[i] = classes::kClutter;
        out.instance[i] = 0;
      }
      ++relabeled;
    }
  } else {
    for (size_t gi = 0; gi < ground.size(); ++gi) {
      if (uf.find(gi) == best_root) continue;
      out.semantic[ground[gi]] = classes::kClutter;
      out.instance[ground[gi]] = 0;
      ++relabeled;
    }
  }

  if (stats) {
    stats->components = n_components;
    stats->relabeled = relabeled;
  }
  return out;
}

}  // namespace aerogen
