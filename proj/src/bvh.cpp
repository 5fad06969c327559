#include "aerogen/bvh.hpp"

#include <algorithm>
#include <stdexcept>

namespace aerogen {

namespace {

constexpr uint32_t kLeafSize = 8;

inline bool slab_hit(const Aabb& box, const Vec3& o, const Vec3& inv, double tmax,
                     double& t_entry) {
  double t1 = (box.lo.x - o.x) * inv.x, t2 = (box.hi.x - o.x) * inv.x;
  double tlo = std::min(t1, t2), thi = std::max(t1, t2);
  t1 = (box.lo.y - o.y) * inv.y; t2 = (box.hi.y - o.y) * inv.y;
  tlo = std::max(tlo, std::min(t1, t2)); thi = std::min(thi, std::max(t1, t2));
  t1 = (box.lo.z - o.z) * inv.z; t2 = (box.hi.z - o.z) * inv.z;
  tlo = std::max(tlo, std::min(t1, t2)); thi = std::min(thi, std::max(t1, t2));
  t_entry = tlo;
  return thi >= tlo && tlo <= tmax && thi >= 0.0;
}

}  // namespace

Bvh::Bvh(const LabeledMesh& mesh) {
  if (mesh.empty()) throw std::invalid_argument("bvh: empty mesh");

  const size_t n = mesh.tri_count();
  std::vector<Aabb> boxes(n);
  std::vector<Vec3> centroids(n);
  for (size_t t = 0; t < n; ++t) {
    Aabb b;
    for (int k = 0; k < 3; ++k) b.expand(mesh.tri_vertex(t, k));
    boxes[t] = b;
    centroids[t] = b.center();
  }

  std::vector<uint32_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<uint32_t>(i);
  nodes_.reserve(2 * n);
  build(order, 0, static_cast<uint32_t>(n), boxes, centroids);

  // pack triangles leaf-contiguously for the batched kernel
  tri_index_ = order;
  for (uint32_t id : order)
    tris_.push(mesh.tri_vertex(id, 0), mesh.tri_vertex(id, 1), mesh.tri_vertex(id, 2));
}

uint32_t Bvh::build(std::vector<uint32_t>& order, uint32_t begin, uint32_t end,
                    const std::vector<Aabb>& boxes, const std::vector<Vec3>& centroids) {
  uint32_t node_id = static_cast<uint32_t>(nodes_.size());
  nodes_.emplace_back();

  Aabb box, cbox;
  for (uint32_t i = begin; i < end; ++i) {
    box.expand(boxes[order[i]]);
    cbox.expand(centroids[order[i]]);
  }
  nodes_[node_id].box = box;

  uint32_t count = end - begin;
  if (count <= kLeafSize) {
    nodes_[node_id].first = begin;
    nodes_[node_id].count = count;
    ++leaf_count_;
    return node_id;
  }

  int axis = cbox.longest_axis();
  auto axis_of = [axis](const Vec3& v) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; };
  double split = 0.5 * (axis_of(cbox.lo) + axis_of(cbox.hi));

  auto mid_it = std::partition(order.begin() + begin, order.begin() + end,
                               [&](uint32_t id) { return axis_of(centroids[id]) < split; });
  uint32_t mid = static_cast<uint32_t>(mid_it - order.begin());
  if (mid == begin || mid == end) {  // degenerate split: fall back to median
    mid = begin + count / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                       return axis_of(centroids[a]) < axis_of(centroids[b]);
                     });
  }

  uint32_t left = build(order, begin, mid, boxes, centroids);
  uint32_t right = build(order, mid, end, boxes, centroids);
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  nodes_[node_id].count = 0;
  return node_id;
}

Bvh::Hit Bvh::nearest(const Ray& ray, double tmin, double tmax) const {
  const double origin[3] = {ray.origin.x, ray.origin.y, ray.origin.z};
  const double dir[3] = {ray.dir.x, ray.dir.y, ray.dir.z};
  const Vec3 inv{1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z};
  auto* kernel = kern::ray_tri();

  Hit best;
  best.t = tmax;

  double tbuf[kLeafSize];
  uint32_t stack[64];
  int sp = 0;
  stack[sp++] = 0;
  while (sp > 0) {
    const Node& node = nodes_[stack[--sp]];
    double entry;
    if (!slab_hit(node.box, ray.origin, inv, best.t, entry)) continue;
    if (node.count > 0) {
      kernel(origin, dir, tris_, node.first, node.count, tmin, tmax, tbuf);
      for (uint32_t k = 0; k < node.count; ++k) {
        uint32_t orig = tri_index_[node.first + k];
        // lexicographic (t, original index): matches the brute-force tie rule
        if (tbuf[k] < best.t || (tbuf[k] == best.t && best.valid() && orig < best.tri)) {
          best.t = tbuf[k];
          best.tri = orig;
        }
      }
    } else {
      stack[sp++] = node.left;
      stack[sp++] = node.right;
    }
  }
  if (!best.valid()) best.t = std::numeric_limits<double>::infinity();
  return best;
}

bool Bvh::occluded(const Vec3& a, const Vec3& b, double tmin) const {
  Vec3 d = b - a;
  const double origin[3] = {a.x, a.y, a.z};
  const double dir[3] = {d.x, d.y, d.z};
  const Vec3 inv{1.0 / d.x, 1.0 / d.y, 1.0 / d.z};
  const double tmax = 1.0 - tmin;
  auto* kernel = kern::ray_tri();

  double tbuf[kLeafSize];
  uint32_t stack[64];
  int sp = 0;
  stack[sp++] = 0;
  while (sp > 0) {
    const Node& node = nodes_[stack[--sp]];
    double entry;
    if (!slab_hit(node.box, a, inv, tmax, entry)) continue;
    if (node.count > 0) {
      kernel(origin, dir, tris_, node.first, node.count, tmin, tmax, tbuf);
      for (uint32_t k = 0; k < node.count; ++k)
        if (tbuf[k] < std::numeric_limits<double>::infinity()) return true;
    } else {
      stack[sp++] = node.left;
      stack[sp++] = node.right;
    }
  }
  return false;
}

}  // namespace aerogen
