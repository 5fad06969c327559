#include "aerogen/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace aerogen {

namespace {
constexpr uint32_t kLeafSize = 16;
}

KdTree::KdTree(const std::vector<Vec3>& points) {
  if (points.empty()) throw std::invalid_argument("kdtree: empty point set");
  index_.resize(points.size());
  std::iota(index_.begin(), index_.end(), 0u);
  nodes_.reserve(2 * points.size() / kLeafSize + 2);
  build(points, 0, static_cast<uint32_t>(points.size()));

  // repack into leaf-contiguous SoA
  xs_.resize(points.size());
  ys_.resize(points.size());
  zs_.resize(points.size());
  for (size_t i = 0; i < index_.size(); ++i) {
    const Vec3& p = points[index_[i]];
    xs_[i] = p.x;
    ys_[i] = p.y;
    zs_[i] = p.z;
  }
}

uint32_t KdTree::build(const std::vector<Vec3>& pts, uint32_t begin, uint32_t end) {
  uint32_t node_id = static_cast<uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Node& n0 = nodes_[node_id];
  for (int a = 0; a < 3; ++a) {
    n0.lo[a] = std::numeric_limits<double>::infinity();
    n0.hi[a] = -std::numeric_limits<double>::infinity();
  }
  for (uint32_t i = begin; i < end; ++i) {
    const Vec3& p = pts[index_[i]];
    const double v[3] = {p.x, p.y, p.z};
    for (int a = 0; a < 3; ++a) {
      n0.lo[a] = std::min(n0.lo[a], v[a]);
      n0.hi[a] = std::max(n0.hi[a], v[a]);
    }
  }

  if (end - begin <= kLeafSize) {
    nodes_[node_id].axis = -1;
    nodes_[node_id].first = begin;
    nodes_[node_id].count = end - begin;
    return node_id;
  }

  int axis = 0;
  {
    double best = -1.0;
    for (int a = 0; a < 3; ++a) {
      double ext = nodes_[node_id].hi[a] - nodes_[node_id].lo[a];
      if (ext > best) { best = ext; axis = a; }
    }
  }
  uint32_t mid = begin + (end - begin) / 2;
  auto key = [&](uint32_t id) {
    const Vec3& p = pts[id];
    return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
  };
  std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                   [&](uint32_t a, uint32_t b) { return key(a) < key(b); });
  double split = key(index_[mid]);

  uint32_t left = build(pts, begin, mid);
  uint32_t right = build(pts, mid, end);
  Node& n = nodes_[node_id];
  n.axis = axis;
  n.split = split;
  n.left = left;
  n.right = right;
  return node_id;
}

KdTree::Nearest KdTree::nearest(const Vec3& q) const {
  Nearest best;
  search(q, best, [](uint32_t) { return true; });
  return best;
}

std::vector<uint32_t> KdTree::radius(const Vec3& q, double r) const {
  const double qv[3] = {q.x, q.y, q.z};
  const double r2 = r * r;
  auto* kernel = kern::sqdist();
  double dbuf[32];
  std::vector<uint32_t> hits;

  uint32_t stack[64];
  int sp = 0;
  stack[sp++] = 0;
  while (sp > 0) {
    const Node& node = nodes_[stack[--sp]];
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      double d = qv[a] < node.lo[a] ? node.lo[a] - qv[a]
               : qv[a] > node.hi[a] ? qv[a] - node.hi[a] : 0.0;
      d2 += d * d;
    }
    if (d2 > r2) continue;
    if (node.axis < 0) {
      for (uint32_t off = 0; off < node.count; off += 32) {
        uint32_t cnt = std::min<uint32_t>(32, node.count - off);
        kernel(qv, xs_.data(), ys_.data(), zs_.data(), node.first + off, cnt, dbuf);
        for (uint32_t k = 0; k < cnt; ++k)
          if (dbuf[k] <= r2) hits.push_back(index_[node.first + off + k]);
      }
    } else {
      stack[sp++] = node.left;
      stack[sp++] = node.right;
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

KdTree build_point_index(const LabeledPointCloud& proxy) {
  if (proxy.empty()) throw std::invalid_argument("build_point_index: empty proxy cloud");
  return KdTree(proxy.positions);
}

}  // namespace aerogen
