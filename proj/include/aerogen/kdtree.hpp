#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "aerogen/kern/kernels.hpp"
#include "aerogen/pointcloud.hpp"

namespace aerogen {

// 3D KD-tree over point positions. Queries return exactly the brute-force
// answer: nearest breaks distance ties by the lowest original point index.
class KdTree {
 public:
  static constexpr uint32_t kNone = 0xffffffffu;

  struct Nearest {
    uint32_t index = kNone;  // original point index
    double dist2 = std::numeric_limits<double>::infinity();
    bool valid() const { return index != kNone; }
  };

  explicit KdTree(const std::vector<Vec3>& points);  // throws on empty input

  Nearest nearest(const Vec3& q) const;
  // Nearest among points satisfying pred(original_index); same tie rule.
  template <typename Pred>
  Nearest nearest_if(const Vec3& q, Pred&& pred) const;

  // All original indices within radius (inclusive), ascending index order.
  std::vector<uint32_t> radius(const Vec3& q, double r) const;

  size_t size() const { return index_.size(); }

 private:
  struct Node {
    double split = 0.0;
    int axis = -1;                  // -1 = leaf
    uint32_t left = 0, right = 0;   // children
    uint32_t first = 0, count = 0;  // leaf range
    double lo[3], hi[3];            // node bounds
  };

  uint32_t build(const std::vector<Vec3>& pts, uint32_t begin, uint32_t end);

  template <typename Accept>
  void search(const Vec3& q, Nearest& best, Accept&& accept) const;

  std::vector<Node> nodes_;
  std::vector<double> xs_, ys_, zs_;  // leaf-contiguous SoA
  std::vector<uint32_t> index_;       // packed slot -> original index
};

template <typename Accept>
void KdTree::search(const Vec3& q, Nearest& best, Accept&& accept) const {
  const double qv[3] = {q.x, q.y, q.z};
  auto* kernel = kern::sqdist();
  double dbuf[32];

  uint32_t stack[64];
  int sp = 0;
  stack[sp++] = 0;
  while (sp > 0) {
    const Node& node = nodes_[stack[--sp]];
    // box lower-bound distance
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      double d = qv[a] < node.lo[a] ? node.lo[a] - qv[a]
               : qv[a] > node.hi[a] ? qv[a] - node.hi[a] : 0.0;
      d2 += d * d;
    }
    if (d2 > best.dist2) continue;
    if (node.axis < 0) {
      for (uint32_t off = 0; off < node.count; off += 32) {
        uint32_t cnt = std::min<uint32_t>(32, node.count - off);
        kernel(qv, xs_.data(), ys_.data(), zs_.data(), node.first + off, cnt, dbuf);
        for (uint32_t k = 0; k < cnt; ++k) {
          uint32_t orig = index_[node.first + off + k];
          if (!accept(orig)) continue;
          if (dbuf[k] < best.dist2 ||
              (dbuf[k] == best.dist2 && orig < best.index)) {
            best.dist2 = dbuf[k];
            best.index = orig;
          }
        }
      }
    } else {
      // near child first
      bool left_near = qv[node.axis] < node.split;
      stack[sp++] = left_near ? node.right : node.left;
      stack[sp++] = left_near ? node.left : node.right;
    }
  }
}

template <typename Pred>
KdTree::Nearest KdTree::nearest_if(const Vec3& q, Pred&& pred) const {
  Nearest best;
  search(q, best, pred);
  return best;
}

// Spec-facing alias: the proxy-cloud index used by the label transfer.
KdTree build_point_index(const LabeledPointCloud& proxy);

}  // namespace aerogen
