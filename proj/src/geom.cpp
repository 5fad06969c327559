#include "aerogen/geom.hpp"

#include <stdexcept>

#include "aerogen/classes.hpp"

namespace aerogen {

std::vector<std::array<uint32_t, 3>> triangulate_polygon(const std::vector<Vec2>& ring) {
  size_t n = ring.size();
  if (n < 3) throw std::invalid_argument("triangulate_polygon: need >= 3 vertices");

  std::vector<uint32_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = static_cast<uint32_t>(i);

  // Expect CCW input; flipped rings are handled by the caller.
  std::vector<std::array<uint32_t, 3>> tris;
  tris.reserve(n - 2);

  auto convex = [&](uint32_t a, uint32_t b, uint32_t c) {
    return (ring[b] - ring[a]).cross(ring[c] - ring[b]) > 0.0;
  };
  auto in_tri = [&](const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    double d1 = (b - a).cross(p - a);
    double d2 = (c - b).cross(p - b);
    double d3 = (a - c).cross(p - c);
    return d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0;
  };

  size_t guard = 0;
  while (idx.size() > 3) {
    bool clipped = false;
    for (size_t i = 0; i < idx.size(); ++i) {
      uint32_t ia = idx[(i + idx.size() - 1) % idx.size()];
      uint32_t ib = idx[i];
      uint32_t ic = idx[(i + 1) % idx.size()];
      if (!convex(ia, ib, ic)) continue;
      bool ear = true;
      for (uint32_t j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        if (in_tri(ring[j], ring[ia], ring[ib], ring[ic])) { ear = false; break; }
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) {
      // Collinear runs can defeat the strict-convexity test; fall back to a fan.
      if (++guard > 1) throw std::runtime_error("triangulate_polygon: no ear found");
      for (size_t i = 1; i + 1 < idx.size(); ++i)
        tris.push_back({idx[0], idx[i], idx[i + 1]});
      idx.clear();
      return tris;
    }
  }
  if (idx.size() == 3) tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

}  // namespace aerogen

namespace aerogen::classes {

uint8_t id_from_name(std::string_view name) {
  for (int i = 0; i < kCount; ++i)
    if (kNames[i] == name) return static_cast<uint8_t>(i);
  return kUnlabeled;
}

}  // namespace aerogen::classes
