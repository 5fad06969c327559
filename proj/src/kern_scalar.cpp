#include <limits>

#include "aerogen/kern/kernels.hpp"

// Reference kernels. Compiled with -ffp-contract=off so the SIMD variants,
// which use the same operation order, produce bit-identical results.

namespace aerogen::kern {

void ray_tri_scalar(const double origin[3], const double dir[3],
                    const TriSoA& tris, size_t begin, size_t count,
                    double tmin, double tmax, double* t_out) {
  const double ox = origin[0], oy = origin[1], oz = origin[2];
  const double dx = dir[0], dy = dir[1], dz = dir[2];
  constexpr double inf = std::numeric_limits<double>::infinity();

  for (size_t k = 0; k < count; ++k) {
    const size_t i = begin + k;
    const double e1xv = tris.e1x[i], e1yv = tris.e1y[i], e1zv = tris.e1z[i];
    const double e2xv = tris.e2x[i], e2yv = tris.e2y[i], e2zv = tris.e2z[i];

    // p = dir x e2
    const double px = dy * e2zv - dz * e2yv;
    const double py = dz * e2xv - dx * e2zv;
    const double pz = dx * e2yv - dy * e2xv;

    const double det = (e1xv * px + e1yv * py) + e1zv * pz;
    const double inv = 1.0 / det;

    const double sx = ox - tris.v0x[i];
    const double sy = oy - tris.v0y[i];
    const double sz = oz - tris.v0z[i];

    const double u = ((sx * px + sy * py) + sz * pz) * inv;

    // q = s x e1
    const double qx = sy * e1zv - sz * e1yv;
    const double qy = sz * e1xv - sx * e1zv;
    const double qz = sx * e1yv - sy * e1xv;

    const double v = ((dx * qx + dy * qy) + dz * qz) * inv;
    const double t = ((e2xv * qx + e2yv * qy) + e2zv * qz) * inv;

    // NaN from det == 0 fails every comparison, which is the miss we want.
    const bool hit = (u >= 0.0) && (v >= 0.0) && (u + v <= 1.0) &&
                     (t > tmin) && (t < tmax);
    t_out[k] = hit ? t : inf;
  }
}

void sqdist_scalar(const double q[3], const double* xs, const double* ys,
                   const double* zs, size_t begin, size_t count, double* out) {
  const double qx = q[0], qy = q[1], qz = q[2];
  for (size_t k = 0; k < count; ++k) {
    const size_t i = begin + k;
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    out[k] = (dx * dx + dy * dy) + dz * dz;
  }
}

}  // namespace aerogen::kern
