#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/geom.hpp"

namespace aerogen::kern {

// Structure-of-arrays triangle pack consumed by the batched ray kernels.
// e1 = b - a, e2 = c - a.
struct TriSoA {
  std::vector<double> v0x, v0y, v0z;
  std::vector<double> e1x, e1y, e1z;
  std::vector<double> e2x, e2y, e2z;

  size_t size() const { return v0x.size(); }

  void push(const Vec3& a, const Vec3& b, const Vec3& c) {
    v0x.push_back(a.x); v0y.push_back(a.y); v0z.push_back(a.z);
    e1x.push_back(b.x - a.x); e1y.push_back(b.y - a.y); e1z.push_back(b.z - a.z);
    e2x.push_back(c.x - a.x); e2y.push_back(c.y - a.y); e2z.push_back(c.z - a.z);
  }
};

// Moller-Trumbore ray parameter for triangles [begin, begin+count).
// Writes t into t_out[0..count); misses (including t outside (tmin, tmax))
// become +inf. Both implementations perform the identical IEEE operation
// sequence, so their outputs are bit-equal; the equivalence test asserts it.
using RayTriFn = void (*)(const double origin[3], const double dir[3],
                          const TriSoA& tris, size_t begin, size_t count,
                          double tmin, double tmax, double* t_out);

// Squared distances from q to points [begin, begin+count) of an SoA array.
using SqDistFn = void (*)(const double q[3], const double* xs, const double* ys,
                          const double* zs, size_t begin, size_t count,
                          double* out);

void ray_tri_scalar(const double origin[3], const double dir[3],
                    const TriSoA& tris, size_t begin, size_t count,
                    double tmin, double tmax, double* t_out);
void sqdist_scalar(const double q[3], const double* xs, const double* ys,
                   const double* zs, size_t begin, size_t count, double* out);

#if defined(__x86_64__) || defined(_M_X64)
#define AEROGEN_HAVE_AVX2_KERNELS 1
void ray_tri_avx2(const double origin[3], const double dir[3],
                  const TriSoA& tris, size_t begin, size_t count,
                  double tmin, double tmax, double* t_out);
void sqdist_avx2(const double q[3], const double* xs, const double* ys,
                 const double* zs, size_t begin, size_t count, double* out);
#endif

// Runtime-selected entry points. Selection happens once: AVX2 when the CPU
// supports it, scalar otherwise; env AEROGEN_KERNEL=scalar|avx2 overrides.
RayTriFn ray_tri();
SqDistFn sqdist();
std::string active_kernel_name();

}  // namespace aerogen::kern
