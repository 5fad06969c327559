#include "aerogen/kern/kernels.hpp"

#if defined(AEROGEN_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <limits>

// AVX2 variants, 4 doubles per lane. Operation order matches the scalar
// reference exactly (no FMA, -ffp-contract=off), so results are bit-equal.

namespace aerogen::kern {

void ray_tri_avx2(const double origin[3], const double dir[3],
                  const TriSoA& tris, size_t begin, size_t count,
                  double tmin, double tmax, double* t_out) {
  const __m256d dx = _mm256_set1_pd(dir[0]);
  const __m256d dy = _mm256_set1_pd(dir[1]);
  const __m256d dz = _mm256_set1_pd(dir[2]);
  const __m256d ox = _mm256_set1_pd(origin[0]);
  const __m256d oy = _mm256_set1_pd(origin[1]);
  const __m256d oz = _mm256_set1_pd(origin[2]);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vtmin = _mm256_set1_pd(tmin);
  const __m256d vtmax = _mm256_set1_pd(tmax);
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());

  size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const size_t i = begin + k;
    const __m256d e1x = _mm256_loadu_pd(&tris.e1x[i]);
    const __m256d e1y = _mm256_loadu_pd(&tris.e1y[i]);
    const __m256d e1z = _mm256_loadu_pd(&tris.e1z[i]);
    const __m256d e2x = _mm256_loadu_pd(&tris.e2x[i]);
    const __m256d e2y = _mm256_loadu_pd(&tris.e2y[i]);
    const __m256d e2z = _mm256_loadu_pd(&tris.e2z[i]);

    // p = dir x e2
    const __m256d px = _mm256_sub_pd(_mm256_mul_pd(dy, e2z), _mm256_mul_pd(dz, e2y));
    const __m256d py = _mm256_sub_pd(_mm256_mul_pd(dz, e2x), _mm256_mul_pd(dx, e2z));
    const __m256d pz = _mm256_sub_pd(_mm256_mul_pd(dx, e2y), _mm256_mul_pd(dy, e2x));

    const __m256d det = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(e1x, px), _mm256_mul_pd(e1y, py)),
        _mm256_mul_pd(e1z, pz));
    const __m256d invd = _mm256_div_pd(one, det);

    const __m256d sx = _mm256_sub_pd(ox, _mm256_loadu_pd(&tris.v0x[i]));
    const __m256d sy = _mm256_sub_pd(oy, _mm256_loadu_pd(&tris.v0y[i]));
    const __m256d sz = _mm256_sub_pd(oz, _mm256_loadu_pd(&tris.v0z[i]));

    const __m256d u = _mm256_mul_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(sx, px), _mm256_mul_pd(sy, py)),
                      _mm256_mul_pd(sz, pz)),
        invd);

    // q = s x e1
    const __m256d qx = _mm256_sub_pd(_mm256_mul_pd(sy, e1z), _mm256_mul_pd(sz, e1y));
    const __m256d qy = _mm256_sub_pd(_mm256_mul_pd(sz, e1x), _mm256_mul_pd(sx, e1z));
    const __m256d qz = _mm256_sub_pd(_mm256_mul_pd(sx, e1y), _mm256_mul_pd(sy, e1x));

    const __m256d v = _mm256_mul_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, qx), _mm256_mul_pd(dy, qy)),
                      _mm256_mul_pd(dz, qz)),
        invd);
    const __m256d t = _mm256_mul_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(e2x, qx), _mm256_mul_pd(e2y, qy)),
                      _mm256_mul_pd(e2z, qz)),
        invd);

    // ordered-quiet compares: NaN lanes fail, same as the scalar path
    __m256d mask = _mm256_cmp_pd(u, zero, _CMP_GE_OQ);
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(v, zero, _CMP_GE_OQ));
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(_mm256_add_pd(u, v), one, _CMP_LE_OQ));
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(t, vtmin, _CMP_GT_OQ));
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(t, vtmax, _CMP_LT_OQ));

    _mm256_storeu_pd(&t_out[k], _mm256_blendv_pd(inf, t, mask));
  }

  if (k < count)
    ray_tri_scalar(origin, dir, tris, begin + k, count - k, tmin, tmax, &t_out[k]);
}

void sqdist_avx2(const double q[3], const double* xs, const double* ys,
                 const double* zs, size_t begin, size_t count, double* out) {
  const __m256d qx = _mm256_set1_pd(q[0]);
  const __m256d qy = _mm256_set1_pd(q[1]);
  const __m256d qz = _mm256_set1_pd(q[2]);

  size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const size_t i = begin + k;
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&xs[i]), qx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&ys[i]), qy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(&zs[i]), qz);
    const __m256d d2 = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
        _mm256_mul_pd(dz, dz));
    _mm256_storeu_pd(&out[k], d2);
  }

  if (k < count) sqdist_scalar(q, xs, ys, zs, begin + k, count - k, &out[k]);
}

}  // namespace aerogen::kern

#endif  // AEROGEN_HAVE_AVX2_KERNELS
