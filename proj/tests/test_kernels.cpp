#include <doctest.h>

#include <cstring>
#include <limits>

#include "aerogen/kern/kernels.hpp"
#include "aerogen/rng.hpp"

using namespace aerogen;

namespace {

kern::TriSoA random_tris(Rng& rng, size_t n) {
  kern::TriSoA soa;
  for (size_t i = 0; i < n; ++i) {
    Vec3 a{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Vec3 b = a + Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vec3 c = a + Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    soa.push(a, b, c);
  }
  return soa;
}

}  // namespace

TEST_CASE("ray_tri scalar and avx2 paths are bit-identical") {
#if defined(AEROGEN_HAVE_AVX2_KERNELS)
  if (kern::active_kernel_name() != "avx2") return;  // no AVX2 on this machine
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 1 + rng.uniform_index(37);  // odd sizes exercise the tail path
    kern::TriSoA soa = random_tris(rng, n);
    double o[3] = {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    Vec3 d = Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}.normalized();
    double dir[3] = {d.x, d.y, d.z};

    std::vector<double> t_scalar(n), t_avx2(n);
    kern::ray_tri_scalar(o, dir, soa, 0, n, 1e-9,
                         std::numeric_limits<double>::infinity(), t_scalar.data());
    kern::ray_tri_avx2(o, dir, soa, 0, n, 1e-9,
                       std::numeric_limits<double>::infinity(), t_avx2.data());
    CHECK(std::memcmp(t_scalar.data(), t_avx2.data(), n * sizeof(double)) == 0);
  }
#endif
}

TEST_CASE("sqdist scalar and avx2 paths are bit-identical") {
#if defined(AEROGEN_HAVE_AVX2_KERNELS)
  if (kern::active_kernel_name() != "avx2") return;
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 1 + rng.uniform_index(41);
    std::vector<double> xs(n), ys(n), zs(n);
    for (size_t i = 0; i < n; ++i) {
      xs[i] = rng.uniform(-100, 100);
      ys[i] = rng.uniform(-100, 100);
      zs[i] = rng.uniform(-100, 100);
    }
    double q[3] = {rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100)};
    std::vector<double> a(n), b(n);
    kern::sqdist_scalar(q, xs.data(), ys.data(), zs.data(), 0, n, a.data());
    kern::sqdist_avx2(q, xs.data(), ys.data(), zs.data(), 0, n, b.data());
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
  }
#endif
}

TEST_CASE("ray_tri hit semantics") {
  kern::TriSoA soa;
  soa.push({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  double o[3] = {0.25, 0.25, 1.0};
  double down[3] = {0.0, 0.0, -1.0};
  double t;
  kern::ray_tri_scalar(o, down, soa, 0, 1, 1e-9, 1e30, &t);
  CHECK(t == doctest::Approx(1.0));

  double up[3] = {0.0, 0.0, 1.0};
  kern::ray_tri_scalar(o, up, soa, 0, 1, 1e-9, 1e30, &t);
  CHECK(std::isinf(t));

  // parallel to the plane: det == 0 must come out as a miss, not NaN
  double side[3] = {1.0, 0.0, 0.0};
  double o2[3] = {-1.0, 0.25, 0.0};
  kern::ray_tri_scalar(o2, side, soa, 0, 1, 1e-9, 1e30, &t);
  CHECK(std::isinf(t));
}

TEST_CASE("kernel dispatch reports a known implementation") {
  std::string name = kern::active_kernel_name();
  CHECK((name == "avx2" || name == "scalar"));
  CHECK(kern::ray_tri() != nullptr);
  CHECK(kern::sqdist() != nullptr);
}
