#include <cstdlib>
#include <string>

#include "aerogen/kern/kernels.hpp"

namespace aerogen::kern {

namespace {

bool cpu_has_avx2() {
#if defined(AEROGEN_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

struct Selection {
  RayTriFn ray_tri;
  SqDistFn sqdist;
  std::string name;
};

Selection select() {
  const char* env = std::getenv("AEROGEN_KERNEL");
  std::string want = env ? env : "";
#if defined(AEROGEN_HAVE_AVX2_KERNELS)
  if (want != "scalar" && cpu_has_avx2())
    return {&ray_tri_avx2, &sqdist_avx2, "avx2"};
#endif
  return {&ray_tri_scalar, &sqdist_scalar, "scalar"};
}

const Selection& active() {
  static const Selection sel = select();
  return sel;
}

}  // namespace

RayTriFn ray_tri() { return active().ray_tri; }
SqDistFn sqdist() { return active().sqdist; }
std::string active_kernel_name() { return active().name; }

}  // namespace aerogen::kern
