#include "aerogen/recon.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "aerogen/rng.hpp"

namespace aerogen {

void NoiseParams::validate() const {
  if (surface_sigma < 0.0) throw std::invalid_argument("noise: surface_sigma must be >= 0");
  if (outlier_rate < 0.0 || outlier_rate > 1.0)
    throw std::invalid_argument("noise: outlier_rate must be in [0,1]");
  if (dropout_prob < 0.0 || dropout_prob > 1.0)
    throw std::invalid_argument("noise: dropout_prob must be in [0,1]");
  if (outlier_radius < 0.0) throw std::invalid_argument("noise: outlier_radius must be >= 0");
  if (min_views < 1) throw std::invalid_argument("noise: min_views must be >= 1");
  if (view_cap < 1) throw std::invalid_argument("noise: view_cap must be >= 1");
  if (density_per_view < 0.0)
    throw std::invalid_argument("noise: density_per_view must be >= 0");
  if (thin_dropout_width < 0.0)
    throw std::invalid_argument("noise: thin_dropout_width must be >= 0");
}

LabeledPointCloud backproject_proxy(const std::vector<DepthLabelImage>& images) {
  LabeledPointCloud cloud;
  if (images.empty()) return cloud;
  const CameraIntrinsics& k0 = images.front().camera.intrinsics;
  for (const auto& img : images) {
    const CameraIntrinsics& k = img.camera.intrinsics;
    if (k.width != k0.width || k.height != k0.height || k.focal != k0.focal ||
        k.cx != k0.cx || k.cy != k0.cy)
      throw std::invalid_argument("backproject_proxy: inconsistent intrinsics");
  }

  for (const auto& img : images) {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        size_t i = static_cast<size_t>(y) * img.width + x;
        if (!img.hit(i)) continue;
        Ray ray = img.camera.pixel_ray(x + 0.5, y + 0.5);
        cloud.push(ray.origin + ray.dir * img.depth[i], img.semantic[i], img.instance[i]);
      }
    }
  }
  return cloud;
}

namespace {

struct ChunkOutput {
  std::vector<Vec3> positions;
  std::vector<std::array<uint8_t, 3>> colors;
  std::vector<uint32_t> origin_tri;
};

}  // namespace

LabeledPointCloud simulate_reconstruction(const LabeledMesh& mesh, const Bvh& bvh,
                                          const FlightPlan& plan, const NoiseParams& params,
                                          int workers, std::vector<uint32_t>* origin_tri) {
  params.validate();
  if (plan.poses.empty())
    throw std::invalid_argument("simulate_reconstruction: empty flight plan");
  if (mesh.empty())
    throw std::invalid_argument("simulate_reconstruction: empty mesh");

  std::vector<Camera> cameras;
  cameras.reserve(plan.poses.size());
  for (const CameraPose& pose : plan.poses) cameras.push_back({plan.intrinsics, pose});

  // Per-instance bbox thinness (minimum extent). Instance 0 (terrain) exempt.
  std::unordered_map<uint32_t, Aabb> inst_box;
  for (size_t t = 0; t < mesh.tri_count(); ++t) {
    uint32_t inst = mesh.tri_instance[t];
    if (inst == 0) continue;
    Aabb& b = inst_box[inst];
    for (int k = 0; k < 3; ++k) b.expand(mesh.tri_vertex(t, k));
  }
  std::unordered_map<uint32_t, bool> inst_thin;
  for (const auto& [inst, b] : inst_box) {
    Vec3 e = b.extent();
    double thinness = std::min({e.x, e.y, e.z});
    inst_thin[inst] = thinness < params.thin_dropout_width;
  }

  const double cand_density = params.density_per_view * params.view_cap;

  // Visible view count, counted up to view_cap. Occlusion segments start a
  // touch off the surface, on the camera side of the plane.
  const int view_count_limit = std::max(params.view_cap, params.min_views);
  auto visible_views = [&](const Vec3& p, const Vec3& normal) {
    int views = 0;
    for (const Camera& cam : cameras) {
      double px, py, z;
      if (!cam.project(p, px, py, z)) continue;
      Vec3 to_cam = cam.pose.position - p;
      double side = normal.dot(to_cam);
      Vec3 start = p + normal * (side >= 0.0 ? 1e-4 : -1e-4);
      if (!bvh.occluded(start, cam.pose.position)) {
        if (++views >= view_count_limit) break;
      }
    }
    return views;
  };

  const size_t n_tri = mesh.tri_count();
  const size_t chunk_tris = 2048;
  const size_t n_chunks = (n_tri + chunk_tris - 1) / chunk_tris;
  std::vector<ChunkOutput> outputs(n_chunks);

  auto run_chunk = [&](size_t ci) {
    Rng rng = Rng::stream(params.seed, "recon_chunk", ci);
    ChunkOutput& out = outputs[ci];
    size_t t0 = ci * chunk_tris;
    size_t t1 = std::min(n_tri, t0 + chunk_tris);
    for (size_t t = t0; t < t1; ++t) {
      double expect = mesh.tri_area(t) * cand_density;
      size_t n = static_cast<size_t>(expect);
      if (rng.uniform() < expect - static_cast<double>(n)) ++n;
      if (n == 0) continue;

      Vec3 a = mesh.tri_vertex(t, 0), b = mesh.tri_vertex(t, 1), c = mesh.tri_vertex(t, 2);
      Vec3 normal = mesh.tri_normal(t);
      uint32_t inst = mesh.tri_instance[t];
      bool thin = inst != 0 && inst_thin.count(inst) && inst_thin.at(inst);

      for (size_t s = 0; s < n; ++s) {
        double u = rng.uniform(), v = rng.uniform();
        if (u + v > 1.0) { u = 1.0 - u; v = 1.0 - v; }
        Vec3 p = a + (b - a) * u + (c - a) * v;

        int views = visible_views(p, normal);
        if (views < params.min_views) continue;
        double keep = static_cast<double>(std::min(views, params.view_cap)) /
                      static_cast<double>(params.view_cap);
        if (keep < 1.0 && !rng.bernoulli(keep)) continue;
        if (thin && rng.bernoulli(params.dropout_prob)) continue;

        Vec3 q = p + normal * rng.normal(0.0, params.surface_sigma);
        if (rng.bernoulli(params.outlier_rate))
          q = p + rng.in_unit_ball() * params.outlier_radius;

        out.positions.push_back(q);
        out.colors.push_back(mesh.tri_color[t]);
        out.origin_tri.push_back(static_cast<uint32_t>(t));
      }
    }
  };

  if (workers <= 1) {
    for (size_t ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          size_t ci = next.fetch_add(1);
          if (ci >= n_chunks) return;
          run_chunk(ci);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Ordered merge keeps the result seed-stable regardless of worker count.
  LabeledPointCloud cloud;
  if (origin_tri) origin_tri->clear();
  for (const ChunkOutput& out : outputs) {
    for (size_t i = 0; i < out.positions.size(); ++i) {
      cloud.push(out.positions[i], out.colors[i], classes::kUnlabeled, 0);
      if (origin_tri) origin_tri->push_back(out.origin_tri[i]);
    }
  }
  return cloud;
}

}  // namespace aerogen
