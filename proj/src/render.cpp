#include "aerogen/render.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "aerogen/classes.hpp"

namespace aerogen {

size_t DepthLabelImage::hit_count() const {
  size_t n = 0;
  for (size_t i = 0; i < depth.size(); ++i)
    if (hit(i)) ++n;
  return n;
}

void DepthLabelImage::validate() const {
  size_t n = static_cast<size_t>(width) * height;
  if (depth.size() != n || semantic.size() != n || instance.size() != n)
    throw std::invalid_argument("depth image: plane sizes inconsistent");
  for (size_t i = 0; i < n; ++i) {
    bool h = hit(i);
    if (h != (semantic[i] != classes::kUnlabeled))
      throw std::invalid_argument("depth image: depth/semantic inconsistent");
    if (!h && instance[i] != 0)
      throw std::invalid_argument("depth image: instance set on a miss");
  }
}

DepthLabelImage render(const Camera& camera, const Bvh& bvh, const LabeledMesh& mesh,
                       int workers) {
  camera.intrinsics.validate();
  DepthLabelImage img;
  img.camera = camera;
  img.width = camera.intrinsics.width;
  img.height = camera.intrinsics.height;
  size_t n = static_cast<size_t>(img.width) * img.height;
  img.depth.assign(n, std::numeric_limits<double>::infinity());
  img.semantic.assign(n, classes::kUnlabeled);
  img.instance.assign(n, 0);

  auto render_rows = [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < img.width; ++x) {
        Ray ray = camera.pixel_ray(x + 0.5, y + 0.5);
        Bvh::Hit hit = bvh.nearest(ray);
        if (!hit.valid()) continue;
        size_t i = static_cast<size_t>(y) * img.width + x;
        img.depth[i] = hit.t;
        img.semantic[i] = mesh.tri_semantic[hit.tri];
        img.instance[i] = mesh.tri_instance[hit.tri];
      }
    }
  };

  if (workers <= 1) {
    render_rows(0, img.height);
  } else {
    std::vector<std::thread> pool;
    int rows_per = (img.height + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      int y0 = w * rows_per;
      int y1 = std::min(img.height, y0 + rows_per);
      if (y0 >= y1) break;
      pool.emplace_back(render_rows, y0, y1);
    }
    for (auto& t : pool) t.join();
  }
  return img;
}

namespace {

constexpr char kMagic[8] = {'D', 'L', 'I', 'M', 'G', '0', '0', '1'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void save_depth_label_image(const DepthLabelImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.write(kMagic, sizeof(kMagic));
  write_raw<uint32_t>(f, static_cast<uint32_t>(img.width));
  write_raw<uint32_t>(f, static_cast<uint32_t>(img.height));
  const auto& k = img.camera.intrinsics;
  write_raw<double>(f, k.focal);
  write_raw<double>(f, k.cx);
  write_raw<double>(f, k.cy);
  const auto& p = img.camera.pose;
  write_raw<double>(f, p.position.x);
  write_raw<double>(f, p.position.y);
  write_raw<double>(f, p.position.z);
  write_raw<double>(f, p.yaw);
  write_raw<double>(f, p.pitch);
  write_raw<double>(f, p.roll);
  for (double d : img.depth) write_raw<float>(f, static_cast<float>(d));
  f.write(reinterpret_cast<const char*>(img.semantic.data()),
          static_cast<std::streamsize>(img.semantic.size()));
  f.write(reinterpret_cast<const char*>(img.instance.data()),
          static_cast<std::streamsize>(img.instance.size() * sizeof(uint32_t)));
  if (!f) throw std::runtime_error("write failed: " + path);
}

DepthLabelImage load_depth_label_image(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  char magic[8];
  f.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error(path + ": bad magic");
  DepthLabelImage img;
  img.width = static_cast<int>(read_raw<uint32_t>(f));
  img.height = static_cast<int>(read_raw<uint32_t>(f));
  img.camera.intrinsics.width = img.width;
  img.camera.intrinsics.height = img.height;
  img.camera.intrinsics.focal = read_raw<double>(f);
  img.camera.intrinsics.cx = read_raw<double>(f);
  img.camera.intrinsics.cy = read_raw<double>(f);
  img.camera.pose.position.x = read_raw<double>(f);
  img.camera.pose.position.y = read_raw<double>(f);
  img.camera.pose.position.z = read_raw<double>(f);
  img.camera.pose.yaw = read_raw<double>(f);
  img.camera.pose.pitch = read_raw<double>(f);
  img.camera.pose.roll = read_raw<double>(f);
  size_t n = static_cast<size_t>(img.width) * img.height;
  img.depth.resize(n);
  for (double& d : img.depth) d = read_raw<float>(f);
  img.semantic.resize(n);
  f.read(reinterpret_cast<char*>(img.semantic.data()), static_cast<std::streamsize>(n));
  img.instance.resize(n);
  f.read(reinterpret_cast<char*>(img.instance.data()),
         static_cast<std::streamsize>(n * sizeof(uint32_t)));
  if (!f) throw std::runtime_error(path + ": truncated image payload");
  return img;
}

}  // namespace aerogen
