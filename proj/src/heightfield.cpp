#include "aerogen/heightfield.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aerogen/rng.hpp"

namespace aerogen {

void HeightField::validate() const {
  if (cell_size <= 0.0) throw std::invalid_argument("heightfield: cell_size must be > 0");
  if (rows == 0 || cols == 0 || elevations.size() != rows * cols)
    throw std::invalid_argument("heightfield: empty or inconsistent grid");
  for (double e : elevations)
    if (!std::isfinite(e)) throw std::invalid_argument("heightfield: non-finite elevation");
}

double HeightField::height_at(double x, double y) const {
  double fx = (x - origin.x) / cell_size;
  double fy = (y - origin.y) / cell_size;
  fx = std::clamp(fx, 0.0, static_cast<double>(cols - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(rows - 1));
  size_t c0 = std::min(static_cast<size_t>(fx), cols - 1);
  size_t r0 = std::min(static_cast<size_t>(fy), rows - 1);
  size_t c1 = std::min(c0 + 1, cols - 1);
  size_t r1 = std::min(r0 + 1, rows - 1);
  double tx = fx - static_cast<double>(c0);
  double ty = fy - static_cast<double>(r0);
  double h00 = at(r0, c0), h01 = at(r0, c1), h10 = at(r1, c0), h11 = at(r1, c1);
  double a = h00 + (h01 - h00) * tx;
  double b = h10 + (h11 - h10) * tx;
  return a + (b - a) * ty;
}

namespace {

// Lattice hash -> uniform double in [0,1).
double lattice_value(uint64_t seed, int64_t ix, int64_t iy) {
  uint64_t h = Rng::mix(seed, Rng::mix(static_cast<uint64_t>(ix) * 0x9e3779b97f4a7c15ULL,
                                       static_cast<uint64_t>(iy)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Single octave of value noise at lattice scale `freq` cells.
double value_noise(uint64_t seed, double x, double y) {
  double fx = std::floor(x), fy = std::floor(y);
  int64_t ix = static_cast<int64_t>(fx), iy = static_cast<int64_t>(fy);
  double tx = smoothstep(x - fx), ty = smoothstep(y - fy);
  double v00 = lattice_value(seed, ix, iy);
  double v01 = lattice_value(seed, ix + 1, iy);
  double v10 = lattice_value(seed, ix, iy + 1);
  double v11 = lattice_value(seed, ix + 1, iy + 1);
  double a = v00 + (v01 - v00) * tx;
  double b = v10 + (v11 - v10) * tx;
  return a + (b - a) * ty;
}

}  // namespace

HeightField generate_terrain(uint64_t seed, Vec2 extent, double cell_size,
                             double relief_amplitude) {
  if (extent.x <= 0.0 || extent.y <= 0.0)
    throw std::invalid_argument("generate_terrain: extent must be positive");
  if (cell_size <= 0.0)
    throw std::invalid_argument("generate_terrain: cell_size must be positive");
  if (relief_amplitude < 0.0)
    throw std::invalid_argument("generate_terrain: relief_amplitude must be >= 0");

  HeightField hf;
  hf.origin = {0.0, 0.0};
  hf.cell_size = cell_size;
  hf.cols = static_cast<size_t>(std::floor(extent.x / cell_size)) + 1;
  hf.rows = static_cast<size_t>(std::floor(extent.y / cell_size)) + 1;
  hf.elevations.resize(hf.rows * hf.cols);

  // Three octaves; weighted average of [0,1) octaves stays in [0,1), so the
  // total range is bounded by relief_amplitude.
  const double base_wavelength = 40.0;  // m
  const double weights[3] = {1.0, 0.5, 0.25};
  const double wsum = weights[0] + weights[1] + weights[2];

  for (size_t r = 0; r < hf.rows; ++r) {
    for (size_t c = 0; c < hf.cols; ++c) {
      double x = static_cast<double>(c) * cell_size;
      double y = static_cast<double>(r) * cell_size;
      double v = 0.0;
      double wavelength = base_wavelength;
      for (int o = 0; o < 3; ++o) {
        v += weights[o] * value_noise(Rng::mix(seed, static_cast<uint64_t>(o)),
                                      x / wavelength, y / wavelength);
        wavelength *= 0.5;
      }
      hf.at(r, c) = relief_amplitude * (v / wsum);
    }
  }
  return hf;
}

HeightField sculpt_ground_details(const HeightField& hf, uint64_t seed,
                                  double ditch_rate, double bump_rate) {
  if (ditch_rate < 0.0 || bump_rate < 0.0)
    throw std::invalid_argument("sculpt_ground_details: rates must be >= 0");
  hf.validate();

  HeightField out = hf;
  Vec2 extent = hf.max_corner() - hf.origin;
  double km = (extent.x + extent.y) / 1000.0;

  auto carve = [&](Rng& rng, size_t n, bool ditch) {
    for (size_t k = 0; k < n; ++k) {
      Vec2 start{rng.uniform(hf.origin.x, hf.origin.x + extent.x),
                 rng.uniform(hf.origin.y, hf.origin.y + extent.y)};
      double ang = rng.uniform(0.0, 2.0 * M_PI);
      double len = ditch ? rng.uniform(20.0, 100.0) : rng.uniform(5.0, 20.0);
      Vec2 end = start + Vec2{std::cos(ang), std::sin(ang)} * len;
      double half_width = ditch ? rng.uniform(0.3, 1.0) : rng.uniform(0.3, 0.8);
      double depth = rng.uniform(0.1, 0.5);  // spec caps feature depth/height at 0.5
      double sign = ditch ? -1.0 : 1.0;

      for (size_t r = 0; r < out.rows; ++r) {
        for (size_t c = 0; c < out.cols; ++c) {
          Vec2 p{out.origin.x + static_cast<double>(c) * out.cell_size,
                 out.origin.y + static_cast<double>(r) * out.cell_size};
          double d = std::sqrt(point_segment_dist2(p, start, end));
          if (d < half_width) {
            double falloff = 0.5 * (1.0 + std::cos(M_PI * d / half_width));
            out.at(r, c) += sign * depth * falloff;
          }
        }
      }
    }
  };

  Rng ditch_rng = Rng::stream(seed, "sculpt.ditch");
  Rng bump_rng = Rng::stream(seed, "sculpt.bump");
  size_t n_ditch = ditch_rate > 0.0 ? static_cast<size_t>(std::ceil(ditch_rate * km)) : 0;
  size_t n_bump = bump_rate > 0.0 ? static_cast<size_t>(std::ceil(bump_rate * km)) : 0;
  carve(ditch_rng, n_ditch, true);
  carve(bump_rng, n_bump, false);
  return out;
}

void save_heightfield(const HeightField& hf, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "origin " << hf.origin.x << " " << hf.origin.y << "\n";
  f << "cell_size " << hf.cell_size << "\n";
  f << "rows " << hf.rows << "\n";
  f << "cols " << hf.cols << "\n";
  f.precision(17);
  for (size_t r = 0; r < hf.rows; ++r) {
    for (size_t c = 0; c < hf.cols; ++c) {
      f << hf.at(r, c) << (c + 1 == hf.cols ? '\n' : ' ');
    }
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

HeightField load_heightfield(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  HeightField hf;
  std::string key;
  f >> key >> hf.origin.x >> hf.origin.y;
  if (key != "origin") throw std::runtime_error(path + ": expected 'origin' header");
  f >> key >> hf.cell_size;
  if (key != "cell_size") throw std::runtime_error(path + ": expected 'cell_size' header");
  f >> key >> hf.rows;
  if (key != "rows") throw std::runtime_error(path + ": expected 'rows' header");
  f >> key >> hf.cols;
  if (key != "cols") throw std::runtime_error(path + ": expected 'cols' header");
  hf.elevations.resize(hf.rows * hf.cols);
  for (double& e : hf.elevations)
    if (!(f >> e)) throw std::runtime_error(path + ": truncated elevation grid");
  hf.validate();
  return hf;
}

}  // namespace aerogen
