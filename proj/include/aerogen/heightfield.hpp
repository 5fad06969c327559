#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/geom.hpp"

namespace aerogen {

// Regular elevation grid, row-major, rows along +y.
struct HeightField {
  Vec2 origin;
  double cell_size = 1.0;
  size_t rows = 0, cols = 0;
  std::vector<double> elevations;  // rows * cols

  double& at(size_t r, size_t c) { return elevations[r * cols + c]; }
  double at(size_t r, size_t c) const { return elevations[r * cols + c]; }

  Vec2 cell_center(size_t r, size_t c) const {
    return {origin.x + (static_cast<double>(c) + 0.5) * cell_size,
            origin.y + (static_cast<double>(r) + 0.5) * cell_size};
  }

  Vec2 max_corner() const {
    return {origin.x + static_cast<double>(cols - 1) * cell_size,
            origin.y + static_cast<double>(rows - 1) * cell_size};
  }

  // Bilinear interpolation, clamped at the borders.
  double height_at(double x, double y) const;

  void validate() const;  // throws std::invalid_argument on bad invariants
};

// Value-noise terrain. Deterministic in (seed); height range <= relief_amplitude.
HeightField generate_terrain(uint64_t seed, Vec2 extent, double cell_size,
                             double relief_amplitude);

// Carves ditches / raises speed bumps as linear features. Rates are features
// per km of combined axis extent; depth/height of any feature <= 0.5 m.
HeightField sculpt_ground_details(const HeightField& hf, uint64_t seed,
                                  double ditch_rate, double bump_rate);

// Plain-text grid format: origin / cell_size / rows / cols header lines,
// then row-major elevations.
void save_heightfield(const HeightField& hf, const std::string& path);
HeightField load_heightfield(const std::string& path);

}  // namespace aerogen
