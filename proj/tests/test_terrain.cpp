#include <doctest.h>

#include "aerogen/heightfield.hpp"

using namespace aerogen;

TEST_CASE("zero relief amplitude gives a flat field") {
  HeightField hf = generate_terrain(3, {50, 50}, 1.0, 0.0);
  for (double e : hf.elevations) CHECK(e == 0.0);
}

TEST_CASE("same seed reproduces the grid bit for bit") {
  HeightField a = generate_terrain(11, {80, 60}, 0.5, 4.0);
  HeightField b = generate_terrain(11, {80, 60}, 0.5, 4.0);
  REQUIRE(a.elevations.size() == b.elevations.size());
  for (size_t i = 0; i < a.elevations.size(); ++i) CHECK(a.elevations[i] == b.elevations[i]);
  HeightField c = generate_terrain(12, {80, 60}, 0.5, 4.0);
  CHECK(a.elevations != c.elevations);
}

TEST_CASE("height range bounded by relief amplitude (exhaustive scan)") {
  HeightField hf = generate_terrain(1, {100, 100}, 1.0, 2.5);
  double lo = hf.elevations[0], hi = hf.elevations[0];
  for (double e : hf.elevations) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  CHECK(hi - lo <= 2.5);
  CHECK(lo >= 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate_terrain(1, {0, 10}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_terrain(1, {10, 10}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sculpt_ground_details(generate_terrain(1, {10, 10}, 1.0, 1.0), 1, -1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("sculpt with zero rates is the identity") {
  HeightField hf = generate_terrain(5, {60, 60}, 1.0, 2.0);
  HeightField out = sculpt_ground_details(hf, 9, 0.0, 0.0);
  CHECK(out.elevations == hf.elevations);
}

TEST_CASE("ditches carve strictly below the original surface") {
  HeightField hf = generate_terrain(5, {60, 60}, 1.0, 1.0);
  HeightField out = sculpt_ground_details(hf, 9, 20.0, 0.0);
  size_t below = 0;
  double max_drop = 0.0;
  for (size_t i = 0; i < hf.elevations.size(); ++i) {
    if (out.elevations[i] < hf.elevations[i]) ++below;
    max_drop = std::max(max_drop, hf.elevations[i] - out.elevations[i]);
  }
  CHECK(below > 0);
  CHECK(max_drop <= 0.5 + 1e-12);

  HeightField bumps = sculpt_ground_details(hf, 9, 0.0, 20.0);
  size_t above = 0;
  for (size_t i = 0; i < hf.elevations.size(); ++i)
    if (bumps.elevations[i] > hf.elevations[i]) ++above;
  CHECK(above > 0);
}

TEST_CASE("sculpt is deterministic per seed") {
  HeightField hf = generate_terrain(5, {60, 60}, 1.0, 1.0);
  HeightField a = sculpt_ground_details(hf, 13, 10.0, 10.0);
  HeightField b = sculpt_ground_details(hf, 13, 10.0, 10.0);
  CHECK(a.elevations == b.elevations);
}

TEST_CASE("bilinear interpolation hits grid nodes exactly") {
  HeightField hf = generate_terrain(2, {20, 20}, 2.0, 3.0);
  for (size_t r = 0; r < hf.rows; ++r)
    for (size_t c = 0; c < hf.cols; ++c)
      CHECK(hf.height_at(hf.origin.x + c * hf.cell_size, hf.origin.y + r * hf.cell_size) ==
            doctest::Approx(hf.at(r, c)));
}
