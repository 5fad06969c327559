#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace aerogen::classes {

// 18-class synthetic taxonomy. Ids 0..13 are exactly the 14 instance-capable
// classes, in the instance-benchmark column order; 14..17 are surface classes.
inline constexpr uint8_t kBuilding = 0;
inline constexpr uint8_t kLowVeg = 1;
inline constexpr uint8_t kMediumVeg = 2;
inline constexpr uint8_t kHighVeg = 3;
inline constexpr uint8_t kVehicle = 4;
inline constexpr uint8_t kTruck = 5;
inline constexpr uint8_t kAircraft = 6;
inline constexpr uint8_t kMilitaryVehicle = 7;
inline constexpr uint8_t kBike = 8;
inline constexpr uint8_t kMotorcycle = 9;
inline constexpr uint8_t kLightPole = 10;
inline constexpr uint8_t kStreetSign = 11;
inline constexpr uint8_t kClutter = 12;
inline constexpr uint8_t kFence = 13;
inline constexpr uint8_t kRoad = 14;
inline constexpr uint8_t kWindow = 15;
inline constexpr uint8_t kDirt = 16;
inline constexpr uint8_t kGrass = 17;

inline constexpr int kCount = 18;
inline constexpr int kInstanceCapableCount = 14;
inline constexpr uint8_t kUnlabeled = 255;

inline constexpr std::array<std::string_view, kCount> kNames = {
    "building",       "low_vegetation", "medium_vegetation", "high_vegetation",
    "vehicle",        "truck",          "aircraft",          "military_vehicle",
    "bike",           "motorcycle",     "light_pole",        "street_sign",
    "clutter",        "fence",          "road",              "window",
    "dirt",           "grass"};

inline constexpr bool instance_capable(uint8_t id) { return id < kInstanceCapableCount; }

inline constexpr bool valid(uint8_t id) { return id < kCount; }

// lookup by name; returns kUnlabeled when unknown
uint8_t id_from_name(std::string_view name);

inline std::string name_of(uint8_t id) {
  if (id == kUnlabeled) return "unlabeled";
  return id < kCount ? std::string(kNames[id]) : "invalid";
}

// Ground-family classes for the connectivity constraint.
inline constexpr bool ground_family(uint8_t id) {
  return id == kRoad || id == kDirt || id == kGrass;
}

// Vegetation classification from object bounding-box height. Boundary heights
// exactly 2.0 / 5.0 classify downward.
inline constexpr uint8_t vegetation_class_for_height(double h) {
  if (h <= 2.0) return kLowVeg;
  if (h <= 5.0) return kMediumVeg;
  return kHighVeg;
}

inline constexpr bool is_vegetation(uint8_t id) {
  return id == kLowVeg || id == kMediumVeg || id == kHighVeg;
}

// 6-class real-survey taxonomy (report column order).
namespace real6 {
inline constexpr uint8_t kGround = 0;
inline constexpr uint8_t kBuilding = 1;
inline constexpr uint8_t kTree = 2;
inline constexpr uint8_t kCar = 3;
inline constexpr uint8_t kLightPole = 4;
inline constexpr uint8_t kFence = 5;
inline constexpr int kCount = 6;
inline constexpr std::array<std::string_view, kCount> kNames = {
    "ground", "building", "tree", "car", "light_pole", "fence"};
}  // namespace real6

// 9-class reduced instance taxonomy.
namespace reduced9 {
inline constexpr uint8_t kBuilding = 0;
inline constexpr uint8_t kVegetation = 1;
inline constexpr uint8_t kVehicle = 2;
inline constexpr uint8_t kLargeVehicle = 3;
inline constexpr uint8_t kAircraft = 4;
inline constexpr uint8_t kBike = 5;
inline constexpr uint8_t kPolesAndSigns = 6;
inline constexpr uint8_t kClutter = 7;
inline constexpr uint8_t kFence = 8;
inline constexpr int kCount = 9;
inline constexpr std::array<std::string_view, kCount> kNames = {
    "building", "vegetation", "vehicle",  "large_vehicle", "aircraft",
    "bike",     "poles_and_signs", "clutter", "fence"};
}  // namespace reduced9

}  // namespace aerogen::classes
