#pragma once

#include <cstdint>
#include <vector>

#include "aerogen/kdtree.hpp"
#include "aerogen/pointcloud.hpp"

namespace aerogen {

struct TransferParams {
  double max_nn_distance = 1.0;   // m
  double ground_link_radius = 0.6;  // 2x the 0.3 m grid spacing
  uint8_t fallback_class = classes::kClutter;

  void validate() const;
};

struct TransferStats {
  size_t total = 0;
  size_t out_of_range = 0;  // points that received fallback_class
  double unlabeled_fraction() const {
    return total ? static_cast<double>(out_of_range) / static_cast<double>(total) : 0.0;
  }
};

// Each point takes semantic + instance of its nearest proxy point within
// max_nn_distance (ties to the lowest proxy index); otherwise fallback_class
// and instance 0. Proxy must be fully labeled.
LabeledPointCloud transfer_labels(const LabeledPointCloud& recon,
                                  const LabeledPointCloud& proxy,
                                  const TransferParams& params, int workers = 1,
                                  TransferStats* stats = nullptr);

struct ConnectivityStats {
  size_t ground_points = 0;
  size_t components = 0;
  size_t relabeled = 0;
  bool no_ground = false;
};

// Keeps the largest radius-graph component of ground-family points as ground;
// every other ground-family point takes the class of its nearest non-ground
// neighbor within max_nn_distance, else fallback to clutter. Equal-size
// component ties go to the component containing the lowest point index.
LabeledPointCloud enforce_ground_connectivity(const LabeledPointCloud& cloud,
                                              const TransferParams& params,
                                              ConnectivityStats* stats = nullptr);

}  // namespace aerogen
