#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aerogen {

struct ConfusionMatrix {
  size_t k = 0;
  std::vector<uint64_t> counts;  // k*k, rows = ground truth, cols = prediction

  uint64_t& at(size_t gt, size_t pred) { return counts[gt * k + pred]; }
  uint64_t at(size_t gt, size_t pred) const { return counts[gt * k + pred]; }
  uint64_t total() const;
};

ConfusionMatrix confusion(const std::vector<uint8_t>& gt, const std::vector<uint8_t>& pred,
                          size_t k);

struct SemanticScores {
  std::vector<double> iou;          // per class; NaN when not evaluated
  std::vector<bool> evaluated;      // TP+FP+FN > 0
  double miou = 0.0;                // mean over evaluated classes
  double oacc = 0.0;                // trace / total
};

SemanticScores semantic_scores(const ConfusionMatrix& cm);

struct InstancePrediction {
  std::vector<uint32_t> indices;  // point index set
  uint8_t class_id = 0;
  double confidence = 0.0;
};

struct GtInstance {
  std::vector<uint32_t> indices;
  uint8_t class_id = 0;
};

// Builds gt instances from per-point labels (instance 0 = none); only
// instance-capable points contribute.
std::vector<GtInstance> gt_instances_from_labels(const std::vector<uint8_t>& semantic,
                                                 const std::vector<uint32_t>& instance);

struct ApOptions {
  // mAP band 0.50:0.05:0.95 plus the AP50 / AP25 singles.
  std::vector<double> map_thresholds = {0.50, 0.55, 0.60, 0.65, 0.70,
                                        0.75, 0.80, 0.85, 0.90, 0.95};
  bool include_classes_without_gt = false;  // when true they enter the mean as 0
  size_t point_count = 0;  // when > 0, prediction indices are range-checked
};

struct ApReport {
  std::vector<uint8_t> class_ids;  // classes present in gt (sorted)
  std::vector<double> ap;          // mean over map_thresholds, per class
  std::vector<double> ap50;
  std::vector<double> ap25;
  double map = 0.0, map50 = 0.0, map25 = 0.0;
};

// ScanNet-style protocol: per class, predictions in descending confidence
// (ties: lower index first); each greedily takes the unmatched gt of maximal
// IoU when that IoU >= threshold (IoU ties: lower gt index). 101-point
// interpolated precision.
ApReport instance_ap(const std::vector<GtInstance>& gts,
                     const std::vector<InstancePrediction>& preds,
                     const ApOptions& options = {});

// Single-threshold AP for one class; exposed for the oracle tests.
double average_precision_for_class(const std::vector<GtInstance>& gts,
                                   const std::vector<InstancePrediction>& preds,
                                   uint8_t class_id, double iou_threshold,
                                   size_t point_count = 0);

struct SegmentationReport {
  std::vector<std::string> class_names;
  SemanticScores semantic;
  std::optional<ApReport> instances;
  std::vector<std::string> instance_class_names;
};

void save_report_csv(const SegmentationReport& report, const std::string& path);
void save_report_json(const SegmentationReport& report, const std::string& path);

}  // namespace aerogen
