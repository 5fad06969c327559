#include "aerogen/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace aerogen {

uint64_t ConfusionMatrix::total() const {
  uint64_t t = 0;
  for (uint64_t c : counts) t += c;
  return t;
}

ConfusionMatrix confusion(const std::vector<uint8_t>& gt, const std::vector<uint8_t>& pred,
                          size_t k) {
  if (gt.size() != pred.size())
    throw std::invalid_argument("confusion: gt and pred lengths differ");
  if (k == 0) throw std::invalid_argument("confusion: k must be > 0");
  ConfusionMatrix cm;
  cm.k = k;
  cm.counts.assign(k * k, 0);
  for (size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] >= k || pred[i] >= k)
      throw std::invalid_argument("confusion: label >= k at point " + std::to_string(i));
    ++cm.at(gt[i], pred[i]);
  }
  return cm;
}

SemanticScores semantic_scores(const ConfusionMatrix& cm) {
  if (cm.k == 0 || cm.counts.empty())
    throw std::invalid_argument("semantic_scores: empty confusion matrix");
  SemanticScores s;
  s.iou.assign(cm.k, std::numeric_limits<double>::quiet_NaN());
  s.evaluated.assign(cm.k, false);

  uint64_t trace = 0;
  double iou_sum = 0.0;
  size_t evaluated = 0;
  for (size_t c = 0; c < cm.k; ++c) {
    uint64_t tp = cm.at(c, c);
    uint64_t fp = 0, fn = 0;
    for (size_t o = 0; o < cm.k; ++o) {
      if (o == c) continue;
      fp += cm.at(o, c);
      fn += cm.at(c, o);
    }
    trace += tp;
    uint64_t denom = tp + fp + fn;
    if (denom == 0) continue;  // class absent from gt and pred: excluded, flagged
    s.iou[c] = static_cast<double>(tp) / static_cast<double>(denom);
    s.evaluated[c] = true;
    iou_sum += s.iou[c];
    ++evaluated;
  }
  uint64_t total = cm.total();
  s.oacc = total ? static_cast<double>(trace) / static_cast<double>(total) : 0.0;
  s.miou = evaluated ? iou_sum / static_cast<double>(evaluated) : 0.0;
  return s;
}

std::vector<GtInstance> gt_instances_from_labels(const std::vector<uint8_t>& semantic,
                                                 const std::vector<uint32_t>& instance) {
  if (semantic.size() != instance.size())
    throw std::invalid_argument("gt_instances_from_labels: length mismatch");
  std::map<uint32_t, GtInstance> by_id;
  for (uint32_t i = 0; i < semantic.size(); ++i) {
    if (instance[i] == 0) continue;
    if (semantic[i] >= 14) continue;  // only instance-capable classes
    GtInstance& g = by_id[instance[i]];
    g.class_id = semantic[i];
    g.indices.push_back(i);
  }
  std::vector<GtInstance> out;
  out.reserve(by_id.size());
  for (auto& [id, g] : by_id) out.push_back(std::move(g));
  return out;
}

namespace {

double pointset_iou(const std::vector<uint32_t>& a_sorted, const std::vector<uint32_t>& b_sorted) {
  size_t i = 0, j = 0, inter = 0;
  while (i < a_sorted.size() && j < b_sorted.size()) {
    if (a_sorted[i] < b_sorted[j]) ++i;
    else if (a_sorted[i] > b_sorted[j]) ++j;
    else { ++inter; ++i; ++j; }
  }
  size_t uni = a_sorted.size() + b_sorted.size() - inter;
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

// 101-point interpolated AP over a confidence-ordered TP/FP sequence.
double interpolated_ap(const std::vector<char>& tp_flags, size_t n_gt) {
  if (n_gt == 0) return 0.0;
  std::vector<double> precisions, recalls;
  size_t tp = 0;
  for (size_t i = 0; i < tp_flags.size(); ++i) {
    if (tp_flags[i]) ++tp;
    precisions.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    recalls.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  double ap = 0.0;
  for (int r = 0; r <= 100; ++r) {
    double recall = static_cast<double>(r) / 100.0;
    double best = 0.0;
    for (size_t i = 0; i < precisions.size(); ++i)
      if (recalls[i] >= recall) best = std::max(best, precisions[i]);
    ap += best;
  }
  return ap / 101.0;
}

}  // namespace

double average_precision_for_class(const std::vector<GtInstance>& gts,
                                   const std::vector<InstancePrediction>& preds,
                                   uint8_t class_id, double iou_threshold,
                                   size_t point_count) {
  std::vector<size_t> gt_idx, pred_idx;
  for (size_t i = 0; i < gts.size(); ++i)
    if (gts[i].class_id == class_id) gt_idx.push_back(i);
  for (size_t i = 0; i < preds.size(); ++i)
    if (preds[i].class_id == class_id) pred_idx.push_back(i);
  if (gt_idx.empty()) return 0.0;

  // descending confidence, ties to the lower prediction index
  std::stable_sort(pred_idx.begin(), pred_idx.end(), [&](size_t a, size_t b) {
    return preds[a].confidence > preds[b].confidence;
  });

  std::vector<std::vector<uint32_t>> gt_sorted(gt_idx.size());
  for (size_t g = 0; g < gt_idx.size(); ++g) {
    gt_sorted[g] = gts[gt_idx[g]].indices;
    std::sort(gt_sorted[g].begin(), gt_sorted[g].end());
  }

  std::vector<char> gt_matched(gt_idx.size(), 0);
  std::vector<char> tp_flags;
  for (size_t pi : pred_idx) {
    if (preds[pi].indices.empty())
      throw std::invalid_argument("instance_ap: empty prediction index set");
    std::vector<uint32_t> p_sorted = preds[pi].indices;
    std::sort(p_sorted.begin(), p_sorted.end());
    if (point_count > 0 && !p_sorted.empty() && p_sorted.back() >= point_count)
      throw std::invalid_argument("instance_ap: prediction references out-of-range point");

    double best_iou = -1.0;
    size_t best_g = gt_idx.size();
    for (size_t g = 0; g < gt_idx.size(); ++g) {
      if (gt_matched[g]) continue;
      double iou = pointset_iou(p_sorted, gt_sorted[g]);
      if (iou > best_iou) {  // ties keep the lower gt index
        best_iou = iou;
        best_g = g;
      }
    }
    if (best_g < gt_idx.size() && best_iou >= iou_threshold) {
      gt_matched[best_g] = 1;
      tp_flags.push_back(1);
    } else {
      tp_flags.push_back(0);
    }
  }
  return interpolated_ap(tp_flags, gt_idx.size());
}

ApReport instance_ap(const std::vector<GtInstance>& gts,
                     const std::vector<InstancePrediction>& preds,
                     const ApOptions& options) {
  std::set<uint8_t> class_set;
  for (const GtInstance& g : gts) class_set.insert(g.class_id);
  if (options.include_classes_without_gt)
    for (const InstancePrediction& p : preds) class_set.insert(p.class_id);

  ApReport report;
  for (uint8_t c : class_set) {
    double ap_sum = 0.0;
    for (double thr : options.map_thresholds)
      ap_sum += average_precision_for_class(gts, preds, c, thr, options.point_count);
    report.class_ids.push_back(c);
    report.ap.push_back(ap_sum / static_cast<double>(options.map_thresholds.size()));
    report.ap50.push_back(average_precision_for_class(gts, preds, c, 0.50, options.point_count));
    report.ap25.push_back(average_precision_for_class(gts, preds, c, 0.25, options.point_count));
  }
  auto mean = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  report.map = mean(report.ap);
  report.map50 = mean(report.ap50);
  report.map25 = mean(report.ap25);
  return report;
}

void save_report_csv(const SegmentationReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "metric,mean";
  for (const std::string& n : report.class_names) f << "," << n;
  f << "\n";
  f << "iou," << report.semantic.miou * 100.0;
  for (size_t c = 0; c < report.class_names.size(); ++c) {
    if (c < report.semantic.iou.size() && report.semantic.evaluated[c])
      f << "," << report.semantic.iou[c] * 100.0;
    else
      f << ",";
  }
  f << "\n";
  f << "oacc," << report.semantic.oacc * 100.0 << "\n";
  if (report.instances) {
    const ApReport& ap = *report.instances;
    auto class_name = [&](uint8_t id) {
      return id < report.instance_class_names.size() ? report.instance_class_names[id]
                                                     : "class_" + std::to_string(id);
    };
    for (auto [label, means, rows] :
         {std::tuple{"ap", ap.map, &ap.ap}, {"ap50", ap.map50, &ap.ap50},
          {"ap25", ap.map25, &ap.ap25}}) {
      f << label << "," << means * 100.0;
      for (size_t i = 0; i < ap.class_ids.size(); ++i) f << "," << (*rows)[i] * 100.0;
      f << "\n";
    }
    f << "instance_classes,";
    for (size_t i = 0; i < ap.class_ids.size(); ++i)
      f << (i ? ";" : "") << class_name(ap.class_ids[i]);
    f << "\n";
  }
}

void save_report_json(const SegmentationReport& report, const std::string& path) {
  nlohmann::json j;
  j["miou"] = report.semantic.miou;
  j["oacc"] = report.semantic.oacc;
  nlohmann::json per_class = nlohmann::json::object();
  for (size_t c = 0; c < report.class_names.size(); ++c) {
    if (c < report.semantic.iou.size() && report.semantic.evaluated[c])
      per_class[report.class_names[c]] = report.semantic.iou[c];
    else
      per_class[report.class_names[c]] = nullptr;
  }
  j["iou"] = per_class;
  if (report.instances) {
    const ApReport& ap = *report.instances;
    j["map"] = ap.map;
    j["map50"] = ap.map50;
    j["map25"] = ap.map25;
    nlohmann::json inst = nlohmann::json::object();
    for (size_t i = 0; i < ap.class_ids.size(); ++i) {
      std::string name = ap.class_ids[i] < report.instance_class_names.size()
                             ? report.instance_class_names[ap.class_ids[i]]
                             : "class_" + std::to_string(ap.class_ids[i]);
      inst[name] = {{"ap", ap.ap[i]}, {"ap50", ap.ap50[i]}, {"ap25", ap.ap25[i]}};
    }
    j["instances"] = inst;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(1) << "\n";
}

}  // namespace aerogen
