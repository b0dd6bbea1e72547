// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "occ/errors.hpp"

namespace occ {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  for (int c = 0; c < kNumClasses; ++c) {
    tp[static_cast<std::size_t>(c)] += other.tp[static_cast<std::size_t>(c)];
    fp[static_cast<std::size_t>(c)] += other.fp[static_cast<std::size_t>(c)];
    fn[static_cast<std::size_t>(c)] += other.fn[static_cast<std::size_t>(c)];
  }
  occupied_tp += other.occupied_tp;
  occupied_fp += other.occupied_fp;
  occupied_fn += other.occupied_fn;
  voxels_compared += other.voxels_compared;
  return *this;
}

ConfusionCounts accumulate_confusion(const OccupancyGrid& prediction,
                                     const OccupancyGrid& ground_truth,
                                     const VoxelMask* mask) {
  if (!prediction.spec.same_layout(ground_truth.spec)) {
    throw EvalError(
        "accumulate_confusion: prediction and ground truth grids differ");
  }
  if (mask && !mask->spec.same_layout(prediction.spec)) {
    throw EvalError("accumulate_confusion: mask grid layout differs");
  }
  ConfusionCounts counts;
  const std::size_t n = prediction.labels.size();
  for (std::size_t v = 0; v < n; ++v) {
    if (mask && mask->flags[v] == 0) {
      continue;
    }
    const ClassId pred = prediction.labels[v];
    const ClassId gt = ground_truth.labels[v];
    ++counts.voxels_compared;
    if (pred == gt) {
      ++counts.tp[pred];
    } else {
      ++counts.fp[pred];
      ++counts.fn[gt];
    }
    const bool pred_occ = pred != kFreeClass;
    const bool gt_occ = gt != kFreeClass;
    if (pred_occ && gt_occ) {
      ++counts.occupied_tp;
    } else if (pred_occ) {
      ++counts.occupied_fp;
    } else if (gt_occ) {
      ++counts.occupied_fn;
    }
  }
  return counts;
}

std::array<std::optional<double>, kNumClasses> per_class_iou(
    const ConfusionCounts& counts) {
  std::array<std::optional<double>, kNumClasses> iou;
  for (int c = 0; c < kNumClasses; ++c) {
    const std::uint64_t support = counts.support(c);
    if (support > 0) {
      iou[static_cast<std::size_t>(c)] =
          static_cast<double>(counts.tp[static_cast<std::size_t>(c)]) /
          static_cast<double>(support);
    }
  }
  return iou;
}

const std::set<int>& default_eval_classes() {
  static const std::set<int> classes = [] {
    std::set<int> s;
    for (int c = 0; c < kNumSemanticClasses; ++c) {
      s.insert(c);
    }
    return s;
  }();
  return classes;
}

std::optional<double> miou(const ConfusionCounts& counts,
                           const std::set<int>& eval_classes) {
  const auto iou = per_class_iou(counts);
  double sum = 0.0;
  int present = 0;
  for (const int c : eval_classes) {
    if (iou[static_cast<std::size_t>(c)]) {
      sum += *iou[static_cast<std::size_t>(c)];
      ++present;
    }
  }
  if (present == 0) {
    return std::nullopt;
  }
  return sum / present;
}

ClassWeights frequency_weights() {
  ClassWeights weights;
  const auto& freq = class_frequencies_percent();
  for (int c = 0; c < kNumSemanticClasses; ++c) {
    weights[static_cast<std::size_t>(c)] =
        freq[static_cast<std::size_t>(c)];
  }
  return weights;
}

std::optional<double> weighted_miou(const ConfusionCounts& counts,
                                    const ClassWeights& weights,
                                    const std::set<int>& eval_classes) {
  const auto iou = per_class_iou(counts);
  double weighted_sum = 0.0;
  double weight_sum = 0.0;
  for (const int c : eval_classes) {
    if (!iou[static_cast<std::size_t>(c)]) {
      continue;
    }
    if (!weights[static_cast<std::size_t>(c)]) {
      throw EvalError("weighted_miou: class '" +
                      class_names()[static_cast<std::size_t>(c)] +
                      "' is present but has no weight");
    }
    weighted_sum += *weights[static_cast<std::size_t>(c)] *
                    *iou[static_cast<std::size_t>(c)];
    weight_sum += *weights[static_cast<std::size_t>(c)];
  }
  if (weight_sum == 0.0) {
    return std::nullopt;
  }
  return weighted_sum / weight_sum;
}

std::optional<double> occupied_iou(const ConfusionCounts& counts) {
  const std::uint64_t denom =
      counts.occupied_tp + counts.occupied_fp + counts.occupied_fn;
  if (denom == 0) {
    return std::nullopt;
  }
  return static_cast<double>(counts.occupied_tp) /
         static_cast<double>(denom);
}

std::optional<double> occupied_iou(const OccupancyGrid& prediction,
                                   const OccupancyGrid& ground_truth,
                                   const VoxelMask* mask) {
  return occupied_iou(accumulate_confusion(prediction, ground_truth, mask));
}

MetricsReport compute_report(const ConfusionCounts& counts) {
  MetricsReport report;
  report.iou = per_class_iou(counts);
  report.mean_iou = miou(counts, default_eval_classes());
  report.weighted_mean_iou =
      weighted_miou(counts, frequency_weights(), default_eval_classes());
  report.occupied = occupied_iou(counts);
  report.voxels_compared = counts.voxels_compared;
  return report;
}

nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json j;
  auto put = [](nlohmann::json& node, const std::optional<double>& v) {
    if (v) {
      node = *v;
    } else {
      node = nullptr;
    }
  };
  nlohmann::json per_class = nlohmann::json::object();
  for (int c = 0; c < kNumClasses; ++c) {
    put(per_class[class_names()[static_cast<std::size_t>(c)]],
        report.iou[static_cast<std::size_t>(c)]);
  }
  j["per_class_iou"] = std::move(per_class);
  put(j["miou"], report.mean_iou);
  put(j["weighted_miou"], report.weighted_mean_iou);
  put(j["occupied_iou"], report.occupied);
  j["voxels_compared"] = report.voxels_compared;
  return j;
}

std::string format_report_table(const MetricsReport& report) {
  std::ostringstream out;
  auto cell = [&](const std::optional<double>& v, int width) {
    out << std::setw(width);
    if (v) {
      out << std::fixed << std::setprecision(1) << *v * 100.0;
    } else {
      out << "-";
    }
  };

  out << std::left << std::setw(22) << "metric" << std::right;
  out << std::setw(8) << "mIoU" << std::setw(8) << "wmIoU" << std::setw(8)
      << "occIoU" << "\n";
  out << std::left << std::setw(22) << "score" << std::right;
  cell(report.mean_iou, 8);
  cell(report.weighted_mean_iou, 8);
  cell(report.occupied, 8);
  out << "\n\n";

  out << std::left << std::setw(22) << "class" << std::right << std::setw(8)
      << "IoU" << "\n";
  for (int c = 0; c < kNumSemanticClasses; ++c) {
    out << std::left << std::setw(22)
        << class_names()[static_cast<std::size_t>(c)] << std::right;
    cell(report.iou[static_cast<std::size_t>(c)], 8);
    out << "\n";
  }
  out << "\nvoxels compared: " << report.voxels_compared << "\n";
  return out.str();
}

}  // namespace occ
