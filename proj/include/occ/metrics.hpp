// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "occ/classes.hpp"
#include "occ/voxelize.hpp"

namespace occ {

/// Per-class voxel counts of one or more prediction / ground-truth
/// comparisons, plus the binarized occupied-vs-free counts. Addition is
/// entry-wise, so per-frame counts combine into sequence totals.
struct ConfusionCounts {
  std::array<std::uint64_t, kNumClasses> tp{};
  std::array<std::uint64_t, kNumClasses> fp{};
  std::array<std::uint64_t, kNumClasses> fn{};
  std::uint64_t occupied_tp = 0;
  std::uint64_t occupied_fp = 0;
  std::uint64_t occupied_fn = 0;
  std::uint64_t voxels_compared = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& other);

  /// TP + FP + FN for one class; zero means the class is missing from both
  /// prediction and ground truth and is excluded from averages.
  std::uint64_t support(int class_id) const {
    return tp[static_cast<std::size_t>(class_id)] +
           fp[static_cast<std::size_t>(class_id)] +
           fn[static_cast<std::size_t>(class_id)];
  }
};

/// Tallies prediction against ground truth voxel by voxel, optionally
/// restricted to masked-in voxels. Throws EvalError when grid layouts
/// differ (between the grids or against the mask).
ConfusionCounts accumulate_confusion(const OccupancyGrid& prediction,
                                     const OccupancyGrid& ground_truth,
                                     const VoxelMask* mask = nullptr);

/// IoU per class: TP / (TP + FP + FN); nullopt when the support is zero.
std::array<std::optional<double>, kNumClasses> per_class_iou(
    const ConfusionCounts& counts);

/// Classes averaged by default: every semantic class, free excluded.
const std::set<int>& default_eval_classes();

/// Unweighted mean IoU over the evaluated classes that are present; nullopt
/// when every evaluated class is missing.
std::optional<double> miou(const ConfusionCounts& counts,
                           const std::set<int>& eval_classes);

/// Per-class weights; entries without a value mark classes that must be
/// missing from the data (their absence is tolerated, their presence with
/// no weight is an error).
using ClassWeights = std::array<std::optional<double>, kNumClasses>;

/// Weights from the dataset class frequencies.
ClassWeights frequency_weights();

/// Frequency-weighted mean: sum(w_c * IoU_c) / sum(w_c) over evaluated
/// classes with nonzero support. Throws EvalError when a present class has
/// no weight.
std::optional<double> weighted_miou(const ConfusionCounts& counts,
                                    const ClassWeights& weights,
                                    const std::set<int>& eval_classes);

/// Class-agnostic IoU of the binarized grids (occupied = any semantic
/// label); nullopt when neither grid has occupied voxels.
std::optional<double> occupied_iou(const ConfusionCounts& counts);
std::optional<double> occupied_iou(const OccupancyGrid& prediction,
                                   const OccupancyGrid& ground_truth,
                                   const VoxelMask* mask = nullptr);

struct MetricsReport {
  std::array<std::optional<double>, kNumClasses> iou;
  std::optional<double> mean_iou;
  std::optional<double> weighted_mean_iou;
  std::optional<double> occupied;
  std::uint64_t voxels_compared = 0;
};

MetricsReport compute_report(const ConfusionCounts& counts);

/// JSON form of a report; missing classes serialize as null.
nlohmann::json report_to_json(const MetricsReport& report);

/// Fixed-width table with one column per class; absent classes print "-".
/// Scores are percentages with one decimal.
std::string format_report_table(const MetricsReport& report);

}  // namespace occ
