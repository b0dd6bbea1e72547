// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>

namespace occ {

using ClassId = std::uint8_t;

/// Semantic classes carry ids 0..16; id 17 is the non-semantic free slot.
inline constexpr int kNumSemanticClasses = 17;
inline constexpr int kNumClasses = 18;
inline constexpr ClassId kFreeClass = 17;

/// Canonical label names, indexed by class id.
const std::array<std::string, kNumClasses>& class_names();

/// Resolves a label name to its id. Throws ConfigError for unknown names.
ClassId class_id_from_name(const std::string& name);

/// Per-class voxel frequencies (percent of labeled voxels) measured on the
/// accompanying dataset, used by the frequency-weighted score.
const std::array<double, kNumSemanticClasses>& class_frequencies_percent();

/// Movable-agent classes dropped from non-key frames during accumulation.
const std::set<ClassId>& default_dynamic_classes();

}  // namespace occ
