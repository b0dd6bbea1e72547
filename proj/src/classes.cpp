// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/classes.hpp"

#include "occ/errors.hpp"

namespace occ {

const std::array<std::string, kNumClasses>& class_names() {
  static const std::array<std::string, kNumClasses> names = {
      "others",
      "barrier",
      "bicycle",
      "bus",
      "car",
      "construction_vehicle",
      "motorcycle",
      "pedestrian",
      "traffic_cone",
      "trailer",
      "truck",
      "driveable_surface",
      "other_flat",
      "sidewalk",
      "terrain",
      "manmade",
      "vegetation",
      "free",
  };
  return names;
}

ClassId class_id_from_name(const std::string& name) {
  const auto& names = class_names();
  for (int id = 0; id < kNumClasses; ++id) {
    if (names[static_cast<std::size_t>(id)] == name) {
      return static_cast<ClassId>(id);
    }
  }
  throw ConfigError("unknown class name '" + name + "'");
}

const std::array<double, kNumSemanticClasses>& class_frequencies_percent() {
  static const std::array<double, kNumSemanticClasses> freq = {
      0.00,   // others
      0.03,   // barrier
      0.15,   // bicycle
      0.04,   // bus
      2.82,   // car
      0.02,   // construction_vehicle
      0.01,   // motorcycle
      0.10,   // pedestrian
      0.00,   // traffic_cone
      0.05,   // trailer
      0.51,   // truck
      28.45,  // driveable_surface
      0.89,   // other_flat
      5.70,   // sidewalk
      3.11,   // terrain
      40.81,  // manmade
      17.32,  // vegetation
  };
  return freq;
}

const std::set<ClassId>& default_dynamic_classes() {
  static const std::set<ClassId> dynamic = {2, 3, 4, 5, 6, 7, 9, 10};
  return dynamic;
}

}  // namespace occ
