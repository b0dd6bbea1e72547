# Copyright 2026 The occkit Authors
# SPDX-License-Identifier: Apache-2.0
"""Occupancy ground-truth generation and radar fusion toolkit."""

from occkit._core import (
    autolabel,
    class_names,
    evaluate,
    generate_scene,
    make_depth,
    read_depth,
    read_occupancy,
    traverse_ray,
)

__all__ = [
    "autolabel",
    "class_names",
    "evaluate",
    "generate_scene",
    "make_depth",
    "read_depth",
    "read_occupancy",
    "traverse_ray",
]
