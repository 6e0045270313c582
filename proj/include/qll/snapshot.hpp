// SPDX-License-Identifier: Apache-2.0
// Binary field snapshots.
//
// Layout, little-endian and packed (28-byte header):
//   offset 0   int32   dim
//   offset 4   int32   n (points per axis)
//   offset 8   float64 box_length
//   offset 16  int32   kind (0 scalar, 1 vector3, 2 qtensor, 3 matrix)
//   offset 20  float64 time
//   offset 28  float64 data, grid points in row-major order, per point the
//              entries of the value (1, 3, 9 or 9; a qtensor is written as
//              its full 3x3 matrix, row-major)
#pragma once

#include <string>

#include "qll/grid.hpp"

namespace qll {

constexpr std::size_t kSnapshotHeaderBytes = 28;

// Entries written per point for a field kind.
int snapshot_entries(FieldKind kind);

void write_snapshot(const std::string& path, const Field& f, double t);

struct Snapshot {
    Field field;
    double t = 0.0;
};

// Reads a snapshot onto a new grid of the recorded shape. Rejects truncated
// files and qtensor data that is not symmetric traceless to 1e-12.
Snapshot read_snapshot(const std::string& path);

}  // namespace qll
