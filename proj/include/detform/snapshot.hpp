// snapshot.hpp — field snapshot files and key-value metadata sidecars.
//
// Binary layout: header of three unsigned 64-bit little-endian integers
// (magic 0x53504543, n_modes, frame_count), then frame_count * n_modes^2
// complex values as interleaved little-endian 64-bit floats, row-major over
// k1 then k2 in FFT index order.  Window/stride information lives in the
// ".meta" sidecar (key = value lines) next to the snapshot.

#pragma once

#include <map>
#include <string>

#include "detform/trajectory.hpp"

namespace detform {

constexpr uint64_t kSnapshotMagic = 0x53504543ull;

using Metadata = std::map<std::string, std::string>;

void write_metadata(const std::string& path, const Metadata& meta);
Metadata read_metadata(const std::string& path);

// Writes path and path + ".meta" (domain_length, s_start, stride plus any
// extra entries).
void save_snapshot(const std::string& path, const Trajectory& traj, const Metadata& extra = {});

Trajectory load_snapshot(const std::string& path);

// Single-field convenience (frame_count = 1).
void save_field(const std::string& path, const SpectralField& field, const Metadata& extra = {});
SpectralField load_field(const std::string& path);

} // namespace detform
