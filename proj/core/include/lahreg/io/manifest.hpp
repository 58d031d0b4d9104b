#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lahreg/geom/rigid_transform.hpp"
#include "lahreg/net/train.hpp"

namespace lahreg::io {

// Ground truth attached to one generated pair.
struct PairMeta {
    geom::RigidTransform gt;
    double overlap = 0.0;
    std::uint64_t seed = 0;
};

// One pair of cloud files plus its metadata, paths relative to the manifest.
struct PairEntry {
    std::string id;
    std::string source;
    std::string target;
    std::string meta;
};

struct PairsManifest {
    std::vector<PairEntry> entries;
};

void write_pair_meta(const std::string& path, const PairMeta& meta);
PairMeta read_pair_meta(const std::string& path);

void write_manifest(const std::string& path, const PairsManifest& manifest);
PairsManifest read_manifest(const std::string& path);

// Reads every referenced cloud and ground truth, resolving entry paths
// against the manifest's directory. Entry order is preserved.
std::vector<net::TrainPair> load_pairs(const std::string& manifest_path);

}  // namespace lahreg::io
