#include "lahreg/io/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lahreg/io/cloud_io.hpp"

namespace lahreg::io {

namespace {

using nlohmann::json;

json to_json(const geom::RigidTransform& t) {
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
        rot.push_back({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)});
    return {{"rotation", rot},
            {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

geom::RigidTransform transform_from_json(const json& j, const std::string& path) {
    geom::RigidTransform t;
    try {
        const auto& rot = j.at("rotation");
        const auto& tr = j.at("translation");
        if (rot.size() != 3 || tr.size() != 3) throw std::out_of_range("shape");
        for (int r = 0; r < 3; ++r) {
            if (rot.at(r).size() != 3) throw std::out_of_range("shape");
            for (int c = 0; c < 3; ++c) t.rotation(r, c) = rot.at(r).at(c).get<double>();
        }
        for (int c = 0; c < 3; ++c) t.translation(c) = tr.at(c).get<double>();
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": bad transform: " + e.what());
    } catch (const std::out_of_range&) {
        throw std::runtime_error(path + ": bad transform: rotation must be 3x3, translation 3");
    }
    if (!geom::is_rotation(t.rotation, 1e-6))
        throw std::runtime_error(path + ": transform rotation is not orthonormal");
    return t;
}

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path + ": invalid JSON");
    return j;
}

void store_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed on " + path);
}

std::string resolve(const std::string& manifest_path, const std::string& rel) {
    const std::filesystem::path p(rel);
    if (p.is_absolute()) return rel;
    return (std::filesystem::path(manifest_path).parent_path() / p).string();
}

}  // namespace

void write_pair_meta(const std::string& path, const PairMeta& meta) {
    json j = {{"transform", to_json(meta.gt)}, {"overlap", meta.overlap}, {"seed", meta.seed}};
    store_json(path, j);
}

PairMeta read_pair_meta(const std::string& path) {
    const json j = load_json(path);
    PairMeta meta;
    try {
        meta.gt = transform_from_json(j.at("transform"), path);
        meta.overlap = j.at("overlap").get<double>();
        meta.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": bad pair metadata: " + e.what());
    }
    return meta;
}

void write_manifest(const std::string& path, const PairsManifest& manifest) {
    json pairs = json::array();
    for (const auto& e : manifest.entries)
        pairs.push_back(
            {{"id", e.id}, {"source", e.source}, {"target", e.target}, {"meta", e.meta}});
    store_json(path, {{"version", 1}, {"pairs", pairs}});
}

PairsManifest read_manifest(const std::string& path) {
    const json j = load_json(path);
    PairsManifest manifest;
    try {
        if (j.at("version").get<int>() != 1)
            throw std::runtime_error(path + ": unsupported manifest version");
        for (const auto& e : j.at("pairs")) {
            PairEntry entry;
            entry.id = e.at("id").get<std::string>();
            entry.source = e.at("source").get<std::string>();
            entry.target = e.at("target").get<std::string>();
            entry.meta = e.at("meta").get<std::string>();
            manifest.entries.push_back(std::move(entry));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": bad manifest: " + e.what());
    }
    return manifest;
}

std::vector<net::TrainPair> load_pairs(const std::string& manifest_path) {
    const PairsManifest manifest = read_manifest(manifest_path);
    std::vector<net::TrainPair> pairs;
    pairs.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries) {
        net::TrainPair pair;
        pair.source = read_cloud(resolve(manifest_path, e.source));
        pair.target = read_cloud(resolve(manifest_path, e.target));
        pair.gt = read_pair_meta(resolve(manifest_path, e.meta)).gt;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

}  // namespace lahreg::io
