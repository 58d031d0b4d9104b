#include "lahreg/net/network.hpp"

#include <stdexcept>
#include <vector>

#include "lahreg/ad/ops.hpp"
#include "lahreg/attn/group.hpp"
#include "lahreg/attn/interaction.hpp"
#include "lahreg/lsh/partition.hpp"
#include "lahreg/net/stages.hpp"
#include "lahreg/util/rng.hpp"

namespace lahreg::net {
namespace {

ad::Tensor coordinate_features(const geom::PointCloud& cloud) {
    ad::Tensor f = ad::Tensor::zeros(cloud.size(), kInputDim);
    for (std::int64_t i = 0; i < cloud.size(); ++i) {
        for (int a = 0; a < 3; ++a) f.at(i, a) = cloud[i][a];
    }
    return f;
}

lsh::WindowPartition layout(const geom::PointCloud& cloud, const NetworkConfig& cfg,
                            std::int64_t window_points, std::uint64_t seed) {
    lsh::HashConfig hash;
    hash.bins = cfg.hash_bins;
    hash.rounds = cfg.hash_rounds;
    hash.seed = seed;
    return lsh::lsh_window_partition(cloud, hash, window_points);
}

// Everything one cloud produces on the way down to the bottleneck.
struct Pyramid {
    geom::PointCloud p0, p1, p2, p3;
    ad::Tensor f0, f1, f2, f3;  // skip features per level; f3 is pre-interaction
    lsh::WindowPartition part3;
};

Pyramid encode(const geom::PointCloud& cloud, const NetworkConfig& cfg,
               const NetworkParams& params, std::uint64_t cloud_seed) {
    Pyramid py;
    py.p0 = geom::centered(cloud);
    py.f0 = coordinate_features(py.p0);

    StageOutput s1 = encoder_stage(py.p0, py.f0, cfg.voxel_edges[0], params.enc1);
    py.p1 = std::move(s1.points);
    attn::AttentionConfig gt1;
    gt1.heads = cfg.gt_heads[0];
    gt1.head_dim = cfg.gt_head_dims[0];
    gt1.window_points = cfg.gt_window_points[0];
    gt1.cross_window_count = cfg.cross_window_count;
    gt1.seed = util::derive_seed(cloud_seed, "peers1");
    py.f1 = attn::group_transformer(
        s1.features, layout(py.p1, cfg, gt1.window_points, util::derive_seed(cloud_seed, "gt1")),
        gt1, params.gt1);

    StageOutput s2 = encoder_stage(py.p1, py.f1, cfg.voxel_edges[1], params.enc2);
    py.p2 = std::move(s2.points);
    attn::AttentionConfig gt2;
    gt2.heads = cfg.gt_heads[1];
    gt2.head_dim = cfg.gt_head_dims[1];
    gt2.window_points = cfg.gt_window_points[1];
    gt2.cross_window_count = cfg.cross_window_count;
    gt2.seed = util::derive_seed(cloud_seed, "peers2");
    py.f2 = attn::group_transformer(
        s2.features, layout(py.p2, cfg, gt2.window_points, util::derive_seed(cloud_seed, "gt2")),
        gt2, params.gt2);

    StageOutput s3 = encoder_stage(py.p2, py.f2, cfg.voxel_edges[2], params.enc3);
    py.p3 = std::move(s3.points);
    py.f3 = s3.features;
    py.part3 = layout(py.p3, cfg, cfg.it_window_points, util::derive_seed(cloud_seed, "it"));
    return py;
}

ad::Tensor decode(const Pyramid& py, const ad::Tensor& bottleneck, const NetworkConfig& cfg,
                  const NetworkParams& params) {
    ad::Tensor d2 = decoder_stage(py.p3, bottleneck, py.p2, py.f2, params.dec3);
    ad::Tensor d1 = decoder_stage(py.p2, d2, py.p1, py.f1, params.dec2);
    ad::Tensor d0 = decoder_stage(py.p1, d1, py.p0, py.f0, params.dec1);
    return ad::l2_normalize_rows(ad::linear(d0, params.head_w, params.head_b));
}

}  // namespace

ForwardResult forward(const geom::PointCloud& cloud_p, const geom::PointCloud& cloud_q,
                      const NetworkConfig& config, const NetworkParams& params,
                      const ForwardOptions& options) {
    config.validate();
    if (cloud_p.empty() || cloud_q.empty()) {
        throw std::invalid_argument("forward: both clouds must be non-empty");
    }

    const std::uint64_t seed_p =
        options.seed_p ? *options.seed_p : util::derive_seed(config.seed, "cloud_p");
    const std::uint64_t seed_q =
        options.seed_q ? *options.seed_q : util::derive_seed(config.seed, "cloud_q");

    Pyramid py_p = encode(cloud_p, config, params, seed_p);
    Pyramid py_q = encode(cloud_q, config, params, seed_q);

    attn::AttentionConfig it;
    it.heads = config.it_heads;
    it.head_dim = config.it_head_dim;
    it.window_points = config.it_window_points;
    auto [f3p, f3q] =
        attn::interaction_transformer(py_p.f3, py_p.part3, py_q.f3, py_q.part3, it, params.it);

    ForwardResult out;
    out.descriptors_p = decode(py_p, f3p, config, params);
    out.descriptors_q = decode(py_q, f3q, config, params);
    return out;
}

}  // namespace lahreg::net
