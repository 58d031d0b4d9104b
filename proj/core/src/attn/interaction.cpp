#include "lahreg/attn/interaction.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "lahreg/lsh/gather.hpp"

namespace lahreg::attn {

ad::Tensor window_global_descriptors(const std::vector<ad::Tensor>& windows) {
    if (windows.empty()) {
        throw std::invalid_argument("window_global_descriptors: no windows");
    }
    std::vector<ad::Tensor> pooled;
    pooled.reserve(windows.size());
    for (const ad::Tensor& w : windows) {
        if (w.rows < 1) throw std::invalid_argument("window_global_descriptors: empty window");
        pooled.push_back(ad::max_pool_rows(w).values);
    }
    ad::Tensor stacked = pooled.size() == 1 ? pooled.front() : ad::concat_rows(pooled);
    return ad::l2_normalize_rows(stacked);
}

ad::Tensor overlap_matrix(const ad::Tensor& g_p, const ad::Tensor& g_q) {
    if (g_p.cols != g_q.cols) {
        throw std::invalid_argument("overlap_matrix: descriptor width mismatch");
    }
    return ad::matmul(g_p, ad::transpose(g_q));
}

std::vector<std::pair<std::int64_t, std::int64_t>> match_windows(const ad::Tensor& overlap) {
    if (overlap.rows < 1 || overlap.cols < 1) {
        throw std::invalid_argument("match_windows: empty overlap matrix");
    }
    std::set<std::pair<std::int64_t, std::int64_t>> pairs;
    for (std::int64_t i = 0; i < overlap.rows; ++i) {
        std::int64_t best = 0;
        for (std::int64_t j = 1; j < overlap.cols; ++j) {
            if (overlap.at(i, j) > overlap.at(i, best)) best = j;
        }
        pairs.insert({i, best});
    }
    for (std::int64_t j = 0; j < overlap.cols; ++j) {
        std::int64_t best = 0;
        for (std::int64_t i = 1; i < overlap.rows; ++i) {
            if (overlap.at(i, j) > overlap.at(best, j)) best = i;
        }
        pairs.insert({best, j});
    }
    return {pairs.begin(), pairs.end()};
}

namespace {

std::vector<ad::Tensor> cross_update(const std::vector<ad::Tensor>& own,
                                     const std::vector<ad::Tensor>& other,
                                     const std::vector<std::vector<std::int64_t>>& partners,
                                     const AttentionConfig& config,
                                     const AttentionParams& params) {
    std::vector<ad::Tensor> out;
    out.reserve(own.size());
    for (std::size_t w = 0; w < own.size(); ++w) {
        const auto& links = partners[w];
        if (links.empty()) {
            out.push_back(own[w]);
            continue;
        }
        ad::Tensor context;
        if (links.size() == 1) {
            context = other[static_cast<std::size_t>(links.front())];
        } else {
            std::vector<ad::Tensor> parts;
            parts.reserve(links.size());
            for (std::int64_t j : links) parts.push_back(other[static_cast<std::size_t>(j)]);
            context = ad::concat_rows(parts);
        }
        out.push_back(attention_block(own[w], context, params, config.heads, config.head_dim));
    }
    return out;
}

}  // namespace

std::pair<ad::Tensor, ad::Tensor> interaction_transformer(
    const ad::Tensor& features_p, const lsh::WindowPartition& part_p,
    const ad::Tensor& features_q, const lsh::WindowPartition& part_q,
    const AttentionConfig& config, const AttentionParams& params) {
    config.validate();
    if (features_p.cols != config.width() || features_q.cols != config.width()) {
        throw std::invalid_argument("interaction_transformer: feature width mismatch");
    }
    if (features_p.rows != part_p.total() || features_q.rows != part_q.total()) {
        throw std::invalid_argument("interaction_transformer: partition row mismatch");
    }
    if (part_p.window_size != config.window_points || part_q.window_size != config.window_points) {
        throw std::invalid_argument("interaction_transformer: partition window size mismatch");
    }

    std::vector<ad::Tensor> windows_p = lsh::gather_windows(features_p, part_p);
    std::vector<ad::Tensor> windows_q = lsh::gather_windows(features_q, part_q);

    ad::Tensor g_p = window_global_descriptors(windows_p);
    ad::Tensor g_q = window_global_descriptors(windows_q);
    const auto pairs = match_windows(overlap_matrix(g_p, g_q));

    std::vector<std::vector<std::int64_t>> partners_p(windows_p.size());
    std::vector<std::vector<std::int64_t>> partners_q(windows_q.size());
    for (const auto& [i, j] : pairs) {
        partners_p[static_cast<std::size_t>(i)].push_back(j);
        partners_q[static_cast<std::size_t>(j)].push_back(i);
    }
    for (auto& v : partners_p) std::sort(v.begin(), v.end());
    for (auto& v : partners_q) std::sort(v.begin(), v.end());

    // Both directions read the pre-update windows.
    std::vector<ad::Tensor> out_p =
        cross_update(windows_p, windows_q, partners_p, config, params);
    std::vector<ad::Tensor> out_q =
        cross_update(windows_q, windows_p, partners_q, config, params);

    return {lsh::unpartition(out_p, part_p), lsh::unpartition(out_q, part_q)};
}

}  // namespace lahreg::attn
