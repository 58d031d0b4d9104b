#include "lahreg/net/params.hpp"

#include <cmath>
#include <stdexcept>

#include "lahreg/ad/checkpoint.hpp"
#include "lahreg/util/rng.hpp"

namespace lahreg::net {
namespace {

ad::Tensor gauss(std::int64_t rows, std::int64_t cols, util::Rng& rng) {
    ad::Tensor t = ad::Tensor::zeros(rows, cols);
    const double stddev = 1.0 / std::sqrt(static_cast<double>(rows));
    for (std::int64_t i = 0; i < t.numel(); ++i) {
        t.ptr()[i] = stddev * rng.gaussian();
    }
    return t;
}

EncoderParams init_encoder(std::int64_t in, std::int64_t out, util::Rng& rng) {
    EncoderParams p;
    p.w1 = gauss(in, out, rng);
    p.b1 = ad::Tensor::zeros(1, out);
    p.w2 = gauss(out, out, rng);
    p.b2 = ad::Tensor::zeros(1, out);
    p.proj = gauss(in, out, rng);
    return p;
}

DecoderParams init_decoder(std::int64_t in, std::int64_t out, util::Rng& rng) {
    DecoderParams p;
    p.w1 = gauss(in, out, rng);
    p.b1 = ad::Tensor::zeros(1, out);
    p.w2 = gauss(out, out, rng);
    p.b2 = ad::Tensor::zeros(1, out);
    return p;
}

void visit_encoder(EncoderParams& p, const std::string& prefix,
                   const std::function<void(const std::string&, ad::Tensor&)>& fn) {
    fn(prefix + ".mlp1.w", p.w1);
    fn(prefix + ".mlp1.b", p.b1);
    fn(prefix + ".mlp2.w", p.w2);
    fn(prefix + ".mlp2.b", p.b2);
    fn(prefix + ".proj.w", p.proj);
}

void visit_decoder(DecoderParams& p, const std::string& prefix,
                   const std::function<void(const std::string&, ad::Tensor&)>& fn) {
    fn(prefix + ".mlp1.w", p.w1);
    fn(prefix + ".mlp1.b", p.b1);
    fn(prefix + ".mlp2.w", p.w2);
    fn(prefix + ".mlp2.b", p.b2);
}

}  // namespace

void NetworkParams::visit(const std::function<void(const std::string&, ad::Tensor&)>& fn) {
    visit_encoder(enc1, "enc1", fn);
    gt1.visit("gt1", fn);
    visit_encoder(enc2, "enc2", fn);
    gt2.visit("gt2", fn);
    visit_encoder(enc3, "enc3", fn);
    it.visit("it", fn);
    visit_decoder(dec3, "dec3", fn);
    visit_decoder(dec2, "dec2", fn);
    visit_decoder(dec1, "dec1", fn);
    fn("head.w", head_w);
    fn("head.b", head_b);
}

NetworkParams init_network_params(const NetworkConfig& config) {
    config.validate();
    util::Rng rng(util::derive_seed(config.seed, "params"));

    const std::int64_t w1 = config.stage_widths[0];
    const std::int64_t w2 = config.stage_widths[1];
    const std::int64_t w3 = config.stage_widths[2];

    NetworkParams p;
    p.enc1 = init_encoder(kInputDim, w1, rng);
    p.gt1 = attn::init_attention_params(w1, rng);
    p.enc2 = init_encoder(w1, w2, rng);
    p.gt2 = attn::init_attention_params(w2, rng);
    p.enc3 = init_encoder(w2, w3, rng);
    p.it = attn::init_attention_params(w3, rng);
    p.dec3 = init_decoder(w3 + w2, w2, rng);
    p.dec2 = init_decoder(w2 + w1, w1, rng);
    p.dec1 = init_decoder(w1 + kInputDim, w1, rng);
    p.head_w = gauss(w1, config.descriptor_dim, rng);
    p.head_b = ad::Tensor::zeros(1, config.descriptor_dim);
    return p;
}

void save_network(NetworkParams& params, const std::string& path) {
    std::vector<ad::NamedArray> arrays;
    params.visit([&](const std::string& name, ad::Tensor& t) {
        arrays.push_back({name, t.rows, t.cols, *t.data});
    });
    ad::save_arrays(path, arrays);
}

void load_network(NetworkParams& params, const std::string& path) {
    const std::vector<ad::NamedArray> arrays = ad::load_arrays(path);
    std::size_t cursor = 0;
    params.visit([&](const std::string& name, ad::Tensor& t) {
        if (cursor >= arrays.size()) {
            throw std::runtime_error("load_network: " + path + ": missing array " + name);
        }
        const ad::NamedArray& a = arrays[cursor++];
        if (a.name != name || a.rows != t.rows || a.cols != t.cols) {
            throw std::runtime_error("load_network: " + path + ": expected " + name + " (" +
                                     std::to_string(t.rows) + "x" + std::to_string(t.cols) +
                                     "), found " + a.name + " (" + std::to_string(a.rows) + "x" +
                                     std::to_string(a.cols) + ")");
        }
        *t.data = a.values;
    });
    if (cursor != arrays.size()) {
        throw std::runtime_error("load_network: " + path + ": checkpoint has " +
                                 std::to_string(arrays.size()) + " arrays, parameters need " +
                                 std::to_string(cursor));
    }
}

}  // namespace lahreg::net
