#include "lahreg/net/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lahreg/util/rng.hpp"

namespace lahreg::net {

void adam_apply(std::vector<double>& value, const std::vector<double>& grad,
                std::vector<double>& m, std::vector<double>& v, std::int64_t step,
                const AdamConfig& config) {
    if (grad.size() != value.size()) {
        throw std::invalid_argument("adam_apply: gradient size mismatch");
    }
    m.resize(value.size(), 0.0);
    v.resize(value.size(), 0.0);
    const double b1t = 1.0 - std::pow(config.beta1, static_cast<double>(step));
    const double b2t = 1.0 - std::pow(config.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < value.size(); ++i) {
        m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
        v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
        const double m_hat = m[i] / b1t;
        const double v_hat = v[i] / b2t;
        value[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
}

void Adam::step(NetworkParams& params) {
    ++step_;
    params.visit([&](const std::string& name, ad::Tensor& t) {
        if (!t.tracked()) {
            throw std::invalid_argument("Adam::step: parameter " + name + " is not watched");
        }
        auto& [m, v] = state_[name];
        adam_apply(*t.data, t.tape->grad(t), m, v, step_, config_);
    });
}

double train_step(NetworkParams& params, Adam& optimizer, const PairBatch& batch,
                  const NetworkConfig& net_config, const LossConfig& loss_config,
                  const ForwardOptions& options) {
    ad::Tape tape;
    params.visit([&](const std::string&, ad::Tensor& t) { tape.watch(t); });

    ForwardResult out = forward(batch.source, batch.target, net_config, params, options);
    // Hinge terms silently zero out NaN distances, so a numerical blowup is
    // only visible in the descriptors themselves; catch it before it hides.
    if (!out.descriptors_p.all_finite() || !out.descriptors_q.all_finite()) {
        params.visit([&](const std::string&, ad::Tensor& t) { t.detach(); });
        throw std::runtime_error("train_step: non-finite descriptors");
    }
    ad::Tensor loss =
        hardest_contrastive_loss(out.descriptors_p, out.descriptors_q, batch, loss_config);
    const double loss_value = loss.value();
    if (!std::isfinite(loss_value)) {
        params.visit([&](const std::string&, ad::Tensor& t) { t.detach(); });
        throw std::runtime_error("train_step: non-finite loss " + std::to_string(loss_value));
    }

    tape.backward(loss);
    optimizer.step(params);
    params.visit([&](const std::string&, ad::Tensor& t) { t.detach(); });
    return loss_value;
}

TrainResult train_loop(const TrainConfig& config, const std::vector<TrainPair>& pairs,
                       NetworkParams& params) {
    if (pairs.empty()) throw std::invalid_argument("train_loop: no training pairs");
    if (config.steps < 1) throw std::invalid_argument("train_loop: steps must be positive");

    std::ofstream log;
    if (!config.log_path.empty()) {
        log.open(config.log_path);
        if (!log) throw std::runtime_error("train_loop: cannot open log " + config.log_path);
        log << "step,loss,seconds\n";
    }

    Adam optimizer(config.adam);
    TrainResult result;
    result.losses.reserve(static_cast<std::size_t>(config.steps));
    const auto start = std::chrono::steady_clock::now();

    for (std::int64_t step = 0; step < config.steps; ++step) {
        const TrainPair& pair =
            pairs[static_cast<std::size_t>(step) % pairs.size()];
        const std::uint64_t step_seed =
            util::derive_seed(config.seed, static_cast<std::uint64_t>(step));
        PairBatch batch = sample_pairs(pair.source, pair.target, pair.gt, config.tau_pos,
                                       config.n_pos, config.n_neg, step_seed);

        ForwardOptions options;
        options.seed_p = util::derive_seed(step_seed, "layout_p");
        options.seed_q = util::derive_seed(step_seed, "layout_q");
        const double loss =
            train_step(params, optimizer, batch, config.network, config.loss, options);
        result.losses.push_back(loss);

        if (log) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            log << step << ',' << loss << ',' << elapsed.count() << '\n';
        }
    }

    if (!config.checkpoint_path.empty()) save_network(params, config.checkpoint_path);
    return result;
}

}  // namespace lahreg::net
