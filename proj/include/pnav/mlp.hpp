#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pnav/rng.hpp"

namespace pnav {

// Minimal dense network: tanh hidden layers, linear output, double precision
// throughout so gradient checks against finite differences are meaningful.
// Parameters live in one flat vector (layer by layer, weights then biases),
// which is also the checkpoint and optimizer layout.
class Mlp {
public:
    Mlp(std::vector<int> sizes, std::uint64_t seed) : sizes_(std::move(sizes)) {
        if (sizes_.size() < 2) throw std::invalid_argument("mlp: need at least input and output sizes");
        std::size_t total = 0;
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
            w_offsets_.push_back(total);
            total += static_cast<std::size_t>(sizes_[l]) * static_cast<std::size_t>(sizes_[l + 1]);
            b_offsets_.push_back(total);
            total += static_cast<std::size_t>(sizes_[l + 1]);
        }
        params_.assign(total, 0.0);
        Rng rng(seed_combine({fnv1a64("mlp-init"), seed}));
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
            double limit = std::sqrt(6.0 / (sizes_[l] + sizes_[l + 1]));
            std::size_t count = static_cast<std::size_t>(sizes_[l]) * static_cast<std::size_t>(sizes_[l + 1]);
            for (std::size_t i = 0; i < count; ++i) {
                params_[w_offsets_[l] + i] = (rng.uniform_real() * 2.0 - 1.0) * limit;
            }
        }
    }

    const std::vector<int>& sizes() const { return sizes_; }
    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    struct Cache {
        std::vector<std::vector<double>> activations;  // [0] = input, [L] = linear output
    };

    std::vector<double> forward(const std::vector<double>& input, Cache* cache = nullptr) const {
        if (static_cast<int>(input.size()) != sizes_.front()) throw std::invalid_argument("mlp: input size mismatch");
        if (cache) {
            cache->activations.clear();
            cache->activations.push_back(input);
        }
        std::vector<double> current = input;
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
            int in = sizes_[l];
            int out = sizes_[l + 1];
            std::vector<double> next(static_cast<std::size_t>(out));
            const double* w = params_.data() + w_offsets_[l];
            const double* b = params_.data() + b_offsets_[l];
            for (int j = 0; j < out; ++j) {
                double acc = b[j];
                const double* row = w + static_cast<std::size_t>(j) * static_cast<std::size_t>(in);
                for (int i = 0; i < in; ++i) acc += row[i] * current[static_cast<std::size_t>(i)];
                next[static_cast<std::size_t>(j)] = (l + 2 < sizes_.size()) ? std::tanh(acc) : acc;
            }
            current = std::move(next);
            if (cache) cache->activations.push_back(current);
        }
        return current;
    }

    // Accumulates d(loss)/d(params) into `grads` (same layout as params())
    // given d(loss)/d(output) for the forward pass held in `cache`.
    void backward(const Cache& cache, const std::vector<double>& output_grad, std::vector<double>& grads) const {
        if (grads.size() != params_.size()) throw std::invalid_argument("mlp: grads layout mismatch");
        std::vector<double> delta = output_grad;
        for (std::size_t l = sizes_.size() - 1; l-- > 0;) {
            int in = sizes_[l];
            int out = sizes_[l + 1];
            const std::vector<double>& below = cache.activations[l];
            const double* w = params_.data() + w_offsets_[l];
            double* gw = grads.data() + w_offsets_[l];
            double* gb = grads.data() + b_offsets_[l];
            for (int j = 0; j < out; ++j) {
                double d = delta[static_cast<std::size_t>(j)];
                gb[j] += d;
                double* grow = gw + static_cast<std::size_t>(j) * static_cast<std::size_t>(in);
                for (int i = 0; i < in; ++i) grow[i] += d * below[static_cast<std::size_t>(i)];
            }
            if (l == 0) break;
            std::vector<double> prev(static_cast<std::size_t>(in), 0.0);
            for (int j = 0; j < out; ++j) {
                double d = delta[static_cast<std::size_t>(j)];
                const double* row = w + static_cast<std::size_t>(j) * static_cast<std::size_t>(in);
                for (int i = 0; i < in; ++i) prev[static_cast<std::size_t>(i)] += d * row[i];
            }
            const std::vector<double>& act = cache.activations[l];  // tanh outputs
            for (int i = 0; i < in; ++i) {
                prev[static_cast<std::size_t>(i)] *= 1.0 - act[static_cast<std::size_t>(i)] * act[static_cast<std::size_t>(i)];
            }
            delta = std::move(prev);
        }
    }

private:
    std::vector<int> sizes_;
    std::vector<std::size_t> w_offsets_;
    std::vector<std::size_t> b_offsets_;
    std::vector<double> params_;
};

struct AdamOptimizer {
    double learning_rate = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void step(std::vector<double>& params, const std::vector<double>& grads) {
        if (m_.empty()) {
            m_.assign(params.size(), 0.0);
            v_.assign(params.size(), 0.0);
        }
        ++t_;
        double bc1 = 1.0 - std::pow(beta1, t_);
        double bc2 = 1.0 - std::pow(beta2, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = beta1 * m_[i] + (1.0 - beta1) * grads[i];
            v_[i] = beta2 * v_[i] + (1.0 - beta2) * grads[i] * grads[i];
            params[i] -= learning_rate * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + epsilon);
        }
    }

private:
    std::vector<double> m_, v_;
    int t_ = 0;
};

inline std::vector<double> softmax(const std::vector<double>& logits) {
    double max_logit = logits[0];
    for (double v : logits) max_logit = std::max(max_logit, v);
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - max_logit);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

inline double entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

}  // namespace pnav
