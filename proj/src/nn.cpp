#include "kcharge/nn.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "kcharge/errors.hpp"

namespace kcharge {

MlpNetwork::MlpNetwork(std::vector<int> sizes, std::uint64_t seed) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw InvariantError("network needs at least input and output layers");
    if (sizes_.back() != 1) throw InvariantError("network output must be scalar");
    for (int s : sizes_)
        if (s < 1) throw InvariantError("layer sizes must be positive");

    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        weight_offset_.push_back(total);
        total += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1];
        bias_offset_.push_back(total);
        total += sizes_[l + 1];
    }
    params_.resize(total);

    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
        std::uniform_real_distribution<double> u(-bound, bound);
        const std::size_t n = static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
        for (std::size_t i = 0; i < n; ++i) params_[weight_offset_[l] + i] = u(rng);
    }
}

double MlpNetwork::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != sizes_.front())
        throw InvariantError("feature vector length " + std::to_string(x.size()) +
                             " does not match network input " + std::to_string(sizes_.front()));
    std::vector<double> act(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int in = sizes_[l];
        const int out = sizes_[l + 1];
        const bool hidden = l + 2 < sizes_.size();
        next.assign(out, 0.0);
        const double* w = params_.data() + weight_offset_[l];
        const double* b = params_.data() + bias_offset_[l];
        for (int o = 0; o < out; ++o) {
            double z = b[o];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) z += row[i] * act[i];
            next[o] = hidden ? std::max(0.0, z) : z;
        }
        act.swap(next);
    }
    return act[0];
}

double MlpNetwork::accumulate_gradient(std::span<const double> x, double target,
                                       std::vector<double>& grad) const {
    if (grad.size() != params_.size()) throw InvariantError("gradient buffer size mismatch");

    // Forward pass keeping pre-activation signs and activations per layer.
    std::vector<std::vector<double>> acts;
    acts.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int in = sizes_[l];
        const int out = sizes_[l + 1];
        const bool hidden = l + 2 < sizes_.size();
        std::vector<double> a(out);
        const double* w = params_.data() + weight_offset_[l];
        const double* b = params_.data() + bias_offset_[l];
        for (int o = 0; o < out; ++o) {
            double z = b[o];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) z += row[i] * acts[l][i];
            a[o] = hidden ? std::max(0.0, z) : z;
        }
        acts.push_back(std::move(a));
    }

    const double output = acts.back()[0];
    const double loss = (target - output) * (target - output);

    // Backward pass. d(loss)/d(output) = 2 (output - target).
    std::vector<double> delta{2.0 * (output - target)};
    std::vector<double> prev;
    for (std::size_t l = sizes_.size() - 1; l-- > 0;) {
        const int in = sizes_[l];
        const int out = sizes_[l + 1];
        double* gw = grad.data() + weight_offset_[l];
        double* gb = grad.data() + bias_offset_[l];
        const double* w = params_.data() + weight_offset_[l];
        for (int o = 0; o < out; ++o) {
            gb[o] += delta[o];
            double* row = gw + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) row[i] += delta[o] * acts[l][i];
        }
        if (l == 0) break;
        prev.assign(in, 0.0);
        for (int i = 0; i < in; ++i) {
            if (acts[l][i] <= 0.0) continue;  // rectifier gate
            double s = 0.0;
            for (int o = 0; o < out; ++o)
                s += w[static_cast<std::size_t>(o) * in + i] * delta[o];
            prev[i] = s;
        }
        delta.swap(prev);
    }
    return loss;
}

void MlpNetwork::apply_step(const std::vector<double>& grad, double step) {
    if (grad.size() != params_.size()) throw InvariantError("gradient buffer size mismatch");
    for (std::size_t i = 0; i < params_.size(); ++i) params_[i] -= step * grad[i];
}

std::string MlpNetwork::to_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "kcharge-policy 1\n";
    out << "layers";
    for (int s : sizes_) out << ' ' << s;
    out << '\n';
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        out << "W" << l << ' ' << sizes_[l + 1] << ' ' << sizes_[l];
        const std::size_t nw = static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1];
        for (std::size_t i = 0; i < nw; ++i) out << ' ' << params_[weight_offset_[l] + i];
        out << '\n';
        out << "b" << l << ' ' << sizes_[l + 1];
        for (int i = 0; i < sizes_[l + 1]; ++i) out << ' ' << params_[bias_offset_[l] + i];
        out << '\n';
    }
    return out.str();
}

MlpNetwork MlpNetwork::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "kcharge-policy" || version != 1)
        throw IoError("unrecognized policy file header");
    if (!(in >> tag) || tag != "layers") throw IoError("policy file missing layer sizes");

    MlpNetwork net;
    {
        std::string line;
        std::getline(in, line);
        std::istringstream ls(line);
        int s;
        while (ls >> s) net.sizes_.push_back(s);
    }
    if (net.sizes_.size() < 2) throw IoError("policy file with malformed layer sizes");

    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
        net.weight_offset_.push_back(total);
        total += static_cast<std::size_t>(net.sizes_[l]) * net.sizes_[l + 1];
        net.bias_offset_.push_back(total);
        total += net.sizes_[l + 1];
    }
    net.params_.resize(total);

    for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
        int rows = 0, cols = 0;
        if (!(in >> tag >> rows >> cols) || tag != "W" + std::to_string(l) ||
            rows != net.sizes_[l + 1] || cols != net.sizes_[l])
            throw IoError("policy file weight block mismatch at layer " + std::to_string(l));
        const std::size_t nw = static_cast<std::size_t>(rows) * cols;
        for (std::size_t i = 0; i < nw; ++i)
            if (!(in >> net.params_[net.weight_offset_[l] + i]))
                throw IoError("policy file truncated weights");
        if (!(in >> tag >> rows) || tag != "b" + std::to_string(l) || rows != net.sizes_[l + 1])
            throw IoError("policy file bias block mismatch at layer " + std::to_string(l));
        for (int i = 0; i < net.sizes_[l + 1]; ++i)
            if (!(in >> net.params_[net.bias_offset_[l] + i]))
                throw IoError("policy file truncated biases");
    }
    return net;
}

}  // namespace kcharge
