#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kcharge {

// Fully-connected network with rectifier hidden units and one linear
// output. Parameters live in a single flat vector (per-layer weight matrix
// row-major, then bias) so finite-difference checks and text dumps stay
// trivial.
class MlpNetwork {
public:
    // sizes = {input, hidden..., 1}; weights uniform in ±1/sqrt(fan_in).
    MlpNetwork(std::vector<int> sizes, std::uint64_t seed);

    double forward(std::span<const double> x) const;

    // Accumulates d/dtheta of (target - forward(x))^2 into grad (sized
    // parameter_count()); returns the sample loss.
    double accumulate_gradient(std::span<const double> x, double target,
                               std::vector<double>& grad) const;

    void apply_step(const std::vector<double>& grad, double step);

    int input_size() const { return sizes_.front(); }
    std::size_t parameter_count() const { return params_.size(); }
    const std::vector<double>& parameters() const { return params_; }
    std::vector<double>& parameters() { return params_; }
    const std::vector<int>& layer_sizes() const { return sizes_; }

    // Versioned text round-trip: named parameter arrays, full precision.
    std::string to_text() const;
    static MlpNetwork from_text(const std::string& text);

private:
    MlpNetwork() = default;

    std::vector<int> sizes_;
    std::vector<double> params_;
    std::vector<std::size_t> weight_offset_;  // per layer
    std::vector<std::size_t> bias_offset_;
};

}  // namespace kcharge
