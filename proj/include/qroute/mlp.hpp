/*
 * mlp.hpp
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/rng.hpp"

namespace qroute {

/// Training produced a non-finite loss; the caller aborts the round.
class DivergenceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Model file could not be read (bad magic, truncation, shape mismatch).
class ModelFormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully-connected value regressor: rectified-linear hidden layers, linear
/// scalar output, mean-squared-error loss. Default shape is the
/// input/expansion/compression/output stack [F, 10F, F/2, 1] for F = 22.
/// All arithmetic is double precision. A fitted instance is immutable
/// through the const interface and safe to share for concurrent evaluation.
class Mlp {
public:
    enum class Optimizer { Adam, Sgd };

    struct Config {
        std::vector<int> layer_sizes{22, 220, 11, 1};
        double learning_rate = 1e-3;
        Optimizer optimizer = Optimizer::Adam;
        double adam_beta1 = 0.9;
        double adam_beta2 = 0.999;
        double adam_epsilon = 1e-8;
    };

    Mlp() = default;

    /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
    Mlp(const Config& cfg, std::uint64_t seed);

    int input_size() const { return cfg_.layer_sizes.front(); }
    const std::vector<int>& layer_sizes() const { return cfg_.layer_sizes; }
    const Config& config() const { return cfg_; }

    double forward(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// Batched evaluation; samples are columns of x (F x n). Returns one
    /// output per column.
    Eigen::VectorXd forward_batch(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

    /// Mean-squared-error gradients over one batch (columns of x). Exposed
    /// so finite-difference checks can probe the same path fit() uses.
    struct Gradients {
        std::vector<Eigen::MatrixXd> w;
        std::vector<Eigen::VectorXd> b;
        double loss = 0.0;
    };
    Gradients gradients(const Eigen::Ref<const Eigen::MatrixXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) const;

    /// Shuffled mini-batch descent on mean squared error. Returns the mean
    /// per-sample loss of each epoch. Inputs are not modified. Throws
    /// DivergenceError if the loss goes non-finite.
    std::vector<double> fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& y, int epochs,
                            int batch_size, Rng& rng);

    /// Binary little-endian model file: magic, format version, metadata
    /// string, layer sizes, then per-layer weights (row-major) and biases.
    void save(const std::string& path, const std::string& metadata = "") const;
    static Mlp load(const std::string& path);
    const std::string& metadata() const { return metadata_; }

    /// Human-readable full-precision dump for diffing models.
    void write_text(std::ostream& os) const;

    // Parameter access (tests and the finite-difference oracle).
    std::vector<Eigen::MatrixXd>& weights() { return w_; }
    std::vector<Eigen::VectorXd>& biases() { return b_; }
    const std::vector<Eigen::MatrixXd>& weights() const { return w_; }
    const std::vector<Eigen::VectorXd>& biases() const { return b_; }

private:
    void apply_update(const Gradients& g);

    Config cfg_;
    std::string metadata_;
    std::vector<Eigen::MatrixXd> w_;  // per layer, rows = out, cols = in
    std::vector<Eigen::VectorXd> b_;
    // Adaptive moment state, lazily sized on first update.
    std::vector<Eigen::MatrixXd> mw_, vw_;
    std::vector<Eigen::VectorXd> mb_, vb_;
    long adam_step_ = 0;
};

}  // namespace qroute
