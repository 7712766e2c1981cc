/*
 * mlp.cpp
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

#include "qroute/mlp.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

namespace qroute {

namespace {

constexpr char kMagic[8] = {'Q', 'R', 'M', 'L', 'P', 'N', 'E', 'T'};
constexpr std::uint32_t kFormatVersion = 1;

void validate_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("mlp: need at least input and output layers");
    for (int s : sizes)
        if (s < 1) throw std::invalid_argument("mlp: layer sizes must be positive");
    if (sizes.back() != 1) throw std::invalid_argument("mlp: output layer must be a single neuron");
}

}  // namespace

Mlp::Mlp(const Config& cfg, std::uint64_t seed) : cfg_(cfg) {
    validate_sizes(cfg.layer_sizes);
    Rng rng(seed);
    const std::size_t layers = cfg.layer_sizes.size() - 1;
    w_.resize(layers);
    b_.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        const int fan_in = cfg.layer_sizes[l];
        const int fan_out = cfg.layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        w_[l].resize(fan_out, fan_in);
        for (int i = 0; i < fan_out; ++i)
            for (int j = 0; j < fan_in; ++j) w_[l](i, j) = rng.uniform(-limit, limit);
        b_[l] = Eigen::VectorXd::Zero(fan_out);
    }
}

double Mlp::forward(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return forward_batch(x)(0);
}

Eigen::VectorXd Mlp::forward_batch(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    if (x.rows() != input_size()) throw std::invalid_argument("forward: input dimension mismatch");
    Eigen::MatrixXd a = x;
    for (std::size_t l = 0; l < w_.size(); ++l) {
        Eigen::MatrixXd z = (w_[l] * a).colwise() + b_[l];
        if (l + 1 < w_.size())
            a = z.cwiseMax(0.0);
        else
            a = std::move(z);
    }
    return a.row(0).transpose();
}

Mlp::Gradients Mlp::gradients(const Eigen::Ref<const Eigen::MatrixXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& y) const {
    if (x.rows() != input_size()) throw std::invalid_argument("gradients: input dimension mismatch");
    if (x.cols() != y.size()) throw std::invalid_argument("gradients: batch size mismatch");
    const auto n = x.cols();
    const std::size_t layers = w_.size();

    std::vector<Eigen::MatrixXd> act(layers + 1);
    act[0] = x;
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd z = (w_[l] * act[l]).colwise() + b_[l];
        if (l + 1 < layers)
            act[l + 1] = z.cwiseMax(0.0);
        else
            act[l + 1] = std::move(z);
    }

    Gradients g;
    g.w.resize(layers);
    g.b.resize(layers);
    const Eigen::RowVectorXd err = act[layers].row(0) - y.transpose();
    g.loss = err.squaredNorm() / static_cast<double>(n);

    // d(mean squared error)/d(output), then walk the stack backwards.
    Eigen::MatrixXd delta = (2.0 / static_cast<double>(n)) * err;
    for (std::size_t l = layers; l-- > 0;) {
        g.w[l] = delta * act[l].transpose();
        g.b[l] = delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = w_[l].transpose() * delta;
            delta = back.cwiseProduct((act[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return g;
}

void Mlp::apply_update(const Gradients& g) {
    if (cfg_.optimizer == Optimizer::Sgd) {
        for (std::size_t l = 0; l < w_.size(); ++l) {
            w_[l] -= cfg_.learning_rate * g.w[l];
            b_[l] -= cfg_.learning_rate * g.b[l];
        }
        return;
    }
    if (mw_.empty()) {
        mw_.resize(w_.size());
        vw_.resize(w_.size());
        mb_.resize(w_.size());
        vb_.resize(w_.size());
        for (std::size_t l = 0; l < w_.size(); ++l) {
            mw_[l] = Eigen::MatrixXd::Zero(w_[l].rows(), w_[l].cols());
            vw_[l] = mw_[l];
            mb_[l] = Eigen::VectorXd::Zero(b_[l].size());
            vb_[l] = mb_[l];
        }
    }
    ++adam_step_;
    const double b1 = cfg_.adam_beta1;
    const double b2 = cfg_.adam_beta2;
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(adam_step_));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(adam_step_));
    const double eps = cfg_.adam_epsilon;
    for (std::size_t l = 0; l < w_.size(); ++l) {
        mw_[l] = b1 * mw_[l] + (1.0 - b1) * g.w[l];
        vw_[l] = b2 * vw_[l] + (1.0 - b2) * g.w[l].cwiseProduct(g.w[l]);
        w_[l].array() -= cfg_.learning_rate * (mw_[l].array() / bias1) /
                         ((vw_[l].array() / bias2).sqrt() + eps);
        mb_[l] = b1 * mb_[l] + (1.0 - b1) * g.b[l];
        vb_[l] = b2 * vb_[l] + (1.0 - b2) * g.b[l].cwiseProduct(g.b[l]);
        b_[l].array() -= cfg_.learning_rate * (mb_[l].array() / bias1) /
                         ((vb_[l].array() / bias2).sqrt() + eps);
    }
}

std::vector<double> Mlp::fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y, int epochs,
                             int batch_size, Rng& rng) {
    const auto n = x.cols();
    if (n == 0) throw std::invalid_argument("fit: empty training set");
    if (x.cols() != y.size()) throw std::invalid_argument("fit: batch size mismatch");
    if (epochs < 1 || batch_size < 1) throw std::invalid_argument("fit: bad epoch/batch settings");

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Eigen::MatrixXd bx(x.rows(), batch_size);
    Eigen::VectorXd by(batch_size);

    std::vector<double> epoch_loss;
    epoch_loss.reserve(static_cast<std::size_t>(epochs));
    for (int e = 0; e < epochs; ++e) {
        rng.shuffle(order);
        double sq_sum = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch_size) {
            const auto count = std::min<Eigen::Index>(batch_size, n - start);
            for (Eigen::Index i = 0; i < count; ++i) {
                bx.col(i) = x.col(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
                by(i) = y(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
            }
            const Gradients g = gradients(bx.leftCols(count), by.head(count));
            if (!std::isfinite(g.loss))
                throw DivergenceError("fit: non-finite loss, training diverged");
            sq_sum += g.loss * static_cast<double>(count);
            apply_update(g);
        }
        epoch_loss.push_back(sq_sum / static_cast<double>(n));
    }
    return epoch_loss;
}

void Mlp::save(const std::string& path, const std::string& metadata) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save: cannot open " + path);
    os.write(kMagic, sizeof(kMagic));
    auto put_u32 = [&os](std::uint32_t v) {
        os.write(reinterpret_cast<const char*>(&v), sizeof(v));
    };
    put_u32(kFormatVersion);
    put_u32(static_cast<std::uint32_t>(metadata.size()));
    os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
    put_u32(static_cast<std::uint32_t>(cfg_.layer_sizes.size()));
    for (int s : cfg_.layer_sizes) put_u32(static_cast<std::uint32_t>(s));
    for (std::size_t l = 0; l < w_.size(); ++l) {
        for (Eigen::Index i = 0; i < w_[l].rows(); ++i)
            for (Eigen::Index j = 0; j < w_[l].cols(); ++j) {
                const double v = w_[l](i, j);
                os.write(reinterpret_cast<const char*>(&v), sizeof(v));
            }
        os.write(reinterpret_cast<const char*>(b_[l].data()),
                 static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(b_[l].size())));
    }
    if (!os) throw std::runtime_error("save: write failed for " + path);
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ModelFormatError("load: cannot open " + path);
    char magic[sizeof(kMagic)];
    is.read(magic, sizeof(magic));
    if (!is || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
        throw ModelFormatError("load: " + path + " is not a model file (bad magic)");
    auto get_u32 = [&is, &path]() {
        std::uint32_t v;
        is.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!is) throw ModelFormatError("load: truncated header in " + path);
        return v;
    };
    const std::uint32_t ver = get_u32();
    if (ver != kFormatVersion)
        throw ModelFormatError("load: " + path + " has format version " + std::to_string(ver) +
                               ", this build reads version " + std::to_string(kFormatVersion));
    const std::uint32_t meta_len = get_u32();
    std::string metadata(meta_len, '\0');
    is.read(metadata.data(), meta_len);
    if (!is) throw ModelFormatError("load: truncated metadata in " + path);
    const std::uint32_t n_sizes = get_u32();
    if (n_sizes < 2 || n_sizes > 64)
        throw ModelFormatError("load: implausible layer count " + std::to_string(n_sizes));
    std::vector<int> sizes(n_sizes);
    for (auto& s : sizes) s = static_cast<int>(get_u32());
    validate_sizes(sizes);

    Mlp model;
    model.cfg_.layer_sizes = sizes;
    model.metadata_ = std::move(metadata);
    model.w_.resize(sizes.size() - 1);
    model.b_.resize(sizes.size() - 1);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        model.w_[l].resize(sizes[l + 1], sizes[l]);
        for (Eigen::Index i = 0; i < model.w_[l].rows(); ++i)
            for (Eigen::Index j = 0; j < model.w_[l].cols(); ++j) {
                double v;
                is.read(reinterpret_cast<char*>(&v), sizeof(v));
                if (!is)
                    throw ModelFormatError("load: truncated weights in layer " + std::to_string(l) +
                                           " (" + std::to_string(sizes[l + 1]) + "x" +
                                           std::to_string(sizes[l]) + ") of " + path);
                model.w_[l](i, j) = v;
            }
        model.b_[l].resize(sizes[l + 1]);
        is.read(reinterpret_cast<char*>(model.b_[l].data()),
                static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(sizes[l + 1])));
        if (!is)
            throw ModelFormatError("load: truncated biases in layer " + std::to_string(l) + " of " +
                                   path);
    }
    is.peek();
    if (!is.eof()) throw ModelFormatError("load: trailing bytes after model data in " + path);
    return model;
}

void Mlp::write_text(std::ostream& os) const {
    os << "format " << kFormatVersion << "\nlayers";
    for (int s : cfg_.layer_sizes) os << ' ' << s;
    os << "\nmetadata " << metadata_ << '\n';
    char buf[32];
    for (std::size_t l = 0; l < w_.size(); ++l) {
        os << "weights " << l << " " << w_[l].rows() << "x" << w_[l].cols() << '\n';
        for (Eigen::Index i = 0; i < w_[l].rows(); ++i) {
            for (Eigen::Index j = 0; j < w_[l].cols(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", w_[l](i, j));
                os << buf << (j + 1 < w_[l].cols() ? " " : "");
            }
            os << '\n';
        }
        os << "biases " << l << '\n';
        for (Eigen::Index i = 0; i < b_[l].size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", b_[l](i));
            os << buf << (i + 1 < b_[l].size() ? " " : "");
        }
        os << '\n';
    }
}

}  // namespace qroute
