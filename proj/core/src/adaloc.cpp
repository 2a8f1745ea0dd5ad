// Copyright 2026 The mgtloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mgtloc/adaloc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mgtloc/errors.hpp"

namespace mgtloc {
namespace {

constexpr char kMagic[8] = {'M', 'G', 'T', 'L', 'O', 'C', 'A', 'D'};
constexpr std::uint32_t kModelVersion = 1;
constexpr std::uint32_t kMaxDim = 1u << 16;
constexpr double kOutputFloor = 1e-15;
constexpr double kOracleGain = 20.0;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd activate(const Eigen::VectorXd& z, Activation activation) {
  if (activation == Activation::kTanh) return z.array().tanh().matrix();
  return z.cwiseMax(0.0);
}

// Derivative of the activation given pre-activation z and output h.
Eigen::VectorXd activation_slope(const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& h,
                                 Activation activation) {
  if (activation == Activation::kTanh) {
    return (1.0 - h.array().square()).matrix();
  }
  return (z.array() > 0.0).cast<double>().matrix();
}

void check_feature(const AdaLocModel& model, std::span<const double> feature) {
  if (static_cast<int>(feature.size()) != model.feature_dim()) {
    throw UsageError("feature dimension " + std::to_string(feature.size()) +
                     " does not match model feature_dim " +
                     std::to_string(model.feature_dim()));
  }
  for (double v : feature) {
    if (!std::isfinite(v)) {
      throw DataError("non-finite value in AdaLoc input feature");
    }
  }
}

class ByteWriter {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const char*>(data);
    buffer_.insert(buffer_.end(), p, p + n);
  }
  void u32(std::uint32_t v) { little_endian(v); }
  void u64(std::uint64_t v) { little_endian(v); }
  void f64(double v) { little_endian(std::bit_cast<std::uint64_t>(v)); }
  const std::string& data() const { return buffer_; }

 private:
  template <typename T>
  void little_endian(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buffer_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
  }
  std::string buffer_;
};

class ByteReader {
 public:
  ByteReader(std::string_view data, std::string what)
      : data_(data), what_(std::move(what)) {}

  void bytes(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() { return little_endian<std::uint32_t>(); }
  std::uint64_t u64() { return little_endian<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(little_endian<std::uint64_t>()); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw DataError(what_ + ": file is truncated");
  }
  template <typename T>
  T little_endian() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  std::string_view data_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string activation_name(Activation activation) {
  return activation == Activation::kTanh ? "tanh" : "relu";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw UsageError("unknown activation '" + std::string(name) +
                   "' (expected relu or tanh)");
}

AdaLocModel AdaLocModel::zeros(int m, int feature_dim, int hidden_dim,
                               double dropout_rate, Activation activation) {
  if (m < 1 || feature_dim < 1 || hidden_dim < 1) {
    throw UsageError("AdaLoc dimensions must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw UsageError("dropout rate must be in [0,1)");
  }
  AdaLocModel model;
  model.m = m;
  model.dropout_rate = dropout_rate;
  model.activation = activation;
  model.w1 = Eigen::MatrixXd::Zero(hidden_dim, feature_dim);
  model.b1 = Eigen::VectorXd::Zero(hidden_dim);
  model.w2 = Eigen::MatrixXd::Zero(m, hidden_dim);
  model.b2 = Eigen::VectorXd::Zero(m);
  return model;
}

bool operator==(const AdaLocModel& x, const AdaLocModel& y) {
  return x.m == y.m && x.dropout_rate == y.dropout_rate &&
         x.activation == y.activation && x.w1.rows() == y.w1.rows() &&
         x.w1.cols() == y.w1.cols() && x.w2.rows() == y.w2.rows() &&
         x.w1 == y.w1 && x.b1 == y.b1 && x.w2 == y.w2 && x.b2 == y.b2;
}

AdaLocModel init_weights(int m, std::uint64_t seed, const AdaLocShape& shape) {
  AdaLocModel model = AdaLocModel::zeros(m, shape.feature_dim, shape.hidden_dim,
                                         shape.dropout_rate, shape.activation);
  Rng rng(seed);
  auto fill = [&](Eigen::MatrixXd& w) {
    const double s =
        std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    // Row-major draw order so the stream does not depend on Eigen's layout.
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = (2.0 * rng.uniform() - 1.0) * s;
      }
    }
  };
  fill(model.w1);
  fill(model.w2);
  return model;
}

AdaLocModel make_oracle_model(int m, int feature_dim) {
  if (feature_dim < m) {
    throw UsageError("oracle model needs feature_dim >= m");
  }
  AdaLocModel model =
      AdaLocModel::zeros(m, feature_dim, feature_dim, 0.0, Activation::kRelu);
  for (int j = 0; j < m; ++j) {
    model.w1(j, j) = 1.0;
    model.w2(j, j) = 2.0 * kOracleGain;
    model.b2(j) = -kOracleGain;
  }
  return model;
}

std::vector<double> adaloc_forward(const AdaLocModel& model,
                                   std::span<const double> feature,
                                   bool training, Rng* rng) {
  check_feature(model, feature);
  const Eigen::Map<const Eigen::VectorXd> f(feature.data(),
                                            static_cast<Eigen::Index>(feature.size()));
  Eigen::VectorXd h = activate(model.w1 * f + model.b1, model.activation);
  if (training && model.dropout_rate > 0.0) {
    if (rng == nullptr) throw UsageError("training-mode forward needs an RNG");
    const double keep_scale = 1.0 / (1.0 - model.dropout_rate);
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      h(i) = rng->uniform() < model.dropout_rate ? 0.0 : h(i) * keep_scale;
    }
  }
  const Eigen::VectorXd logits = model.w2 * h + model.b2;
  std::vector<double> probs(static_cast<std::size_t>(model.m));
  for (int j = 0; j < model.m; ++j) {
    probs[static_cast<std::size_t>(j)] =
        std::clamp(sigmoid(logits(j)), kOutputFloor, 1.0 - kOutputFloor);
  }
  return probs;
}

BceResult bce_loss(std::span<const double> probs, std::span<const double> targets,
                   std::span<const double> mask) {
  if (probs.size() != targets.size() || probs.size() != mask.size()) {
    throw UsageError("bce_loss: probs, targets and mask differ in length");
  }
  BceResult result;
  result.grad_logits.assign(probs.size(), 0.0);
  for (double w : mask) {
    if (w != 0.0) ++result.count;
  }
  if (result.count == 0) return result;
  const double inv = 1.0 / result.count;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (mask[j] == 0.0) continue;
    const double p =
        std::clamp(probs[j], kProbabilityClamp, 1.0 - kProbabilityClamp);
    const double t = targets[j];
    result.loss -= (t * std::log(p) + (1.0 - t) * std::log(1.0 - p)) * inv;
    result.grad_logits[j] = (probs[j] - t) * inv;
  }
  return result;
}

double loss_and_gradients(const AdaLocModel& model, const ChunkExample& example,
                          AdaLocGradients* gradients) {
  check_feature(model, example.feature);
  if (static_cast<int>(example.targets.size()) != model.m ||
      static_cast<int>(example.mask.size()) != model.m) {
    throw UsageError("example targets/mask length does not match model m");
  }
  const Eigen::Map<const Eigen::VectorXd> f(
      example.feature.data(), static_cast<Eigen::Index>(example.feature.size()));
  const Eigen::VectorXd z = model.w1 * f + model.b1;
  const Eigen::VectorXd h = activate(z, model.activation);
  const Eigen::VectorXd logits = model.w2 * h + model.b2;
  std::vector<double> probs(static_cast<std::size_t>(model.m));
  for (int j = 0; j < model.m; ++j) {
    probs[static_cast<std::size_t>(j)] = sigmoid(logits(j));
  }
  const BceResult bce = bce_loss(probs, example.targets, example.mask);
  if (gradients != nullptr) {
    const Eigen::Map<const Eigen::VectorXd> delta(bce.grad_logits.data(),
                                                  model.m);
    gradients->w2 = delta * h.transpose();
    gradients->b2 = delta;
    const Eigen::VectorXd dz =
        (model.w2.transpose() * delta)
            .cwiseProduct(activation_slope(z, h, model.activation));
    gradients->w1 = dz * f.transpose();
    gradients->b1 = dz;
  }
  return bce.loss;
}

void save_model(const AdaLocModel& model, const std::filesystem::path& path) {
  ByteWriter w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(model.feature_dim()));
  w.u32(static_cast<std::uint32_t>(model.hidden_dim()));
  w.u32(static_cast<std::uint32_t>(model.m));
  w.f64(model.dropout_rate);
  w.u32(model.activation == Activation::kTanh ? 1u : 0u);
  auto matrix = [&](const Eigen::MatrixXd& mat) {
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) w.f64(mat(r, c));
    }
  };
  auto vector = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) w.f64(v(i));
  };
  matrix(model.w1);
  vector(model.b1);
  matrix(model.w2);
  vector(model.b2);
  w.u64(fnv1a(w.data()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file " + path.string());
  out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
  if (!out) throw DataError("write failed for model file " + path.string());
}

AdaLocModel load_model(const std::filesystem::path& path,
                       std::optional<int> expected_feature_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const std::string what = "model file " + path.string();
  ByteReader r(data, what);

  char magic[sizeof kMagic];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw DataError(what + ": not an AdaLoc model");
  }
  if (const std::uint32_t version = r.u32(); version != kModelVersion) {
    throw DataError(what + ": unsupported version " + std::to_string(version));
  }
  const std::uint32_t feature_dim = r.u32();
  const std::uint32_t hidden_dim = r.u32();
  const std::uint32_t m = r.u32();
  const double dropout = r.f64();
  const std::uint32_t activation = r.u32();
  if (feature_dim == 0 || hidden_dim == 0 || m == 0 || feature_dim > kMaxDim ||
      hidden_dim > kMaxDim || m > kMaxDim || activation > 1 ||
      !(dropout >= 0.0 && dropout < 1.0)) {
    throw DataError(what + ": corrupt header");
  }
  if (expected_feature_dim &&
      static_cast<int>(feature_dim) != *expected_feature_dim) {
    throw DataError(what + ": feature_dim " + std::to_string(feature_dim) +
                    " does not match the pipeline's " +
                    std::to_string(*expected_feature_dim));
  }
  const std::size_t params =
      static_cast<std::size_t>(hidden_dim) * feature_dim + hidden_dim +
      static_cast<std::size_t>(m) * hidden_dim + m;
  if (r.remaining() != params * sizeof(double) + sizeof(std::uint64_t)) {
    throw DataError(what + ": file is truncated or has trailing bytes");
  }

  AdaLocModel model = AdaLocModel::zeros(
      static_cast<int>(m), static_cast<int>(feature_dim),
      static_cast<int>(hidden_dim), dropout,
      activation == 1 ? Activation::kTanh : Activation::kRelu);
  auto matrix = [&](Eigen::MatrixXd& mat) {
    for (Eigen::Index row = 0; row < mat.rows(); ++row) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) mat(row, c) = r.f64();
    }
  };
  auto vector = [&](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = r.f64();
  };
  matrix(model.w1);
  vector(model.b1);
  matrix(model.w2);
  vector(model.b2);
  const std::size_t payload_end = r.position();
  if (r.u64() != fnv1a(std::string_view(data).substr(0, payload_end))) {
    throw DataError(what + ": checksum mismatch");
  }
  return model;
}

}  // namespace mgtloc
