#include "mimic/mlp.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "mimic/rng.hpp"

namespace mimic {

namespace {

Eigen::Map<const MatrixXd> weight_view(const VectorXd& params, int offset, int rows, int cols) {
  return Eigen::Map<const MatrixXd>(params.data() + offset, rows, cols);
}

Eigen::Map<const VectorXd> bias_view(const VectorXd& params, int offset, int rows) {
  return Eigen::Map<const VectorXd>(params.data() + offset, rows);
}

// nearest-orthogonal rows/columns from a seeded Gaussian draw
MatrixXd semi_orthogonal(int rows, int cols, double scale, Rng& rng) {
  const int big = std::max(rows, cols), small = std::min(rows, cols);
  MatrixXd gauss(big, small);
  for (int j = 0; j < small; ++j)
    for (int i = 0; i < big; ++i) gauss(i, j) = gaussian(rng);
  Eigen::HouseholderQR<MatrixXd> qr(gauss);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(big, small);
  // fix the sign ambiguity so the draw is a deterministic function of the bits
  for (int j = 0; j < small; ++j)
    if (qr.matrixQR()(j, j) < 0) q.col(j) = -q.col(j);
  MatrixXd w = rows >= cols ? q : MatrixXd(q.transpose());
  return scale * w;
}

}  // namespace

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  if (spec_.in_dim <= 0 || spec_.out_dim <= 0)
    throw std::invalid_argument("mlp dimensions must be positive");
  for (int h : spec_.hidden)
    if (h <= 0) throw std::invalid_argument("mlp hidden sizes must be positive");
  int prev = spec_.in_dim;
  int offset = 0;
  auto add_layer = [&](int out) {
    Layer layer;
    layer.in = prev;
    layer.out = out;
    layer.w_offset = offset;
    offset += out * prev;
    layer.b_offset = offset;
    offset += out;
    layers_.push_back(layer);
    prev = out;
  };
  for (int h : spec_.hidden) add_layer(h);
  add_layer(spec_.out_dim);
  n_params_ = offset;
}

VectorXd Mlp::init_params(std::uint64_t seed) const {
  Rng rng = make_rng(seed);
  VectorXd params = VectorXd::Zero(n_params_);
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const Layer& layer = layers_[k];
    const bool last = k + 1 == layers_.size();
    // small final layer keeps the initial policy near uniform
    const double scale = last ? 0.01 : 1.0;
    MatrixXd w = semi_orthogonal(layer.out, layer.in, scale, rng);
    Eigen::Map<MatrixXd>(params.data() + layer.w_offset, layer.out, layer.in) = w;
  }
  return params;
}

Mlp::Cache Mlp::forward(const VectorXd& params, const MatrixXd& input) const {
  if (params.size() != n_params_) throw std::invalid_argument("bad parameter vector size");
  if (input.rows() != spec_.in_dim) throw std::invalid_argument("bad input dimension");
  if (!input.allFinite()) throw std::invalid_argument("non-finite network input");
  Cache cache;
  cache.input = input;
  MatrixXd current = input;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const Layer& layer = layers_[k];
    auto w = weight_view(params, layer.w_offset, layer.out, layer.in);
    auto b = bias_view(params, layer.b_offset, layer.out);
    MatrixXd pre = (w * current).colwise() + b;
    if (k + 1 == layers_.size()) {
      cache.output = std::move(pre);
    } else {
      cache.hidden.push_back(pre.array().tanh().matrix());
      current = cache.hidden.back();
    }
  }
  return cache;
}

VectorXd Mlp::vjp(const VectorXd& params, const Cache& cache, const MatrixXd& cotangent) const {
  if (params.size() != n_params_) throw std::invalid_argument("bad parameter vector size");
  if (cotangent.rows() != spec_.out_dim || cotangent.cols() != cache.input.cols())
    throw std::invalid_argument("cotangent shape does not match the cached batch");
  VectorXd grad = VectorXd::Zero(n_params_);
  MatrixXd upstream = cotangent;
  for (int k = static_cast<int>(layers_.size()) - 1; k >= 0; --k) {
    const Layer& layer = layers_[k];
    const MatrixXd& below = k == 0 ? cache.input : cache.hidden[k - 1];
    Eigen::Map<MatrixXd>(grad.data() + layer.w_offset, layer.out, layer.in).noalias() =
        upstream * below.transpose();
    Eigen::Map<VectorXd>(grad.data() + layer.b_offset, layer.out) = upstream.rowwise().sum();
    if (k > 0) {
      auto w = weight_view(params, layer.w_offset, layer.out, layer.in);
      upstream = (w.transpose() * upstream).cwiseProduct(
          (1.0 - cache.hidden[k - 1].array().square()).matrix());
    }
  }
  return grad;
}

MatrixXd Mlp::jvp(const VectorXd& params, const Cache& cache, const VectorXd& tangent) const {
  if (params.size() != n_params_ || tangent.size() != n_params_)
    throw std::invalid_argument("bad parameter vector size");
  const auto batch = cache.input.cols();
  MatrixXd dcurrent = MatrixXd::Zero(spec_.in_dim, batch);
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const Layer& layer = layers_[k];
    const MatrixXd& below = k == 0 ? cache.input : cache.hidden[k - 1];
    auto w = weight_view(params, layer.w_offset, layer.out, layer.in);
    auto dw = weight_view(tangent, layer.w_offset, layer.out, layer.in);
    auto db = bias_view(tangent, layer.b_offset, layer.out);
    MatrixXd dpre = ((dw * below + w * dcurrent).colwise() + db);
    if (k + 1 == layers_.size()) return dpre;
    dcurrent = dpre.cwiseProduct((1.0 - cache.hidden[k].array().square()).matrix());
  }
  throw std::logic_error("unreachable");
}

}  // namespace mimic
