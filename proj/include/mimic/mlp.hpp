// Fixed-family tanh MLP over flat parameter vectors, with batched forward,
// reverse-mode parameter gradients (vjp) and forward-mode tangents (jvp).
// Columns are samples throughout.
#pragma once

#include <cstdint>
#include <vector>

#include "mimic/mdp.hpp"

namespace mimic {

struct MlpSpec {
  int in_dim = 0;
  std::vector<int> hidden;  // tanh layers; empty gives a linear map
  int out_dim = 0;
};

class Mlp {
 public:
  explicit Mlp(MlpSpec spec);

  const MlpSpec& spec() const { return spec_; }
  int n_params() const { return n_params_; }

  // semi-orthogonal hidden weights, small final layer, zero biases
  VectorXd init_params(std::uint64_t seed) const;

  struct Cache {
    MatrixXd input;                   // in_dim x B
    std::vector<MatrixXd> hidden;     // tanh activations per hidden layer
    MatrixXd output;                  // out_dim x B
  };

  Cache forward(const VectorXd& params, const MatrixXd& input) const;

  // d/dparams of sum_ij cotangent_ij * output_ij; needs the forward cache
  VectorXd vjp(const VectorXd& params, const Cache& cache, const MatrixXd& cotangent) const;

  // directional derivative of the outputs along a parameter tangent
  MatrixXd jvp(const VectorXd& params, const Cache& cache, const VectorXd& tangent) const;

 private:
  struct Layer {
    int in = 0, out = 0, w_offset = 0, b_offset = 0;
  };

  MlpSpec spec_;
  std::vector<Layer> layers_;
  int n_params_ = 0;
};

}  // namespace mimic
