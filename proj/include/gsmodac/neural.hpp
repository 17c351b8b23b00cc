#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gsmodac/graphstate.hpp"
#include "gsmodac/rng.hpp"

namespace gsmodac {

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class Activation { Tanh, Relu, Identity };

struct GcnLayer {
  DenseMatrix weight;        // [in x out]
  std::vector<double> bias;  // [out]
  Activation activation = Activation::Tanh;
};

struct PolicyConfig {
  int in_dim = 2;       // objective count
  int hidden = 64;
  int gcn_layers = 2;   // 1 or 2
  bool budget_feature = true;
  int action_dim = 2;

  int aux_dim() const { return budget_feature ? 1 : 0; }
};

inline constexpr double kLogStdInit = -0.6931471805599453;  // log(0.5)
inline constexpr double kLogStdMin = -4.605170185988091;    // log(0.01)
inline constexpr double kLogStdMax = 0.0;                   // log(1.0)

// Shared GCN trunk feeding a tanh-squashed actor head, an unsquashed critic
// head and a state-independent learnable action log-spread.
struct PolicyNet {
  PolicyConfig cfg;
  std::vector<GcnLayer> gcn;
  DenseMatrix actor_weight;        // [hidden + aux x action_dim]
  std::vector<double> actor_bias;  // [action_dim]
  DenseMatrix critic_weight;       // [hidden + aux x 1]
  double critic_bias = 0.0;
  std::vector<double> log_std;     // [action_dim]
};

// Weights uniform in +-1/sqrt(fan_in), biases zero, log_std at log(0.5).
PolicyNet make_policy(const PolicyConfig& cfg, std::uint64_t seed);

// Gradients shaped like the parameters they belong to.
PolicyNet zeros_like(const PolicyNet& net);

std::size_t param_count(const PolicyNet& net);
std::vector<double> flatten_params(const PolicyNet& net);
void unflatten_params(PolicyNet& net, std::span<const double> flat);

// Symmetric-normalized propagation with self-loops:
// out = activation(D^-1/2 (A + I) D^-1/2 * X * W + b).
DenseMatrix gcn_forward(const GcnLayer& layer, const DenseMatrix& node_features,
                        std::span<const std::pair<int, int>> edges);

struct ForwardCache {
  const StateGraph* graph = nullptr;
  std::vector<std::vector<int>> neighbors;   // with degrees implied
  std::vector<DenseMatrix> layer_input;      // X per layer
  std::vector<DenseMatrix> layer_aggregated; // \hat{A} X per layer
  std::vector<DenseMatrix> layer_output;     // activation output per layer
  std::vector<double> pooled;                // mean over nodes
  std::vector<double> head_input;            // pooled (+ budget)
  std::vector<double> action_mean;           // tanh-squashed
  double value = 0.0;
  std::uint64_t net_stamp = 0;               // guards against stale caches
};

struct PolicyOutput {
  std::vector<double> action_mean;
  double value = 0.0;
};

PolicyOutput policy_forward(const PolicyNet& net, const StateGraph& graph, ForwardCache* cache);

// Exact reverse-mode gradients of a scalar loss with the given partials
// w.r.t. the action means and the value. log_std gradients are left zero;
// losses touching log_std add their direct partial on top.
void policy_backward(const PolicyNet& net, const ForwardCache& cache,
                     std::span<const double> grad_action_mean, double grad_value,
                     PolicyNet& grads);

void save_checkpoint(const PolicyNet& net, const std::string& path);
PolicyNet load_checkpoint(const std::string& path);

// JSON helpers so trainer checkpoints can embed the policy block.
std::string policy_to_json_text(const PolicyNet& net);
PolicyNet policy_from_json_text(const std::string& text);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long t = 0;
};

// One Adam step over the flattened parameters; log_std entries are
// projected back into [kLogStdMin, kLogStdMax] afterwards.
void adam_step(PolicyNet& net, const PolicyNet& grads, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace gsmodac
