#include "gsmodac/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace gsmodac {
namespace {

double activate(double x, Activation a) {
  switch (a) {
    case Activation::Tanh: return std::tanh(x);
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Identity: return x;
  }
  return x;
}

// Derivative expressed through the activated output.
double activate_grad(double y, Activation a) {
  switch (a) {
    case Activation::Tanh: return 1.0 - y * y;
    case Activation::Relu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::Identity: return 1.0;
  }
  return 1.0;
}

void init_uniform(DenseMatrix& m, std::size_t fan_in, Rng& rng) {
  const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (auto& x : m.data) x = rng.uniform(-limit, limit);
}

std::vector<std::vector<int>> adjacency(std::size_t num_nodes,
                                        std::span<const std::pair<int, int>> edges) {
  std::vector<std::vector<int>> nb(num_nodes);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= num_nodes ||
        static_cast<std::size_t>(b) >= num_nodes) {
      throw std::out_of_range("gcn: edge index out of range");
    }
    nb[static_cast<std::size_t>(a)].push_back(b);
    nb[static_cast<std::size_t>(b)].push_back(a);
  }
  return nb;
}

// \hat{A} X with self-loops and symmetric degree normalization. \hat{A} is
// symmetric, so the same routine propagates gradients backwards.
DenseMatrix aggregate(const DenseMatrix& x, const std::vector<std::vector<int>>& nb) {
  const std::size_t n = x.rows;
  DenseMatrix out(n, x.cols);
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(nb[i].size() + 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double cii = inv_sqrt_deg[i] * inv_sqrt_deg[i];
    for (std::size_t c = 0; c < x.cols; ++c) out.at(i, c) = cii * x.at(i, c);
    for (int j : nb[i]) {
      const double cij = inv_sqrt_deg[i] * inv_sqrt_deg[static_cast<std::size_t>(j)];
      for (std::size_t c = 0; c < x.cols; ++c) {
        out.at(i, c) += cij * x.at(static_cast<std::size_t>(j), c);
      }
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  }
  return out;
}

std::uint64_t stamp_of(const PolicyNet& net) {
  // Cheap content stamp over a few parameters; catches forward/backward pairs
  // taken across a parameter update.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits;
    h *= 0x100000001b3ULL;
  };
  for (const auto& layer : net.gcn) {
    if (!layer.weight.data.empty()) mix(layer.weight.data.front());
    if (!layer.bias.empty()) mix(layer.bias.front());
  }
  if (!net.actor_weight.data.empty()) mix(net.actor_weight.data.front());
  mix(net.critic_bias);
  for (double v : net.log_std) mix(v);
  return h;
}

}  // namespace

PolicyNet make_policy(const PolicyConfig& cfg, std::uint64_t seed) {
  if (cfg.gcn_layers != 1 && cfg.gcn_layers != 2) {
    throw std::invalid_argument("policy: gcn_layers must be 1 or 2");
  }
  if (cfg.in_dim <= 0 || cfg.hidden <= 0 || cfg.action_dim <= 0) {
    throw std::invalid_argument("policy: nonpositive dimension");
  }
  Rng rng(derive_seed(seed, {0x706f6c69ULL}));
  PolicyNet net;
  net.cfg = cfg;
  int in = cfg.in_dim;
  for (int l = 0; l < cfg.gcn_layers; ++l) {
    GcnLayer layer;
    layer.weight = DenseMatrix(static_cast<std::size_t>(in), static_cast<std::size_t>(cfg.hidden));
    init_uniform(layer.weight, static_cast<std::size_t>(in), rng);
    layer.bias.assign(static_cast<std::size_t>(cfg.hidden), 0.0);
    layer.activation = Activation::Tanh;
    net.gcn.push_back(std::move(layer));
    in = cfg.hidden;
  }
  const std::size_t head_in = static_cast<std::size_t>(cfg.hidden + cfg.aux_dim());
  net.actor_weight = DenseMatrix(head_in, static_cast<std::size_t>(cfg.action_dim));
  init_uniform(net.actor_weight, head_in, rng);
  net.actor_bias.assign(static_cast<std::size_t>(cfg.action_dim), 0.0);
  net.critic_weight = DenseMatrix(head_in, 1);
  init_uniform(net.critic_weight, head_in, rng);
  net.critic_bias = 0.0;
  net.log_std.assign(static_cast<std::size_t>(cfg.action_dim), kLogStdInit);
  return net;
}

PolicyNet zeros_like(const PolicyNet& net) {
  PolicyNet z;
  z.cfg = net.cfg;
  for (const auto& layer : net.gcn) {
    GcnLayer zl;
    zl.weight = DenseMatrix(layer.weight.rows, layer.weight.cols);
    zl.bias.assign(layer.bias.size(), 0.0);
    zl.activation = layer.activation;
    z.gcn.push_back(std::move(zl));
  }
  z.actor_weight = DenseMatrix(net.actor_weight.rows, net.actor_weight.cols);
  z.actor_bias.assign(net.actor_bias.size(), 0.0);
  z.critic_weight = DenseMatrix(net.critic_weight.rows, net.critic_weight.cols);
  z.critic_bias = 0.0;
  z.log_std.assign(net.log_std.size(), 0.0);
  return z;
}

std::size_t param_count(const PolicyNet& net) {
  std::size_t n = 0;
  for (const auto& layer : net.gcn) n += layer.weight.data.size() + layer.bias.size();
  return n + net.actor_weight.data.size() + net.actor_bias.size() +
         net.critic_weight.data.size() + 1 + net.log_std.size();
}

namespace {

template <typename Net, typename Fn>
void visit_params(Net& net, Fn&& fn) {
  for (auto& layer : net.gcn) {
    for (auto& v : layer.weight.data) fn(v);
    for (auto& v : layer.bias) fn(v);
  }
  for (auto& v : net.actor_weight.data) fn(v);
  for (auto& v : net.actor_bias) fn(v);
  for (auto& v : net.critic_weight.data) fn(v);
  fn(net.critic_bias);
  for (auto& v : net.log_std) fn(v);
}

}  // namespace

std::vector<double> flatten_params(const PolicyNet& net) {
  std::vector<double> flat;
  flat.reserve(param_count(net));
  visit_params(net, [&](const double& v) { flat.push_back(v); });
  return flat;
}

void unflatten_params(PolicyNet& net, std::span<const double> flat) {
  if (flat.size() != param_count(net)) {
    throw std::invalid_argument("unflatten_params: size mismatch");
  }
  std::size_t k = 0;
  visit_params(net, [&](double& v) { v = flat[k++]; });
}

DenseMatrix gcn_forward(const GcnLayer& layer, const DenseMatrix& node_features,
                        std::span<const std::pair<int, int>> edges) {
  const auto nb = adjacency(node_features.rows, edges);
  DenseMatrix z = matmul(aggregate(node_features, nb), layer.weight);
  for (std::size_t i = 0; i < z.rows; ++i) {
    for (std::size_t c = 0; c < z.cols; ++c) {
      z.at(i, c) = activate(z.at(i, c) + layer.bias[c], layer.activation);
    }
  }
  return z;
}

PolicyOutput policy_forward(const PolicyNet& net, const StateGraph& graph, ForwardCache* cache) {
  const std::size_t n = graph.num_nodes();
  if (n == 0) throw std::invalid_argument("policy_forward: empty graph");

  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c = ForwardCache{};
  c.graph = &graph;
  c.neighbors = adjacency(n, graph.edges);

  DenseMatrix x(n, static_cast<std::size_t>(net.cfg.in_dim));
  for (std::size_t i = 0; i < n; ++i) {
    if (graph.node_features[i].size() != static_cast<std::size_t>(net.cfg.in_dim)) {
      throw std::invalid_argument("policy_forward: node feature width mismatch");
    }
    for (std::size_t f = 0; f < x.cols; ++f) x.at(i, f) = graph.node_features[i][f];
  }

  for (const auto& layer : net.gcn) {
    c.layer_input.push_back(x);
    DenseMatrix ax = aggregate(x, c.neighbors);
    c.layer_aggregated.push_back(ax);
    DenseMatrix h = matmul(ax, layer.weight);
    for (std::size_t i = 0; i < h.rows; ++i) {
      for (std::size_t j = 0; j < h.cols; ++j) {
        h.at(i, j) = activate(h.at(i, j) + layer.bias[j], layer.activation);
      }
    }
    c.layer_output.push_back(h);
    x = c.layer_output.back();
  }

  c.pooled.assign(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) c.pooled[j] += x.at(i, j);
  }
  for (auto& v : c.pooled) v /= static_cast<double>(x.rows);

  c.head_input = c.pooled;
  if (net.cfg.budget_feature) c.head_input.push_back(graph.budget_feature);

  c.action_mean.assign(static_cast<std::size_t>(net.cfg.action_dim), 0.0);
  for (std::size_t j = 0; j < c.action_mean.size(); ++j) {
    double s = net.actor_bias[j];
    for (std::size_t i = 0; i < c.head_input.size(); ++i) {
      s += c.head_input[i] * net.actor_weight.at(i, j);
    }
    c.action_mean[j] = std::tanh(s);
  }
  c.value = net.critic_bias;
  for (std::size_t i = 0; i < c.head_input.size(); ++i) {
    c.value += c.head_input[i] * net.critic_weight.at(i, 0);
  }
  c.net_stamp = stamp_of(net);
  return {c.action_mean, c.value};
}

void policy_backward(const PolicyNet& net, const ForwardCache& cache,
                     std::span<const double> grad_action_mean, double grad_value,
                     PolicyNet& grads) {
  if (cache.graph == nullptr || cache.layer_output.empty()) {
    throw std::invalid_argument("policy_backward: cache not produced by a forward pass");
  }
  if (cache.net_stamp != 0 && cache.net_stamp != stamp_of(net)) {
    throw std::invalid_argument("policy_backward: stale cache (parameters changed)");
  }
  if (grad_action_mean.size() != cache.action_mean.size()) {
    throw std::invalid_argument("policy_backward: action gradient size mismatch");
  }

  const std::size_t head_in = cache.head_input.size();
  std::vector<double> d_head(head_in, 0.0);

  for (std::size_t j = 0; j < cache.action_mean.size(); ++j) {
    const double a = cache.action_mean[j];
    const double ds = grad_action_mean[j] * (1.0 - a * a);
    grads.actor_bias[j] += ds;
    for (std::size_t i = 0; i < head_in; ++i) {
      grads.actor_weight.at(i, j) += cache.head_input[i] * ds;
      d_head[i] += net.actor_weight.at(i, j) * ds;
    }
  }
  grads.critic_bias += grad_value;
  for (std::size_t i = 0; i < head_in; ++i) {
    grads.critic_weight.at(i, 0) += cache.head_input[i] * grad_value;
    d_head[i] += net.critic_weight.at(i, 0) * grad_value;
  }

  // Mean pooling spreads the pooled gradient evenly over nodes; the budget
  // slot carries no parameters.
  const DenseMatrix& last = cache.layer_output.back();
  DenseMatrix d_out(last.rows, last.cols);
  for (std::size_t i = 0; i < last.rows; ++i) {
    for (std::size_t j = 0; j < last.cols; ++j) {
      d_out.at(i, j) = d_head[j] / static_cast<double>(last.rows);
    }
  }

  for (std::size_t li = net.gcn.size(); li-- > 0;) {
    const GcnLayer& layer = net.gcn[li];
    GcnLayer& lgrads = grads.gcn[li];
    const DenseMatrix& h = cache.layer_output[li];
    const DenseMatrix& ax = cache.layer_aggregated[li];

    DenseMatrix dz(h.rows, h.cols);
    for (std::size_t i = 0; i < h.rows; ++i) {
      for (std::size_t j = 0; j < h.cols; ++j) {
        dz.at(i, j) = d_out.at(i, j) * activate_grad(h.at(i, j), layer.activation);
        lgrads.bias[j] += dz.at(i, j);
      }
    }
    // dW = (AX)^T dZ
    for (std::size_t i = 0; i < ax.rows; ++i) {
      for (std::size_t k = 0; k < ax.cols; ++k) {
        const double a = ax.at(i, k);
        if (a == 0.0) continue;
        for (std::size_t j = 0; j < dz.cols; ++j) {
          lgrads.weight.at(k, j) += a * dz.at(i, j);
        }
      }
    }
    if (li == 0) break;
    // dX = \hat{A} (dZ W^T)
    DenseMatrix dzwt(dz.rows, layer.weight.rows);
    for (std::size_t i = 0; i < dz.rows; ++i) {
      for (std::size_t j = 0; j < dz.cols; ++j) {
        const double d = dz.at(i, j);
        if (d == 0.0) continue;
        for (std::size_t k = 0; k < layer.weight.rows; ++k) {
          dzwt.at(i, k) += d * layer.weight.at(k, j);
        }
      }
    }
    d_out = aggregate(dzwt, cache.neighbors);
  }
}

void adam_step(PolicyNet& net, const PolicyNet& grads, AdamState& state, double lr,
               double beta1, double beta2, double eps) {
  std::vector<double> p = flatten_params(net);
  const std::vector<double> g = flatten_params(grads);
  if (state.m.empty()) {
    state.m.assign(p.size(), 0.0);
    state.v.assign(p.size(), 0.0);
  }
  if (state.m.size() != p.size()) {
    throw std::invalid_argument("adam_step: state size mismatch");
  }
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < p.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
  unflatten_params(net, p);
  for (auto& v : net.log_std) v = std::clamp(v, kLogStdMin, kLogStdMax);
}

}  // namespace gsmodac
