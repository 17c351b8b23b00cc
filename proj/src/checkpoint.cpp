#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gsmodac/neural.hpp"

namespace gsmodac {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json matrix_to_json(const DenseMatrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

DenseMatrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  DenseMatrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.rows != rows || m.cols != cols || m.data.size() != rows * cols) {
    throw std::invalid_argument("checkpoint: parameter shape mismatch");
  }
  return m;
}

json policy_to_json(const PolicyNet& net) {
  json arch{{"in_dim", net.cfg.in_dim},
            {"hidden", net.cfg.hidden},
            {"gcn_layers", net.cfg.gcn_layers},
            {"budget_feature", net.cfg.budget_feature},
            {"action_dim", net.cfg.action_dim},
            {"activation", "tanh"}};
  json layers = json::array();
  for (const auto& layer : net.gcn) {
    layers.push_back(json{{"weight", matrix_to_json(layer.weight)}, {"bias", layer.bias}});
  }
  json params{{"gcn", std::move(layers)},
              {"actor_weight", matrix_to_json(net.actor_weight)},
              {"actor_bias", net.actor_bias},
              {"critic_weight", matrix_to_json(net.critic_weight)},
              {"critic_bias", net.critic_bias},
              {"log_std", net.log_std}};
  return json{{"format_version", kFormatVersion}, {"arch", std::move(arch)},
              {"params", std::move(params)}};
}

PolicyNet policy_from_json(const json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw std::invalid_argument("checkpoint: unsupported format version " +
                                std::to_string(version));
  }
  const json& arch = j.at("arch");
  PolicyConfig cfg;
  cfg.in_dim = arch.at("in_dim").get<int>();
  cfg.hidden = arch.at("hidden").get<int>();
  cfg.gcn_layers = arch.at("gcn_layers").get<int>();
  cfg.budget_feature = arch.at("budget_feature").get<bool>();
  cfg.action_dim = arch.at("action_dim").get<int>();

  PolicyNet net = make_policy(cfg, 0);
  const json& params = j.at("params");
  const json& layers = params.at("gcn");
  if (layers.size() != net.gcn.size()) {
    throw std::invalid_argument("checkpoint: gcn layer count mismatch");
  }
  for (std::size_t l = 0; l < net.gcn.size(); ++l) {
    net.gcn[l].weight = matrix_from_json(layers[l].at("weight"), net.gcn[l].weight.rows,
                                         net.gcn[l].weight.cols);
    auto bias = layers[l].at("bias").get<std::vector<double>>();
    if (bias.size() != net.gcn[l].bias.size()) {
      throw std::invalid_argument("checkpoint: parameter shape mismatch");
    }
    net.gcn[l].bias = std::move(bias);
  }
  net.actor_weight = matrix_from_json(params.at("actor_weight"), net.actor_weight.rows,
                                      net.actor_weight.cols);
  net.actor_bias = params.at("actor_bias").get<std::vector<double>>();
  net.critic_weight = matrix_from_json(params.at("critic_weight"), net.critic_weight.rows,
                                       net.critic_weight.cols);
  net.critic_bias = params.at("critic_bias").get<double>();
  net.log_std = params.at("log_std").get<std::vector<double>>();
  if (net.actor_bias.size() != static_cast<std::size_t>(cfg.action_dim) ||
      net.log_std.size() != static_cast<std::size_t>(cfg.action_dim)) {
    throw std::invalid_argument("checkpoint: parameter shape mismatch");
  }
  return net;
}

}  // namespace

std::string policy_to_json_text(const PolicyNet& net) { return policy_to_json(net).dump(); }

PolicyNet policy_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("checkpoint parse error: ") + e.what());
  }
  // Trainer checkpoints wrap the policy block next to optimizer state.
  if (j.contains("policy")) return policy_from_json(j.at("policy"));
  return policy_from_json(j);
}

void save_checkpoint(const PolicyNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out << policy_to_json_text(net) << "\n";
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

PolicyNet load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return policy_from_json_text(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace gsmodac
