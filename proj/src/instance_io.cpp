#include "gsmodac/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gsmodac {

using nlohmann::json;

std::optional<InstanceMeta> Instance::meta_for(ObjectiveSet set) const {
  const auto it = meta.find(to_string(set));
  if (it == meta.end()) return std::nullopt;
  return it->second;
}

namespace {

json meta_to_json(const InstanceMeta& m) {
  return json{{"reference_point", m.reference_point},
              {"ideal_point", m.ideal_point},
              {"source_seed", m.source_seed},
              {"algorithm", m.algorithm}};
}

InstanceMeta meta_from_json(const json& j) {
  InstanceMeta m;
  m.reference_point = j.at("reference_point").get<ObjectiveVector>();
  m.ideal_point = j.at("ideal_point").get<ObjectiveVector>();
  m.source_seed = j.at("source_seed").get<std::uint64_t>();
  m.algorithm = j.value("algorithm", std::string{});
  if (m.reference_point.size() != m.ideal_point.size()) {
    throw std::invalid_argument("instance meta: reference/ideal dimension mismatch");
  }
  for (std::size_t i = 0; i < m.reference_point.size(); ++i) {
    if (m.ideal_point[i] > m.reference_point[i]) {
      throw std::invalid_argument("instance meta: ideal point exceeds reference point");
    }
  }
  return m;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["kind"] = inst.kind;
  j["seed"] = inst.seed;
  if (inst.is_fjsp()) {
    const FjspInstance& f = inst.fjsp();
    json ops = json::array();
    for (const auto& job : f.options) {
      json jops = json::array();
      for (const auto& op : job) {
        json alts = json::array();
        for (const auto& alt : op) alts.push_back(json::array({alt.machine, alt.time}));
        jops.push_back(std::move(alts));
      }
      ops.push_back(std::move(jops));
    }
    j["data"] = json{{"num_jobs", f.num_jobs}, {"num_machines", f.num_machines}, {"ops", std::move(ops)}};
  } else {
    const CvrpInstance& c = inst.cvrp();
    json customers = json::array();
    for (std::size_t i = 0; i < c.coords.size(); ++i) {
      customers.push_back(json::array({c.coords[i].x, c.coords[i].y, c.demands[i]}));
    }
    j["data"] = json{{"depot", json::array({c.depot.x, c.depot.y})},
                     {"customers", std::move(customers)},
                     {"capacity", c.capacity}};
  }
  if (!inst.meta.empty()) {
    json meta;
    for (const auto& [key, m] : inst.meta) meta[key] = meta_to_json(m);
    j["meta"] = std::move(meta);
  }
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance parse error: ") + e.what());
  }
  Instance inst;
  inst.kind = j.at("kind").get<std::string>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  const json& data = j.at("data");
  if (inst.kind == "fjsp") {
    FjspInstance f;
    f.num_jobs = data.at("num_jobs").get<int>();
    f.num_machines = data.at("num_machines").get<int>();
    for (const auto& job : data.at("ops")) {
      std::vector<std::vector<MachineOption>> jops;
      for (const auto& op : job) {
        std::vector<MachineOption> alts;
        for (const auto& alt : op) {
          alts.push_back({alt.at(0).get<int>(), alt.at(1).get<int>()});
        }
        jops.push_back(std::move(alts));
      }
      f.options.push_back(std::move(jops));
    }
    f.validate();
    inst.data = std::move(f);
  } else if (inst.kind == "cvrp") {
    CvrpInstance c;
    const auto& depot = data.at("depot");
    c.depot = {depot.at(0).get<double>(), depot.at(1).get<double>()};
    for (const auto& cust : data.at("customers")) {
      c.coords.push_back({cust.at(0).get<double>(), cust.at(1).get<double>()});
      c.demands.push_back(cust.at(2).get<int>());
    }
    c.capacity = data.at("capacity").get<int>();
    c.validate();
    inst.data = std::move(c);
  } else {
    throw std::invalid_argument("instance parse error: unknown kind '" + inst.kind + "'");
  }
  if (j.contains("meta")) {
    for (const auto& [key, m] : j.at("meta").items()) {
      inst.meta[key] = meta_from_json(m);
    }
  }
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return instance_from_json(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace gsmodac
