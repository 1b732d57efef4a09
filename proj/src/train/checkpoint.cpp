#include "mpg/train/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpg::train {

namespace {

const char* activation_name(nn::Activation a) {
  switch (a) {
    case nn::Activation::kTanh:
      return "tanh";
    case nn::Activation::kSelu:
      return "selu";
    case nn::Activation::kIdentity:
      return "identity";
  }
  return "tanh";
}

nn::Activation parse_activation(const std::string& name) {
  if (name == "tanh") return nn::Activation::kTanh;
  if (name == "selu") return nn::Activation::kSelu;
  if (name == "identity") return nn::Activation::kIdentity;
  throw std::runtime_error("checkpoint: unknown activation " + name);
}

void write_net(std::ostream& out, const char* label, const nn::MlpSpec& spec,
               const nn::FlatParams& params) {
  out << '[' << label << "]\n";
  out << "widths";
  for (int w : spec.layer_widths) out << ' ' << w;
  out << '\n';
  out << "activation " << activation_name(spec.activation) << '\n';
  out << "seed " << spec.seed << '\n';
  out << "params " << params.values.size() << '\n';
  char buf[48];
  for (double v : params.values) {
    std::snprintf(buf, sizeof(buf), "%a", v);
    out << buf << '\n';
  }
}

void read_net(std::istream& in, const std::string& label, nn::MlpSpec& spec,
              nn::FlatParams& params) {
  std::string line;
  if (!std::getline(in, line) || line != "[" + label + "]") {
    throw std::runtime_error("checkpoint: expected [" + label + "] section");
  }
  if (!std::getline(in, line) || line.rfind("widths", 0) != 0) {
    throw std::runtime_error("checkpoint: expected widths");
  }
  {
    std::istringstream ss(line.substr(6));
    spec.layer_widths.clear();
    int w;
    while (ss >> w) spec.layer_widths.push_back(w);
  }
  std::string word;
  if (!std::getline(in, line) || line.rfind("activation ", 0) != 0) {
    throw std::runtime_error("checkpoint: expected activation");
  }
  spec.activation = parse_activation(line.substr(11));
  if (!std::getline(in, line) || line.rfind("seed ", 0) != 0) {
    throw std::runtime_error("checkpoint: expected seed");
  }
  spec.seed = std::stoull(line.substr(5));
  if (!std::getline(in, line) || line.rfind("params ", 0) != 0) {
    throw std::runtime_error("checkpoint: expected params count");
  }
  const size_t count = std::stoul(line.substr(7));
  params = nn::zero_params(spec);
  if (params.values.size() != count) {
    throw std::runtime_error("checkpoint: parameter count does not match spec");
  }
  for (size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("checkpoint: truncated parameter block");
    }
    params.values[i] = std::strtod(line.c_str(), nullptr);
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  out << "mpg-checkpoint v1\n";
  out << "estimator " << estimator_name(checkpoint.estimator) << '\n';
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", checkpoint.sigma);
  out << "sigma " << buf << '\n';
  write_net(out, "actor", checkpoint.actor_spec, checkpoint.actor_params);
  write_net(out, "critic", checkpoint.critic_spec, checkpoint.critic_params);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "mpg-checkpoint v1") {
    throw std::runtime_error("checkpoint: bad header in " + path);
  }
  Checkpoint ck;
  if (!std::getline(in, line) || line.rfind("estimator ", 0) != 0) {
    throw std::runtime_error("checkpoint: expected estimator");
  }
  const auto kind = parse_estimator(line.substr(10));
  if (!kind) throw std::runtime_error("checkpoint: unknown estimator");
  ck.estimator = *kind;
  if (!std::getline(in, line) || line.rfind("sigma ", 0) != 0) {
    throw std::runtime_error("checkpoint: expected sigma");
  }
  ck.sigma = std::strtod(line.c_str() + 6, nullptr);
  read_net(in, "actor", ck.actor_spec, ck.actor_params);
  read_net(in, "critic", ck.critic_spec, ck.critic_params);
  return ck;
}

}  // namespace mpg::train
