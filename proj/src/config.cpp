#include "mecsim/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

namespace mecsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

// View over one JSON object that resolves fields with defaults, remembers
// which keys were read, and reports unknown keys (usually typos) afterwards.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      fail(path_, "expected an object");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    touch(key);
    return j_.at(key);
  }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    return v.get<double>();
  }

  int integer(const char* key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(field(key), "expected an integer");
    return v.get<int>();
  }

  std::uint64_t u64(const char* key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(field(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string str(const char* key, std::string fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::string field(const char* key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }

  // Call last: every key not consumed by a getter is unknown.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const std::string& k : seen_) {
        if (k == it.key()) {
          known = true;
          break;
        }
      }
      if (!known) {
        fail(field(it.key().c_str()), "unknown field");
      }
    }
  }

 private:
  void touch(const char* key) { seen_.emplace_back(key); }

  const json& j_;
  std::string path_;
  mutable std::vector<std::string> seen_;
};

std::array<int, 3> parse_triple(const json& v, const std::string& path,
                                std::array<int, 3> fallback) {
  if (v.is_null()) return fallback;
  if (v.is_number_integer()) {
    int s = v.get<int>();
    return {s, s, s};
  }
  if (!v.is_array() || v.size() != 3) {
    fail(path, "expected an integer or an array of 3 integers (t, h, w)");
  }
  std::array<int, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer()) {
      fail(path, "expected an integer or an array of 3 integers (t, h, w)");
    }
    out[i] = v[i].get<int>();
  }
  return out;
}

LayerSpec parse_layer(const json& j, const std::string& path) {
  Section s(j, path);
  std::string kind = s.str("kind", "");
  LayerSpec layer;
  if (kind == "conv2d") {
    layer.kind = LayerSpec::Kind::Conv2dPerFrame;
  } else if (kind == "conv3d") {
    layer.kind = LayerSpec::Kind::Conv3d;
  } else if (kind == "pool") {
    layer.kind = LayerSpec::Kind::Pool;
  } else if (kind == "fc") {
    layer.kind = LayerSpec::Kind::Fc;
  } else {
    fail(s.field("kind"), "expected conv2d, conv3d, pool, or fc");
  }
  layer.channels_in = s.integer("channels_in", 1);
  layer.channels_out = s.integer("channels_out", 1);
  layer.kernel = parse_triple(s.has("kernel") ? s.raw("kernel") : json(),
                              s.field("kernel"), {1, 1, 1});
  layer.stride = parse_triple(s.has("stride") ? s.raw("stride") : json(),
                              s.field("stride"), {1, 1, 1});
  layer.padding = parse_triple(s.has("padding") ? s.raw("padding") : json(),
                               s.field("padding"), {0, 0, 0});
  s.finish();
  return layer;
}

ComplexityModel parse_complexity(const json& j, const std::string& path) {
  Section s(j, path);
  std::string type = s.str("type", "resnet18");
  if (type == "resnet18") {
    int num_classes = s.integer("num_classes", 27);
    s.finish();
    return ComplexityModel::layered(resnet18_112_layers(num_classes), 112, 112,
                                    3);
  }
  if (type == "layered") {
    if (!s.has("layers")) fail(s.field("layers"), "required for type layered");
    const json& arr = s.raw("layers");
    if (!arr.is_array() || arr.empty()) {
      fail(s.field("layers"), "expected a non-empty array");
    }
    std::vector<LayerSpec> layers;
    layers.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      layers.push_back(
          parse_layer(arr[i], s.field("layers") + "[" + std::to_string(i) + "]"));
    }
    int h = s.integer("input_height", 112);
    int w = s.integer("input_width", 112);
    int c = s.integer("input_channels", 3);
    s.finish();
    return ComplexityModel::layered(std::move(layers), h, w, c);
  }
  if (type == "tabular") {
    if (!s.has("macs")) fail(s.field("macs"), "required for type tabular");
    const json& arr = s.raw("macs");
    if (!arr.is_array() || arr.empty()) {
      fail(s.field("macs"), "expected a non-empty array (index i holds C(i+1))");
    }
    std::map<int, double> table;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) fail(s.field("macs"), "expected numbers");
      table[static_cast<int>(i) + 1] = arr[i].get<double>();
    }
    s.finish();
    return ComplexityModel::tabular(std::move(table));
  }
  if (type == "affine") {
    double c0 = s.number("c0", 0.0);
    double c1 = s.number("c1", 0.0);
    s.finish();
    return ComplexityModel::affine(c0, c1);
  }
  fail(s.field("type"), "expected resnet18, layered, tabular, or affine");
}

AccuracyModel parse_accuracy(const json& j, const std::string& path) {
  Section s(j, path);
  std::string type = s.str("type", "saturating");
  if (type == "saturating") {
    double a = s.number("a", 0.95);
    double b = s.number("b", 0.5);
    double c = s.number("c", 0.4);
    s.finish();
    return AccuracyModel::saturating(a, b, c);
  }
  if (type == "tabular") {
    if (!s.has("accuracy")) {
      fail(s.field("accuracy"), "required for type tabular");
    }
    const json& arr = s.raw("accuracy");
    if (!arr.is_array() || arr.empty()) {
      fail(s.field("accuracy"),
           "expected a non-empty array (index i holds Phi(i+1))");
    }
    std::map<int, double> table;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) fail(s.field("accuracy"), "expected numbers");
      table[static_cast<int>(i) + 1] = arr[i].get<double>();
    }
    s.finish();
    return AccuracyModel::tabular(std::move(table));
  }
  fail(s.field("type"), "expected saturating or tabular");
}

}  // namespace

Config Config::defaults() {
  // Every member already defaults to the shipped simulation settings,
  // including the model bundle.
  return Config{};
}

Config parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config: top level must be an object");
  }

  Config cfg = Config::defaults();
  Section top(root, "$");

  if (top.has("system")) {
    Section s(top.raw("system"), "system");
    SystemConfig& sys = cfg.system;
    sys.bandwidth_hz = s.number("bandwidth_hz", sys.bandwidth_hz);
    sys.noise_psd_dbm_per_hz =
        s.number("noise_psd_dbm_per_hz", sys.noise_psd_dbm_per_hz);
    sys.f_edge_max_hz = s.number("f_edge_max_hz", sys.f_edge_max_hz);
    sys.rho_cycles_per_mac =
        s.number("rho_cycles_per_mac", sys.rho_cycles_per_mac);
    sys.kappa = s.number("kappa", sys.kappa);
    sys.beta1 = s.number("beta1", sys.beta1);
    sys.beta2 = s.number("beta2", sys.beta2);
    sys.area_m = s.number("area_m", sys.area_m);
    s.finish();
  }
  if (top.has("channel")) {
    Section s(top.raw("channel"), "channel");
    cfg.pathloss_intercept_db =
        s.number("pathloss_intercept_db", cfg.pathloss_intercept_db);
    cfg.pathloss_slope = s.number("pathloss_slope", cfg.pathloss_slope);
    s.finish();
  }
  if (top.has("device")) {
    Section s(top.raw("device"), "device");
    DeviceDefaults& dev = cfg.device;
    dev.tx_power_w = s.number("tx_power_w", dev.tx_power_w);
    dev.f_local_max_hz = s.number("f_local_max_hz", dev.f_local_max_hz);
    dev.accuracy_req = s.number("accuracy_req", dev.accuracy_req);
    dev.m_max = s.integer("m_max", dev.m_max);
    dev.frame_width = s.integer("frame_width", dev.frame_width);
    dev.frame_height = s.integer("frame_height", dev.frame_height);
    dev.bytes_per_pixel = s.integer("bytes_per_pixel", dev.bytes_per_pixel);
    dev.compression_factor =
        s.number("compression_factor", dev.compression_factor);
    s.finish();
  }
  if (top.has("models")) {
    Section s(top.raw("models"), "models");
    if (s.has("complexity")) {
      cfg.models.complexity =
          parse_complexity(s.raw("complexity"), "models.complexity");
    }
    if (s.has("accuracy")) {
      cfg.models.accuracy =
          parse_accuracy(s.raw("accuracy"), "models.accuracy");
    }
    s.finish();
  }
  if (top.has("experiment")) {
    Section s(top.raw("experiment"), "experiment");
    ExperimentParams& exp = cfg.experiment;
    exp.n_devices = s.integer("n_devices", exp.n_devices);
    exp.trials = s.integer("trials", exp.trials);
    exp.seed = s.u64("seed", exp.seed);
    exp.threads = s.integer("threads", exp.threads);
    exp.enum_cap = s.integer("enum_cap", exp.enum_cap);
    exp.random_offload_prob =
        s.number("random_offload_prob", exp.random_offload_prob);
    exp.min_distance_m = s.number("min_distance_m", exp.min_distance_m);
    std::string policy = s.str("on_infeasible", "fail");
    if (policy == "fail") {
      exp.on_infeasible = ExperimentParams::InfeasiblePolicy::Fail;
    } else if (policy == "regenerate") {
      exp.on_infeasible = ExperimentParams::InfeasiblePolicy::Regenerate;
    } else {
      fail("experiment.on_infeasible", "expected fail or regenerate");
    }
    s.finish();
  }
  top.finish();

  validate_config(cfg);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("config: cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw std::runtime_error("config: read failure: " + path);
  }
  return parse_config(buf.str());
}

void validate_config(const Config& cfg) {
  const SystemConfig& sys = cfg.system;
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(name, "must be a positive finite number");
    }
  };
  positive(sys.bandwidth_hz, "system.bandwidth_hz");
  positive(sys.f_edge_max_hz, "system.f_edge_max_hz");
  positive(sys.rho_cycles_per_mac, "system.rho_cycles_per_mac");
  positive(sys.kappa, "system.kappa");
  positive(sys.area_m, "system.area_m");
  if (!std::isfinite(sys.noise_psd_dbm_per_hz)) {
    fail("system.noise_psd_dbm_per_hz", "must be finite");
  }
  if (sys.beta1 < 0.0 || sys.beta2 < 0.0) {
    fail("system.beta1/beta2", "weights must be nonnegative");
  }
  if (std::abs(sys.beta1 + sys.beta2 - 1.0) > 1e-12) {
    fail("system.beta1/beta2", "weights must sum to 1");
  }
  if (!std::isfinite(cfg.pathloss_intercept_db)) {
    fail("channel.pathloss_intercept_db", "must be finite");
  }
  if (!(cfg.pathloss_slope > 0.0) || !std::isfinite(cfg.pathloss_slope)) {
    fail("channel.pathloss_slope", "must be a positive finite number");
  }

  const DeviceDefaults& dev = cfg.device;
  positive(dev.tx_power_w, "device.tx_power_w");
  positive(dev.f_local_max_hz, "device.f_local_max_hz");
  if (dev.accuracy_req < 0.0 || dev.accuracy_req > 1.0) {
    fail("device.accuracy_req", "must lie in [0, 1]");
  }
  if (dev.m_max < 1) {
    fail("device.m_max", "must be at least 1");
  }
  if (dev.frame_width < 1 || dev.frame_height < 1 || dev.bytes_per_pixel < 1) {
    fail("device.frame_width/height/bytes_per_pixel", "must be at least 1");
  }
  if (!(dev.compression_factor > 0.0) || dev.compression_factor > 1.0) {
    fail("device.compression_factor", "must lie in (0, 1]");
  }

  const ExperimentParams& exp = cfg.experiment;
  if (exp.n_devices < 0) fail("experiment.n_devices", "must be nonnegative");
  if (exp.trials < 0) fail("experiment.trials", "must be nonnegative");
  if (exp.threads < 0) fail("experiment.threads", "must be nonnegative");
  if (exp.enum_cap < 0 || exp.enum_cap > 30) {
    fail("experiment.enum_cap", "must lie in [0, 30]");
  }
  if (exp.random_offload_prob < 0.0 || exp.random_offload_prob > 1.0) {
    fail("experiment.random_offload_prob", "must lie in [0, 1]");
  }
  positive(exp.min_distance_m, "experiment.min_distance_m");

  // Model sanity over the queried range, then feasibility of the accuracy
  // requirement itself; the latter throws InfeasibleAccuracyError.
  cfg.models.complexity.validate_range(dev.m_max);
  if (cfg.models.accuracy.variant() == AccuracyModel::Variant::Tabular &&
      cfg.models.accuracy.max_queryable_m() < dev.m_max) {
    fail("models.accuracy.accuracy",
         "table covers fewer frames than device.m_max");
  }
  min_frames(cfg.models.accuracy, dev.accuracy_req, dev.m_max);
}

}  // namespace mecsim
