#include "mecsim/dnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace mecsim {

namespace {

long long conv_extent(long long in, int kernel, int stride, int padding,
                      const char* axis) {
  long long padded = in + 2LL * padding;
  if (padded < kernel) {
    std::ostringstream msg;
    msg << "layer output collapses on " << axis << " axis: input " << in
        << " with padding " << padding << " is smaller than kernel " << kernel;
    throw std::domain_error(msg.str());
  }
  return (padded - kernel) / stride + 1;
}

void check_layer(const LayerSpec& layer, std::size_t index) {
  for (int i = 0; i < 3; ++i) {
    if (layer.kernel[i] < 1 || layer.stride[i] < 1 || layer.padding[i] < 0) {
      std::ostringstream msg;
      msg << "layer " << index << ": kernel/stride must be >= 1 and padding >= 0";
      throw ConfigError(msg.str());
    }
  }
  if (layer.channels_in < 1 || layer.channels_out < 1) {
    std::ostringstream msg;
    msg << "layer " << index << ": channel counts must be >= 1";
    throw ConfigError(msg.str());
  }
}

// Shape propagation with per-layer MAC accounting. Pooling contributes no
// MACs; a fully connected layer consumes the flattened spatial extent of
// each remaining temporal slice.
double layered_macs(const std::vector<LayerSpec>& layers, TensorShape shape) {
  double macs = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    switch (l.kind) {
      case LayerSpec::Kind::Conv2dPerFrame: {
        if (shape.c != l.channels_in) {
          std::ostringstream msg;
          msg << "layer " << i << ": expects " << l.channels_in
              << " input channels, got " << shape.c;
          throw std::domain_error(msg.str());
        }
        long long oh = conv_extent(shape.h, l.kernel[1], l.stride[1], l.padding[1], "h");
        long long ow = conv_extent(shape.w, l.kernel[2], l.stride[2], l.padding[2], "w");
        double out_elems = static_cast<double>(shape.t) * oh * ow * l.channels_out;
        macs += out_elems * l.kernel[1] * l.kernel[2] * l.channels_in;
        shape.h = oh;
        shape.w = ow;
        shape.c = l.channels_out;
        break;
      }
      case LayerSpec::Kind::Conv3d: {
        if (shape.c != l.channels_in) {
          std::ostringstream msg;
          msg << "layer " << i << ": expects " << l.channels_in
              << " input channels, got " << shape.c;
          throw std::domain_error(msg.str());
        }
        long long ot = conv_extent(shape.t, l.kernel[0], l.stride[0], l.padding[0], "t");
        long long oh = conv_extent(shape.h, l.kernel[1], l.stride[1], l.padding[1], "h");
        long long ow = conv_extent(shape.w, l.kernel[2], l.stride[2], l.padding[2], "w");
        double out_elems = static_cast<double>(ot) * oh * ow * l.channels_out;
        macs += out_elems * l.kernel[0] * l.kernel[1] * l.kernel[2] * l.channels_in;
        shape.t = ot;
        shape.h = oh;
        shape.w = ow;
        shape.c = l.channels_out;
        break;
      }
      case LayerSpec::Kind::Pool: {
        shape.t = conv_extent(shape.t, l.kernel[0], l.stride[0], l.padding[0], "t");
        shape.h = conv_extent(shape.h, l.kernel[1], l.stride[1], l.padding[1], "h");
        shape.w = conv_extent(shape.w, l.kernel[2], l.stride[2], l.padding[2], "w");
        break;
      }
      case LayerSpec::Kind::Fc: {
        long long flat = shape.h * shape.w * shape.c;
        if (flat != l.channels_in) {
          std::ostringstream msg;
          msg << "layer " << i << ": fc expects " << l.channels_in
              << " inputs, flattened slice has " << flat;
          throw std::domain_error(msg.str());
        }
        macs += static_cast<double>(shape.t) * l.channels_in * l.channels_out;
        shape.h = 1;
        shape.w = 1;
        shape.c = l.channels_out;
        break;
      }
    }
  }
  return macs;
}

}  // namespace

ComplexityModel ComplexityModel::layered(std::vector<LayerSpec> layers,
                                         int input_h, int input_w,
                                         int input_channels) {
  if (input_h < 1 || input_w < 1 || input_channels < 1) {
    throw ConfigError("layered model: input extents must be >= 1");
  }
  if (layers.empty()) {
    throw ConfigError("layered model: empty layer stack");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    check_layer(layers[i], i);
  }
  ComplexityModel m;
  m.variant_ = Variant::Layered;
  m.layers_ = std::move(layers);
  m.input_ = TensorShape{1, input_h, input_w, input_channels};
  // Shape consistency surfaces immediately rather than at first query.
  m.macs(1);
  return m;
}

ComplexityModel ComplexityModel::tabular(std::map<int, double> macs_by_m) {
  if (macs_by_m.empty()) {
    throw ConfigError("tabular complexity model: empty table");
  }
  int expected = 1;
  double prev = 0.0;
  for (const auto& [m, c] : macs_by_m) {
    if (m != expected) {
      throw ConfigError("tabular complexity model: keys must be contiguous from 1, missing M=" +
                        std::to_string(expected));
    }
    if (c <= 0.0) {
      throw ConfigError("tabular complexity model: C(" + std::to_string(m) +
                        ") must be positive");
    }
    if (c < prev) {
      throw ConfigError("tabular complexity model: decreasing at M=" +
                        std::to_string(m));
    }
    prev = c;
    ++expected;
  }
  ComplexityModel model;
  model.variant_ = Variant::Tabular;
  model.table_ = std::move(macs_by_m);
  return model;
}

ComplexityModel ComplexityModel::affine(double c0, double c1) {
  if (!(c1 >= 0.0)) {
    throw ConfigError("affine complexity model: slope must be >= 0");
  }
  if (!(c0 + c1 > 0.0)) {
    throw ConfigError("affine complexity model: C(1) must be positive");
  }
  ComplexityModel model;
  model.variant_ = Variant::Affine;
  model.c0_ = c0;
  model.c1_ = c1;
  return model;
}

double ComplexityModel::macs(int frames) const {
  if (frames < 1) {
    throw std::domain_error("macs: frame count must be >= 1");
  }
  switch (variant_) {
    case Variant::Layered: {
      TensorShape shape = input_;
      shape.t = frames;
      return layered_macs(layers_, shape);
    }
    case Variant::Tabular: {
      auto it = table_.find(frames);
      if (it == table_.end()) {
        throw std::domain_error("macs: M=" + std::to_string(frames) +
                                " outside the tabulated range");
      }
      return it->second;
    }
    case Variant::Affine:
      return c0_ + c1_ * frames;
  }
  return 0.0;  // unreachable
}

void ComplexityModel::validate_range(int m_max) const {
  if (m_max < 1) {
    throw ConfigError("validate_range: m_max must be >= 1");
  }
  double prev = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    double c;
    try {
      c = macs(m);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("complexity model invalid at M=") +
                        std::to_string(m) + ": " + e.what());
    }
    if (!(c > 0.0)) {
      throw ConfigError("complexity model: C(" + std::to_string(m) +
                        ") is not positive");
    }
    if (c < prev) {
      throw ConfigError("complexity model: decreasing at M=" + std::to_string(m));
    }
    prev = c;
  }
}

double ComplexityModel::affine_c0() const {
  if (variant_ != Variant::Affine) {
    throw std::logic_error("affine_c0: not an affine model");
  }
  return c0_;
}

double ComplexityModel::affine_c1() const {
  if (variant_ != Variant::Affine) {
    throw std::logic_error("affine_c1: not an affine model");
  }
  return c1_;
}

AccuracyModel AccuracyModel::tabular(std::map<int, double> accuracy_by_m) {
  if (accuracy_by_m.empty()) {
    throw ConfigError("tabular accuracy model: empty table");
  }
  int expected = 1;
  double prev = -1.0;
  for (const auto& [m, phi] : accuracy_by_m) {
    if (m != expected) {
      throw ConfigError("tabular accuracy model: keys must be contiguous from 1, missing M=" +
                        std::to_string(expected));
    }
    if (phi < 0.0 || phi > 1.0) {
      throw ConfigError("tabular accuracy model: Phi(" + std::to_string(m) +
                        ") outside [0,1]");
    }
    if (phi < prev) {
      throw ConfigError("tabular accuracy model: decreasing at M=" +
                        std::to_string(m));
    }
    prev = phi;
    ++expected;
  }
  AccuracyModel model;
  model.variant_ = Variant::Tabular;
  model.table_ = std::move(accuracy_by_m);
  return model;
}

AccuracyModel AccuracyModel::saturating(double a, double b, double c) {
  if (!(a > 0.0) || a > 1.0) {
    throw ConfigError("saturating accuracy model: a must be in (0,1]");
  }
  if (!(b > 0.0) || !(c > 0.0)) {
    throw ConfigError("saturating accuracy model: b and c must be positive");
  }
  if (a - b * std::exp(-c) < 0.0) {
    throw ConfigError("saturating accuracy model: Phi(1) below 0");
  }
  AccuracyModel model;
  model.variant_ = Variant::Saturating;
  model.a_ = a;
  model.b_ = b;
  model.c_ = c;
  return model;
}

double AccuracyModel::accuracy(int frames) const {
  if (frames < 1) {
    throw std::domain_error("accuracy: frame count must be >= 1");
  }
  if (variant_ == Variant::Tabular) {
    auto it = table_.find(frames);
    if (it == table_.end()) {
      throw std::domain_error("accuracy: M=" + std::to_string(frames) +
                              " outside the tabulated range");
    }
    return it->second;
  }
  return a_ - b_ * std::exp(-c_ * frames);
}

int AccuracyModel::max_queryable_m() const {
  if (variant_ == Variant::Tabular) {
    return table_.rbegin()->first;
  }
  return std::numeric_limits<int>::max();
}

int min_frames(const AccuracyModel& acc, double alpha, int m_max) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::domain_error("min_frames: alpha must lie in [0,1]");
  }
  if (m_max < 1) {
    throw std::domain_error("min_frames: m_max must be >= 1");
  }
  int limit = std::min(m_max, acc.max_queryable_m());
  for (int m = 1; m <= limit; ++m) {
    if (acc.accuracy(m) >= alpha) {
      return m;
    }
  }
  std::ostringstream msg;
  msg << "accuracy requirement " << alpha << " unreachable within " << m_max
      << " frames (Phi(" << limit << ") = " << acc.accuracy(limit) << ")";
  throw InfeasibleAccuracyError(msg.str());
}

ComplexityModel fit_affine(const ComplexityModel& model, int m_lo, int m_hi) {
  if (m_lo < 1 || m_hi <= m_lo) {
    throw std::invalid_argument("fit_affine: need at least two points with m_lo >= 1");
  }
  double n = static_cast<double>(m_hi - m_lo + 1);
  double sum_m = 0.0, sum_c = 0.0;
  for (int m = m_lo; m <= m_hi; ++m) {
    sum_m += m;
    sum_c += model.macs(m);
  }
  double mean_m = sum_m / n;
  double mean_c = sum_c / n;
  double sxx = 0.0, sxy = 0.0;
  for (int m = m_lo; m <= m_hi; ++m) {
    double dm = m - mean_m;
    sxx += dm * dm;
    sxy += dm * (model.macs(m) - mean_c);
  }
  double c1 = sxy / sxx;
  // Nondecreasing data can still produce a slope that is a hair negative in
  // floating point; clamp rather than reject.
  if (c1 < 0.0 && c1 > -1e-9 * std::abs(mean_c)) {
    c1 = 0.0;
  }
  double c0 = mean_c - c1 * mean_m;
  return ComplexityModel::affine(c0, c1);
}

Models::Models()
    : complexity(ComplexityModel::layered(resnet18_112_layers(), 112, 112, 3)),
      accuracy(AccuracyModel::saturating(0.95, 0.5, 0.4)) {}

Models::Models(ComplexityModel complexity_model, AccuracyModel accuracy_model)
    : complexity(std::move(complexity_model)),
      accuracy(std::move(accuracy_model)) {}

std::vector<LayerSpec> resnet18_112_layers(int num_classes) {
  using K = LayerSpec::Kind;
  std::vector<LayerSpec> layers;
  auto conv2d = [](int cin, int cout, int k, int s, int p) {
    return LayerSpec{K::Conv2dPerFrame, cin, cout, {1, k, k}, {1, s, s}, {0, p, p}};
  };
  // Stem: 7x7/2 conv then 3x3/2 max pool, 112 -> 28.
  layers.push_back(conv2d(3, 64, 7, 2, 3));
  layers.push_back(LayerSpec{K::Pool, 64, 64, {1, 3, 3}, {1, 2, 2}, {0, 1, 1}});
  // Four stages of two basic blocks each; stages 2-4 downsample with a
  // strided first conv plus a 1x1 projection shortcut.
  auto stage = [&](int cin, int cout, bool downsample) {
    int s = downsample ? 2 : 1;
    layers.push_back(conv2d(cin, cout, 3, s, 1));
    layers.push_back(conv2d(cout, cout, 3, 1, 1));
    if (downsample) {
      // Projection shortcut, counted as a 1x1 conv at the block output
      // extent. A sequential stack cannot branch, so its input channel
      // count is cout rather than cin.
      layers.push_back(conv2d(cout, cout, 1, 1, 0));
    }
    layers.push_back(conv2d(cout, cout, 3, 1, 1));
    layers.push_back(conv2d(cout, cout, 3, 1, 1));
  };
  stage(64, 64, false);
  stage(64, 128, true);
  stage(128, 256, true);
  stage(256, 512, true);
  // Global average pool to 1x1, then classifier.
  layers.push_back(LayerSpec{K::Pool, 512, 512, {1, 4, 4}, {1, 4, 4}, {0, 0, 0}});
  layers.push_back(LayerSpec{K::Fc, 512, num_classes, {1, 1, 1}, {1, 1, 1}, {0, 0, 0}});
  return layers;
}

}  // namespace mecsim
