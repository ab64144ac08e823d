#ifndef MECSIM_DNN_HPP_
#define MECSIM_DNN_HPP_

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mecsim/types.hpp"

namespace mecsim {

// One layer of the inference network, enough to count multiply-accumulates.
// Axes are ordered (t, h, w); the temporal axis carries the frame count M.
struct LayerSpec {
  enum class Kind {
    Conv2dPerFrame,  // 2D convolution applied to each frame independently
    Conv3d,          // 3D convolution across frames
    Pool,            // pooling window, no MACs
    Fc               // fully connected, applied per remaining temporal slice
  };

  Kind kind = Kind::Conv2dPerFrame;
  int channels_in = 1;
  int channels_out = 1;
  std::array<int, 3> kernel = {1, 1, 1};   // (k_t, k_h, k_w)
  std::array<int, 3> stride = {1, 1, 1};   // (s_t, s_h, s_w)
  std::array<int, 3> padding = {0, 0, 0};  // (p_t, p_h, p_w)
};

// Tensor extent while propagating shapes through a layer stack.
struct TensorShape {
  long long t = 1;  // temporal extent (frames)
  long long h = 1;
  long long w = 1;
  long long c = 1;  // channels
};

// Computational complexity C(M): MACs required for inference on M frames.
//
// LAYERED derives the count from a layer stack by shape propagation,
// TABULAR looks values up, AFFINE evaluates c0 + c1*M (the continuous
// surrogate used inside solvers). All variants are positive and
// nondecreasing in M; TABULAR and AFFINE validate this at construction,
// LAYERED on demand via validate_range().
class ComplexityModel {
 public:
  enum class Variant { Layered, Tabular, Affine };

  static ComplexityModel layered(std::vector<LayerSpec> layers, int input_h,
                                 int input_w, int input_channels);
  static ComplexityModel tabular(std::map<int, double> macs_by_m);
  static ComplexityModel affine(double c0, double c1);

  Variant variant() const { return variant_; }

  // MAC count for M frames. Throws std::domain_error when M is out of range
  // (M < 1, beyond the table, or a layer collapses to an empty output).
  double macs(int frames) const;

  // Checks positivity and monotonicity of C over 1..m_max; throws ConfigError
  // with the offending M on failure.
  void validate_range(int m_max) const;

  // AFFINE coefficient accessors; throw std::logic_error on other variants.
  double affine_c0() const;
  double affine_c1() const;

  const std::vector<LayerSpec>& layers() const { return layers_; }

 private:
  ComplexityModel() = default;

  Variant variant_ = Variant::Affine;
  std::vector<LayerSpec> layers_;
  TensorShape input_;  // LAYERED input extent; t is replaced by M per query
  std::map<int, double> table_;
  double c0_ = 0.0;
  double c1_ = 0.0;
};

// Inference accuracy Phi(M): monotone non-decreasing in the frame count,
// with values in [0, 1]. SATURATING is a - b*exp(-c*M).
class AccuracyModel {
 public:
  enum class Variant { Tabular, Saturating };

  static AccuracyModel tabular(std::map<int, double> accuracy_by_m);
  static AccuracyModel saturating(double a, double b, double c);

  Variant variant() const { return variant_; }

  // Phi(M). TABULAR throws std::domain_error outside the table domain.
  double accuracy(int frames) const;

  // Largest M the model can be queried at; INT_MAX for SATURATING.
  int max_queryable_m() const;

  double sat_a() const { return a_; }
  double sat_b() const { return b_; }
  double sat_c() const { return c_; }

 private:
  AccuracyModel() = default;

  Variant variant_ = Variant::Saturating;
  std::map<int, double> table_;
  double a_ = 0.0, b_ = 0.0, c_ = 0.0;
};

// Complexity and accuracy models bundled; in this system every device runs
// the same network, so one bundle serves the whole scenario. Default-
// constructed, it holds the shipped bundle: the built-in per-frame network
// and the saturating accuracy curve 0.95 - 0.5*exp(-0.4*M).
struct Models {
  Models();
  Models(ComplexityModel complexity_model, AccuracyModel accuracy_model);

  ComplexityModel complexity;
  AccuracyModel accuracy;
};

// Smallest M in [1, m_max] with Phi(M) >= alpha. Throws
// InfeasibleAccuracyError when even m_max frames fall short, and
// std::domain_error for alpha outside [0, 1].
int min_frames(const AccuracyModel& acc, double alpha, int m_max);

// Least-squares affine fit of C(M) over integer M in [m_lo, m_hi]
// (at least two points). The result is returned as an AFFINE model, so it
// passes the usual construction checks.
ComplexityModel fit_affine(const ComplexityModel& model, int m_lo, int m_hi);

// Built-in ResNet-18-style per-frame stack at 112x112x3 input.
std::vector<LayerSpec> resnet18_112_layers(int num_classes = 27);

}  // namespace mecsim

#endif  // MECSIM_DNN_HPP_
