#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "mac_oracle.hpp"
#include "mecsim/dnn.hpp"

using namespace mecsim;
using mac_oracle::oracle_macs;
using mac_oracle::random_stack;

TEST_CASE("layered counts match the placement-enumeration oracle") {
  std::mt19937 rng(20240811);
  for (int rep = 0; rep < 50; ++rep) {
    TensorShape input;
    std::vector<LayerSpec> layers = random_stack(rng, input);
    ComplexityModel model = ComplexityModel::layered(
        layers, static_cast<int>(input.h), static_cast<int>(input.w),
        static_cast<int>(input.c));
    for (int m = 1; m <= 8; ++m) {
      TensorShape shape = input;
      shape.t = m;
      long long expected = oracle_macs(layers, shape);
      CHECK(model.macs(m) == static_cast<double>(expected));
      if (m > 1) {
        CHECK(model.macs(m) >= model.macs(m - 1));  // more frames, more work
      }
    }
  }
}

TEST_CASE("hand-checked conv layer") {
  // 2D conv on 6x6x2, kernel 3x3, stride 1, padding 0 -> 4x4 output of 5
  // channels; per frame 4*4*5*3*3*2 = 1440 MACs.
  LayerSpec l;
  l.kind = LayerSpec::Kind::Conv2dPerFrame;
  l.channels_in = 2;
  l.channels_out = 5;
  l.kernel = {1, 3, 3};
  ComplexityModel model = ComplexityModel::layered({l}, 6, 6, 2);
  CHECK(model.macs(1) == 1440.0);
  CHECK(model.macs(3) == 3 * 1440.0);
}

TEST_CASE("temporal conv consumes frames") {
  // Conv3d kernel 2 in t with no padding: 4 frames give 3 temporal outputs,
  // 1x1 spatial, 1->1 channels: 3 * (2*1*1*1) = 6 MACs; M=1 collapses.
  LayerSpec l;
  l.kind = LayerSpec::Kind::Conv3d;
  l.channels_in = 1;
  l.channels_out = 1;
  l.kernel = {2, 1, 1};
  CHECK_THROWS_AS(ComplexityModel::layered({l}, 1, 1, 1),
                  std::domain_error);  // probed at M=1 during construction

  LayerSpec pad = l;
  pad.padding = {1, 0, 0};
  ComplexityModel model = ComplexityModel::layered({pad}, 1, 1, 1);
  // padded extent M+2 with kernel 2 -> M+1 outputs
  CHECK(model.macs(4) == 5 * 2.0);
}

TEST_CASE("built-in network is affine in the frame count") {
  ComplexityModel model =
      ComplexityModel::layered(resnet18_112_layers(), 112, 112, 3);
  double c1 = model.macs(1);
  CHECK(c1 > 4.5e8);
  CHECK(c1 < 5.5e8);
  for (int m = 2; m <= 16; ++m) {
    CHECK(model.macs(m) == m * c1);
  }
}

TEST_CASE("tabular and affine complexity variants") {
  ComplexityModel tab =
      ComplexityModel::tabular({{1, 10.0}, {2, 30.0}, {3, 70.0}});
  CHECK(tab.macs(2) == 30.0);
  CHECK_THROWS_AS(tab.macs(4), std::domain_error);
  CHECK_THROWS_AS(tab.macs(0), std::domain_error);

  ComplexityModel aff = ComplexityModel::affine(5.0, 2.5);
  CHECK(aff.macs(4) == doctest::Approx(15.0));
  CHECK(aff.affine_c0() == 5.0);
  CHECK(aff.affine_c1() == 2.5);
  CHECK_THROWS_AS(tab.affine_c0(), std::logic_error);
}

TEST_CASE("invalid model constructions are rejected") {
  CHECK_THROWS_AS(ComplexityModel::tabular({}), ConfigError);
  CHECK_THROWS_AS(ComplexityModel::tabular({{2, 5.0}}), ConfigError);
  CHECK_THROWS_AS(ComplexityModel::tabular({{1, 5.0}, {2, 4.0}}), ConfigError);
  CHECK_THROWS_AS(ComplexityModel::tabular({{1, 0.0}}), ConfigError);
  CHECK_THROWS_AS(ComplexityModel::affine(1.0, -0.5), ConfigError);
  CHECK_THROWS_AS(ComplexityModel::affine(0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(ComplexityModel::layered({}, 8, 8, 3), ConfigError);

  LayerSpec bad;
  bad.kind = LayerSpec::Kind::Conv2dPerFrame;
  bad.channels_in = 4;  // input has 3
  CHECK_THROWS_AS(ComplexityModel::layered({bad}, 8, 8, 3), std::domain_error);

  CHECK_THROWS_AS(AccuracyModel::saturating(0.0, 0.5, 0.4), ConfigError);
  CHECK_THROWS_AS(AccuracyModel::saturating(0.95, -0.1, 0.4), ConfigError);
  CHECK_THROWS_AS(AccuracyModel::saturating(0.95, 0.5, 0.0), ConfigError);
  // Phi(1) must not be negative
  CHECK_THROWS_AS(AccuracyModel::saturating(0.3, 0.9, 0.1), ConfigError);
  CHECK_THROWS_AS(AccuracyModel::tabular({{1, 0.5}, {2, 0.4}}), ConfigError);
  CHECK_THROWS_AS(AccuracyModel::tabular({{1, 1.5}}), ConfigError);
}

TEST_CASE("saturating accuracy evaluates the closed form") {
  AccuracyModel acc = AccuracyModel::saturating(0.95, 0.5, 0.4);
  for (int m = 1; m <= 20; m += 3) {
    CHECK(acc.accuracy(m) ==
          doctest::Approx(0.95 - 0.5 * std::exp(-0.4 * m)).epsilon(1e-12));
  }
  // monotone, bounded by a
  double prev = 0.0;
  for (int m = 1; m <= 30; ++m) {
    double v = acc.accuracy(m);
    CHECK(v >= prev);
    CHECK(v < 0.95);
    prev = v;
  }
}

TEST_CASE("min_frames inverts the accuracy curve") {
  AccuracyModel acc = AccuracyModel::saturating(0.95, 0.5, 0.4);
  // continuous inverse: M >= ln(b/(a-alpha))/c = ln(10)/0.4 = 5.756...
  CHECK(min_frames(acc, 0.90, 16) == 6);
  CHECK(min_frames(acc, 0.90, 16) ==
        static_cast<int>(std::ceil(std::log(0.5 / 0.05) / 0.4)));
  CHECK(min_frames(acc, 0.0, 16) == 1);
  // Phi(1) = 0.6148, Phi(2) = 0.7253
  CHECK(min_frames(acc, 0.7, 16) == 2);
  CHECK_THROWS_AS(min_frames(acc, 0.95, 16), InfeasibleAccuracyError);
  CHECK_THROWS_AS(min_frames(acc, 0.94, 3), InfeasibleAccuracyError);
  CHECK_THROWS_AS(min_frames(acc, 1.5, 16), std::domain_error);
  CHECK_THROWS_AS(min_frames(acc, -0.1, 16), std::domain_error);

  AccuracyModel tab =
      AccuracyModel::tabular({{1, 0.7}, {2, 0.85}, {3, 0.92}, {4, 0.93}});
  CHECK(min_frames(tab, 0.90, 4) == 3);
  CHECK(min_frames(tab, 0.7, 4) == 1);
  CHECK_THROWS_AS(min_frames(tab, 0.95, 4), InfeasibleAccuracyError);
}

TEST_CASE("min_frames is the Galois adjoint of the accuracy model") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> a_draw(0.6, 0.99);
  std::uniform_real_distribution<double> c_draw(0.05, 1.0);
  std::uniform_real_distribution<double> alpha_draw(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    double a = a_draw(rng);
    double b = std::uniform_real_distribution<double>(0.01, a)(rng);
    AccuracyModel acc = AccuracyModel::saturating(a, b, c_draw(rng));
    double alpha = alpha_draw(rng);
    int m_max = 1 + static_cast<int>(rng() % 30);
    try {
      int m = min_frames(acc, alpha, m_max);
      CHECK(m >= 1);
      CHECK(m <= m_max);
      CHECK(acc.accuracy(m) >= alpha);
      if (m > 1) {
        CHECK(acc.accuracy(m - 1) < alpha);
      }
    } catch (const InfeasibleAccuracyError&) {
      CHECK(acc.accuracy(m_max) < alpha);
    }

    // asking for exactly the accuracy of frame count M0 never needs more
    // than M0 frames
    int m0 = 1 + static_cast<int>(rng() % static_cast<unsigned>(m_max));
    CHECK(min_frames(acc, acc.accuracy(m0), m_max) <= m0);
  }
}

TEST_CASE("affine fit recovers affine data and the built-in network") {
  ComplexityModel exact = ComplexityModel::affine(3.0e8, 4.9e8);
  ComplexityModel fit = fit_affine(exact, 1, 16);
  CHECK(fit.affine_c0() == doctest::Approx(3.0e8).epsilon(1e-9));
  CHECK(fit.affine_c1() == doctest::Approx(4.9e8).epsilon(1e-9));

  ComplexityModel net =
      ComplexityModel::layered(resnet18_112_layers(), 112, 112, 3);
  ComplexityModel net_fit = fit_affine(net, 1, 16);
  // the stack is exactly linear in M, so the fit passes through the origin
  CHECK(std::abs(net_fit.affine_c0()) < 1e-4 * net_fit.affine_c1());
  CHECK(net_fit.affine_c1() == doctest::Approx(net.macs(1)).epsilon(1e-9));

  CHECK_THROWS_AS(fit_affine(exact, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(fit_affine(exact, 0, 5), std::invalid_argument);
}
