#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slitwave/core.hpp"

using namespace slitwave;

TEST(SinBeta, CenterIsZero) { EXPECT_EQ(sin_beta_from_position(0.0, 1.25), 0.0); }

TEST(SinBeta, FortyFiveDegrees) {
  EXPECT_NEAR(sin_beta_from_position(1.25, 1.25), 0.7071067811865476, 1e-15);
}

TEST(SinBeta, SmallAngle) {
  const double s = 30e-6, L = 1.25;
  const double exact = s / std::sqrt(L * L + s * s);
  EXPECT_NEAR(sin_beta_from_position(s, L), exact, 1e-12 * exact);
  // s << L, so s / L is the leading term.
  EXPECT_NEAR(sin_beta_from_position(s, L), 2.4e-5, 1e-9 * 2.4e-5);
}

TEST(SinBeta, OddAndIncreasing) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-1e-3, 1e-3);
  for (int i = 0; i < 500; ++i) {
    const double s = pos(rng), t = pos(rng), L = 1.25;
    EXPECT_EQ(sin_beta_from_position(-s, L), -sin_beta_from_position(s, L));
    if (s < t) {
      EXPECT_LT(sin_beta_from_position(s, L), sin_beta_from_position(t, L));
    }
    EXPECT_LT(std::abs(sin_beta_from_position(s, L)), 1.0);
  }
}

TEST(ScreenPoint, DirectionCosinesSumToOne) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-0.5, 0.5), sa(-0.3, 0.3);
  for (int i = 0; i < 500; ++i) {
    const ScreenPoint p = ScreenPoint::at(pos(rng), 1.25, sa(rng));
    const double sum = p.cos_theta * p.cos_theta + p.sin_alpha * p.sin_alpha +
                       p.sin_beta * p.sin_beta;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_GT(p.cos_theta, 0.0);
    EXPECT_NEAR(p.r_m, std::hypot(1.25, p.s_m), 1e-15);
  }
}

TEST(Particle, WavenumberTimesWavelength) {
  for (double lam : {2.4e-12, 4.8e-12, 1e-9, 0.5}) {
    Particle p{lam, std::nullopt};
    EXPECT_NEAR(p.wavenumber() * lam, 2.0 * std::numbers::pi, 1e-12);
  }
  EXPECT_THROW((Particle{0.0, std::nullopt}.validate()), domain_error);
  EXPECT_THROW((Particle{1e-12, -1.0}.validate()), domain_error);
}

TEST(SlitGeometry, Validation) {
  SlitGeometry g{47.5e-9, 10e-6, 0.0, 52.5e-9, 1.25};
  EXPECT_NO_THROW(g.validate());
  EXPECT_DOUBLE_EQ(g.center_separation(), 100e-9);

  auto bad = g;
  bad.width_a_m = 0.0;
  EXPECT_THROW(bad.validate(), domain_error);
  bad = g;
  bad.length_b_m = -1.0;
  EXPECT_THROW(bad.validate(), domain_error);
  bad = g;
  bad.gap_d_m = -1e-9;
  EXPECT_THROW(bad.validate(), domain_error);
  bad = g;
  bad.thickness_c_m = -1e-9;
  EXPECT_THROW(bad.validate(), domain_error);
  bad = g;
  bad.screen_L_m = 50e-6;  // (a + d) / L = 2e-3
  EXPECT_THROW(bad.validate(), domain_error);
}

TEST(Coherence, LambdaAndValidation) {
  CoherenceConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(c.lambda_t(), 1.0);
  c.alpha_abs = 0.5;
  EXPECT_NEAR(c.lambda_t(), 0.4, 1e-15);
  c.alpha_abs = 1.5;
  EXPECT_THROW(c.validate(), domain_error);
  c = CoherenceConfig{0.6, 0.6, 1.0};
  EXPECT_THROW(c.validate(), domain_error);
}

TEST(Presets, Ref18Values) {
  const auto p = make_preset("ref18");
  EXPECT_EQ(p.geometry.width_a_m, 47.5e-9);
  EXPECT_EQ(p.geometry.gap_d_m, 52.5e-9);
  EXPECT_EQ(p.geometry.screen_L_m, 1.25);
  EXPECT_EQ(p.particle.wavelength_m, 2.4e-12);
  EXPECT_EQ(p.amplitude_1, 1.6e12);
  EXPECT_EQ(p.amplitude_2, 1.7e12);
  EXPECT_EQ(p.coherence.c1, 0.915);
  EXPECT_EQ(p.coherence.c2, 0.40345);
  EXPECT_EQ(p.visibility_nu, 0.53);
  EXPECT_EQ(p.geometry.length_b_m, 10e-6);
  EXPECT_EQ(p.geometry.thickness_c_m, 0.0);
  EXPECT_NEAR(p.coherence.lambda_t(), 0.53, 1e-12);
}

TEST(Presets, Ref19Values) {
  const auto p = make_preset("ref19");
  EXPECT_EQ(p.geometry.width_a_m, 42e-9);
  EXPECT_EQ(p.geometry.gap_d_m, 86e-9);
  EXPECT_EQ(p.geometry.screen_L_m, 1.25);
  EXPECT_EQ(p.particle.wavelength_m, 4.8e-12);
  EXPECT_EQ(p.amplitude_1, 5.35e13);
  EXPECT_EQ(p.amplitude_2, 2.1e13);
  EXPECT_EQ(p.coherence.c1, 0.9075);
  EXPECT_EQ(p.coherence.c2, 0.42);
  EXPECT_EQ(p.visibility_nu, 0.88);
}

TEST(Presets, WeightsNormalizedOnlyToRounding) {
  for (const auto& name : preset_names()) {
    const auto p = make_preset(name);
    EXPECT_NO_THROW(p.coherence.validate(preset_weight_tol)) << name;
    EXPECT_NO_THROW(p.geometry.validate()) << name;
    EXPECT_NEAR(p.coherence.weight_norm(), 1.0, 1e-4) << name;
    // The published weights are not normalized to full precision.
    EXPECT_THROW(p.coherence.validate(), domain_error) << name;
  }
}

TEST(Presets, UnknownNameListsKnownOnes) {
  try {
    make_preset("ref20");
    FAIL() << "expected an error";
  } catch (const domain_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("ref18"), std::string::npos);
    EXPECT_NE(msg.find("ref19"), std::string::npos);
  }
}
