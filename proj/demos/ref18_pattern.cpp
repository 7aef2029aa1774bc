// Computes the decohered ref18 pattern and prints its fringe statistics,
// then the same geometry fully coherent with equal slit weights.

#include <cstdio>

#include "slitwave/slitwave.hpp"

int main() {
  using namespace slitwave;

  SlitSetup setup = SlitSetup::from_preset(make_preset("ref18"));
  ScanOptions opt;
  opt.grid = {-150e-6, 150e-6, 1501};
  opt.workers = 4;

  DiffractionPattern pat = screen_scan(setup, opt);
  std::printf("ref18 decohered: m_max %d, visibility %.4f, first side maximum %.2f um\n",
              pat.meta.m_max, visibility(pat), fringe_spacing(pat) * 1e6);

  setup.amplitude_1 = setup.amplitude_2 = 1.0;
  setup.coherence = CoherenceConfig{};  // c1 = c2 = 1/sqrt(2), |alpha_t| = 1
  setup.weight_tol = 1e-12;
  opt.mode = IntensityMode::coherent;
  pat = screen_scan(setup, opt);
  std::printf("symmetric coherent: visibility %.4f\n", visibility(pat));
}
