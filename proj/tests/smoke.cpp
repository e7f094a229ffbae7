// Scratch driver used while bringing the core up; superseded by the real
// test suites.
#include "basilica/cells.hpp"
#include "basilica/decimation.hpp"
#include "basilica/forms.hpp"
#include "basilica/geometry.hpp"
#include "basilica/graphdir.hpp"
#include "basilica/numerics.hpp"
#include "basilica/spectra.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

using namespace basilica;

static double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int main() {
  // ---- Self-similar Weyl fit at level 6 ----
  decimation::DecimationParams prm{0.25, 0.25};
  auto spec6 = decimation::graph_spectrum(6, prm);
  std::vector<std::pair<double, long long>> atoms;
  const double scale = std::pow(6.0, 6);
  double zmin = 1e9, zmax = 0;
  for (auto& a : spec6.atoms) {
    if (a.z <= 0) continue;
    atoms.push_back({scale * a.z, a.mult});
    zmin = std::min(zmin, scale * a.z);
    zmax = std::max(zmax, scale * a.z);
  }
  std::printf("renormalized range: [%.4g, %.4g]\n", zmin, zmax);
  const double expect_slope = std::log(3.0) / std::log(6.0);
  for (auto [lo, hi] : {std::pair<double, double>{36, 7776},
                        {36, 46656},
                        {100, 10000},
                        {216, 46656},
                        {50, 20000},
                        {zmin * 1.5, zmax / 10}}) {
    try {
      auto fit = spectra::weyl_fit(atoms, lo, hi);
      std::printf("weyl ss [%.3g, %.3g]: slope=%.4f (expect %.4f, diff %.4f, pts %d)\n", lo, hi,
                  fit.slope, expect_slope, fit.slope - expect_slope, fit.points);
    } catch (const std::exception& e) {
      std::printf("weyl ss [%.3g, %.3g]: %s\n", lo, hi, e.what());
    }
  }

  // ---- ids vs dense eigensolver clusters at level 6 ----
  {
    const auto f6 = cells::Filtration::build(6);
    double t0 = now();
    auto wm = decimation::walk_matrix(f6, 6, prm);
    auto dec = numerics::sym_eig(wm.sym);
    std::printf("dense 1458 eig: %.1f s\n", now() - t0);
    auto kappa = decimation::ids(5, prm);
    double worst = 0;
    for (auto& atom : kappa) {
      long long cnt = 0;
      for (double v : dec.values)
        if (std::fabs(v - atom.z) < 1e-8) ++cnt;
      const double emp = double(cnt) / std::pow(3.0, 6);
      worst = std::max(worst, std::fabs(emp - atom.weight.to_double()));
    }
    std::printf("ids worst |empirical-weight| = %.3g (tol %.3g)\n", worst, std::pow(3.0, -6.0));
  }

  // ---- Graph-directed spectra 8..11: timings, ratios, slope ----
  std::map<int, std::vector<double>> gd;
  for (int n = 8; n <= 11; ++n) {
    double t0 = now();
    gd[n] = spectra::graphdirected_spectrum(n, 0.5).values;
    std::printf("G'_%d (%zu): %.1f s, lam2=%.6g lam_max=%.6g\n", n, gd[n].size(), now() - t0,
                gd[n][1], gd[n].back());
  }
  const double target = 1.0 / (2.0 * std::sqrt(2.0));
  for (int n = 8; n <= 10; ++n)
    for (int j = 2; j <= 6; ++j) {
      const double ratio = gd[n + 1][j - 1] / gd[n][j - 1];
      std::printf("ratio j=%d n=%d: %.6f vs %.6f (rel err %.3f%%)\n", j, n, ratio, target,
                  100 * std::fabs(ratio / target - 1));
    }
  {
    std::vector<std::pair<double, long long>> a11;
    for (size_t i = 1; i < gd[11].size(); ++i) a11.push_back({gd[11][i], 1});
    std::printf("gd lambda range: [%.4g, %.4g]\n", gd[11][1], gd[11].back());
    for (auto [lo, hi] : {std::pair<double, double>{1e-2, 1e2}, {1e-2, 1e3}, {1e-1, 1e3},
                          {gd[11][1] * 4, gd[11].back() / 100}, {0.05, 500}}) {
      try {
        auto fit = spectra::weyl_fit(a11, lo, hi);
        std::printf("weyl gd [%.3g, %.3g]: slope=%.4f (expect 0.6667, diff %.4f, pts %d)\n", lo,
                    hi, fit.slope, fit.slope - 2.0 / 3.0, fit.points);
      } catch (const std::exception& e) {
        std::printf("weyl gd: %s\n", e.what());
      }
    }
  }

  // ---- Eigenfunction bases ----
  {
    const auto f = cells::Filtration::build(3);
    for (int n = 1; n <= 3; ++n) {
      auto spec = decimation::graph_spectrum(n, prm);
      int vecs = 0;
      for (auto& atom : spec.atoms) {
        auto basis = decimation::eigenfunction_basis(f, atom, n, prm);
        vecs += (int)basis.size();
      }
      std::printf("eigenfunction bases n=%d: %d vectors (expect %d)\n", n, vecs,
                  2 * (int)std::pow(3, n));
    }
  }

  // ---- Layout injectivity ----
  {
    const auto f = cells::Filtration::build(6);
    auto pos = geometry::layout_self_similar(f, 6);
    double minsep = 1e18;
    for (size_t i = 0; i < pos.size(); ++i)
      for (size_t j = i + 1; j < pos.size(); ++j) {
        const double d = std::hypot(pos[i][0] - pos[j][0], pos[i][1] - pos[j][1]);
        minsep = std::min(minsep, d);
      }
    std::printf("layout ss level 6: %zu vertices, min separation %.3g\n", pos.size(), minsep);
    auto gp = geometry::layout_graph_directed(8);
    minsep = 1e18;
    for (size_t i = 0; i < gp.size(); ++i)
      for (size_t j = i + 1; j < gp.size(); ++j)
        minsep = std::min(minsep, std::hypot(gp[i][0] - gp[j][0], gp[i][1] - gp[j][1]));
    std::printf("layout gd gen 8: %zu vertices, min separation %.3g\n", gp.size(), minsep);
  }
  return 0;
}
