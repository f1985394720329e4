#include "gridsmooth/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridsmooth/estimators.hpp"
#include "gridsmooth/random.hpp"
#include "gridsmooth/spectral.hpp"
#include "gridsmooth/theory.hpp"

namespace gridsmooth {
namespace {

Signal random_signal(const GridShape& shape, std::uint64_t seed) {
  const CounterRng rng(seed);
  std::vector<double> v(shape.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.normal(i);
  return Signal(shape, std::move(v));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

SelftestCheck check(std::string name, double value, double tol) {
  std::ostringstream detail;
  detail << "value " << value << " tolerance " << tol;
  return {std::move(name), value <= tol, detail.str()};
}

}  // namespace

std::vector<SelftestCheck> run_selftest() {
  std::vector<SelftestCheck> checks;
  const GridShape shapes[] = {GridShape::cubic(7, 1), GridShape::cubic(5, 2), GridShape::cubic(4, 3)};

  double adjoint = 0.0, laplacian = 0.0, parseval = 0.0, roundtrip = 0.0;
  for (std::size_t s = 0; s < 3; ++s) {
    const GridShape& shape = shapes[s];
    const Signal x = random_signal(shape, 10 + s);
    const EdgeVector u(shape, random_signal(GridShape({shape.edge_count()}), 20 + s).vector());
    const EdgeVector dx = incidence_apply(x);
    const Signal dtu = incidence_adjoint(u);
    adjoint = std::max(adjoint, std::abs(dot(dx.values(), u.values()) - dot(x.values(), dtu.values())));
    const Signal lx = laplacian_apply(x);
    laplacian = std::max(laplacian, max_abs_diff(lx.values(), incidence_adjoint(dx).values()));
    const Signal gamma = spectral_forward(x);
    parseval = std::max(parseval, std::abs(dot(gamma.values(), gamma.values()) - dot(x.values(), x.values())));
    roundtrip = std::max(roundtrip, max_abs_diff(spectral_inverse(gamma).values(), x.values()));
  }
  checks.push_back(check("incidence adjoint <Dx,u> = <x,D^T u>", adjoint, 1e-10));
  checks.push_back(check("laplacian stencil equals D^T D", laplacian, 1e-10));
  checks.push_back(check("spectral transform preserves norm", parseval, 1e-10));
  checks.push_back(check("spectral inverse undoes forward", roundtrip, 1e-12));

  double kkt = 0.0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const Signal y = random_signal(GridShape::cubic(3 + t % 20, 1), 100 + t);
    const double w = 0.05 * static_cast<double>(1 + t % 30);
    const std::vector<double> x = tv_prox_1d(y.values(), w);
    kkt = std::max(kkt, tv_prox_1d_kkt_residual(y.values(), w, x));
  }
  checks.push_back(check("1-D TV prox satisfies optimality conditions", kkt, 1e-9));

  double worst_gap = 0.0;
  for (std::uint64_t t = 0; t < 6; ++t) {
    const Signal y = random_signal(t % 2 == 0 ? GridShape::cubic(6, 2) : GridShape::cubic(4, 3), 200 + t);
    const TvSolveReport report = tv_denoise(y, 0.5 * static_cast<double>(1 + t));
    worst_gap = std::max(worst_gap, report.converged ? report.relative_gap : INFINITY);
  }
  checks.push_back(check("TV solver certifies relative gap", worst_gap, 1e-6));

  {
    const Signal y = random_signal(GridShape::cubic(6, 2), 300);
    const Signal smooth = laplacian_smooth(y, 2.0);
    const Signal back = laplacian_apply(smooth);
    std::vector<double> residual(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) residual[i] = smooth[i] + 2.0 * back[i] - y[i];
    checks.push_back(check("laplacian smoothing solves (I + lambda L) x = y",
                           max_abs_diff(residual, std::vector<double>(y.size(), 0.0)), 1e-10));
  }

  const double rho = theory::birge_massart_rho(1.0);
  checks.push_back({"Birge-Massart constant at p = 1 lies in (2.34, 2.35)", rho > 2.34 && rho < 2.35,
                    "value " + std::to_string(rho)});

  const theory::EmbeddingCheck embed = theory::ball_embedding_check(3.0, GridShape::cubic(6, 2), 200);
  checks.push_back({"l1 ball of radius r / d_max sits inside the TV ball", embed.passed,
                    std::to_string(embed.failures) + " failures in " + std::to_string(embed.samples)});
  return checks;
}

}  // namespace gridsmooth
