#include <algorithm>
#include <cmath>
#include <vector>

#include "gridsmooth/estimators.hpp"

namespace gridsmooth {

// Dynamic programming over the piecewise-quadratic messages (Johnson's
// linear-time scheme). The forward pass keeps the derivative of the message
// as a piecewise-linear function stored by its knots x[l..r] with slope and
// offset increments a, b; tm/tp are the back-pointer thresholds. The input
// is fully consumed before the backward pass writes, so `out` may alias `y`.
void tv_prox_1d(std::span<const double> y, double w, std::span<double> out) {
  if (out.size() != y.size()) throw ShapeMismatch("tv_prox_1d: output length mismatch");
  if (!(w >= 0.0)) throw std::invalid_argument("tv_prox_1d: weight must be nonnegative");
  const std::size_t n = y.size();
  if (n == 0) return;
  if (w == 0.0 || n == 1) {
    if (out.data() != y.data()) std::copy(y.begin(), y.end(), out.begin());
    return;
  }

  thread_local std::vector<double> x, a, b, tm, tp;
  x.resize(2 * n);
  a.resize(2 * n);
  b.resize(2 * n);
  tm.resize(n - 1);
  tp.resize(n - 1);

  tm[0] = y[0] - w;
  tp[0] = y[0] + w;
  std::ptrdiff_t l = static_cast<std::ptrdiff_t>(n) - 1;
  std::ptrdiff_t r = static_cast<std::ptrdiff_t>(n);
  x[l] = tm[0];
  x[r] = tp[0];
  a[l] = 1.0;
  b[l] = w - y[0];
  a[r] = -1.0;
  b[r] = y[0] + w;
  double afirst = 1.0;
  double bfirst = -w - y[1];
  double alast = -1.0;
  double blast = y[1] - w;

  for (std::size_t k = 1; k + 1 < n; ++k) {
    double alo = afirst;
    double blo = bfirst;
    std::ptrdiff_t lo = l;
    for (; lo <= r; ++lo) {
      if (alo * x[lo] + blo > -w) break;
      alo += a[lo];
      blo += b[lo];
    }
    tm[k] = (-w - blo) / alo;
    l = lo - 1;
    x[l] = tm[k];

    double ahi = alast;
    double bhi = blast;
    std::ptrdiff_t hi = r;
    for (; hi >= l; --hi) {
      if (-ahi * x[hi] - bhi < w) break;
      ahi += a[hi];
      bhi += b[hi];
    }
    tp[k] = (w + bhi) / (-ahi);
    r = hi + 1;
    x[r] = tp[k];

    a[l] = alo;
    b[l] = blo + w;
    a[r] = ahi;
    b[r] = bhi + w;
    afirst = 1.0;
    bfirst = -w - y[k + 1];
    alast = -1.0;
    blast = y[k + 1] - w;
  }

  double alo = afirst;
  double blo = bfirst;
  for (std::ptrdiff_t lo = l; lo <= r; ++lo) {
    if (alo * x[lo] + blo > 0.0) break;
    alo += a[lo];
    blo += b[lo];
  }
  out[n - 1] = -blo / alo;
  for (std::size_t k = n - 1; k-- > 0;) {
    if (out[k + 1] > tp[k]) {
      out[k] = tp[k];
    } else if (out[k + 1] < tm[k]) {
      out[k] = tm[k];
    } else {
      out[k] = out[k + 1];
    }
  }
}

std::vector<double> tv_prox_1d(std::span<const double> y, double w) {
  std::vector<double> out(y.size());
  tv_prox_1d(y, w, out);
  return out;
}

double tv_prox_1d_kkt_residual(std::span<const double> y, double w, std::span<const double> x) {
  if (x.size() != y.size()) throw ShapeMismatch("tv_prox_1d_kkt_residual: length mismatch");
  double worst = 0.0;
  double u = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    u += x[i] - y[i];
    worst = std::max(worst, std::abs(u) - w);
    const double jump = x[i + 1] - x[i];
    if (jump > 0.0) worst = std::max(worst, std::abs(u - w));
    if (jump < 0.0) worst = std::max(worst, std::abs(u + w));
  }
  if (!y.empty()) worst = std::max(worst, std::abs(u + x.back() - y.back()));
  return worst;
}

}  // namespace gridsmooth
