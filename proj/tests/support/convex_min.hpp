#pragma once

#include <cmath>
#include <vector>

namespace testsupport {

/// Golden-section minimization of a convex scalar function over [lo, hi],
/// followed by guarded parabolic polish steps. The target functions here are
/// piecewise quadratic, so once the bracket sits inside one piece a 3-point
/// fit recovers the vertex essentially exactly; evaluations run in long
/// double to push the comparison noise floor below the 1e-9 agreement the
/// tests demand.
template <class F>
long double minimize_convex(const F& f, long double lo, long double hi) {
  constexpr long double invphi = 0.6180339887498948482045868343656381L;
  long double a = lo;
  long double b = hi;
  long double x1 = b - invphi * (b - a);
  long double x2 = a + invphi * (b - a);
  long double f1 = f(x1);
  long double f2 = f(x2);
  // Near a kink minimum the comparisons stay informative essentially down to
  // the evaluation noise floor, so the bracket can be driven very tight; near
  // a smooth minimum the parabolic polish below does the final localization.
  for (int it = 0; it < 400; ++it) {
    if (b - a <= 1e-11L * (1.0L + std::fabs(a) + std::fabs(b))) {
      break;
    }
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }

  long double best = 0.5L * (a + b);
  long double fbest = f(best);
  const long double scale = 1.0L + std::fabs(best);
  for (long double dx = 1e-2L * scale; dx >= 1e-7L * scale; dx /= 8.0L) {
    const long double fm = f(best - dx);
    const long double fp = f(best + dx);
    const long double denom = fm - 2.0L * fbest + fp;
    if (!(denom > 0.0L)) {
      continue;
    }
    long double cand = best - 0.5L * dx * (fp - fm) / denom;
    if (cand < lo) cand = lo;
    if (cand > hi) cand = hi;
    const long double fc = f(cand);
    if (fc <= fbest) {
      best = cand;
      fbest = fc;
    }
  }
  return best;
}

/// Long-double evaluation of the smoothed-quantile sample criterion,
/// with Neumaier compensation. Test-side twin of the production objective.
inline long double objective_ld(const std::vector<double>& ys, long double q,
                                long double z, long double h) {
  long double sum = 0.0L;
  long double comp = 0.0L;
  for (double yd : ys) {
    const long double r = static_cast<long double>(yd) - q;
    const long double term = std::fabs(r) - z * r + 0.5L * h * r * r;
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return (sum + comp) / static_cast<long double>(ys.size());
}

}  // namespace testsupport
