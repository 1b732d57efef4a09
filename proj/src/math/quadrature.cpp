#include "mpg/math/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mpg::math {

namespace {

struct Panel {
  long double fa, fm, fb;  // endpoint and midpoint values
  long double simpson;
};

long double simpson(long double fa, long double fm, long double fb,
                    long double h) {
  return h / 6.0L * (fa + 4.0L * fm + fb);
}

long double adapt(const std::function<double(double)>& f, long double a,
                  long double b, const Panel& p, long double tol, int depth,
                  int max_depth) {
  const long double m = 0.5L * (a + b);
  const long double lm = 0.5L * (a + m);
  const long double rm = 0.5L * (m + b);
  const long double flm = f(static_cast<double>(lm));
  const long double frm = f(static_cast<double>(rm));
  const long double h = b - a;
  const long double sl = simpson(p.fa, flm, p.fm, 0.5L * h);
  const long double sr = simpson(p.fm, frm, p.fb, 0.5L * h);
  const long double s2 = sl + sr;
  const long double err = (s2 - p.simpson) / 15.0L;
  if (std::fabs(static_cast<double>(err)) <= static_cast<double>(tol)) {
    return s2 + err;
  }
  if (depth >= max_depth) {
    throw std::runtime_error("integrate_adaptive: subdivision limit reached");
  }
  const Panel left{p.fa, flm, p.fm, sl};
  const Panel right{p.fm, frm, p.fb, sr};
  return adapt(f, a, m, left, 0.5L * tol, depth + 1, max_depth) +
         adapt(f, m, b, right, 0.5L * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth) {
  if (!(b > a)) throw std::invalid_argument("integrate_adaptive: b <= a");
  // Composite pass over a fixed grid first. It seeds the absolute tolerance
  // (rel_tol is relative to the integral's magnitude) and the adaptive pass
  // then refines panel by panel, so narrow features cannot slip through a
  // single top-level Simpson estimate.
  const int n = 256;
  const long double h = (static_cast<long double>(b) - a) / n;
  std::vector<Panel> panels(n);
  long double coarse = 0.0L;
  long double prev_f = f(a);
  for (int i = 0; i < n; ++i) {
    const long double x0 = a + i * h;
    const long double fm = f(static_cast<double>(x0 + 0.5L * h));
    const long double fb = f(static_cast<double>(x0 + h));
    panels[i] = Panel{prev_f, fm, fb, simpson(prev_f, fm, fb, h)};
    coarse += panels[i].simpson;
    prev_f = fb;
  }
  long double scale = std::fabs(static_cast<double>(coarse));
  if (scale <= 0.0L) scale = 1e-300L;
  const long double panel_tol = rel_tol * scale / n;

  long double total = 0.0L;
  for (int i = 0; i < n; ++i) {
    const long double x0 = a + i * h;
    total += adapt(f, x0, x0 + h, panels[i], panel_tol, 0, max_depth);
  }
  return static_cast<double>(total);
}

}  // namespace mpg::math
