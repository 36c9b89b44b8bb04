#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mulab {

template <class F>
NelderMeadResult nelder_mead_maximize(F&& f, const Eigen::VectorXd& x0, double step, int max_iter, double ftol) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> x(n + 1, x0);
  std::vector<double> v(n + 1);
  for (int i = 0; i < n; ++i) x[i + 1][i] += step;
  for (int i = 0; i <= n; ++i) v[i] = f(x[i]);
  std::vector<int> idx(n + 1);
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];
    double size = 0.0;
    for (int i = 1; i <= n; ++i) size = std::max(size, (x[idx[i]] - x[best]).lpNorm<Eigen::Infinity>());
    if (std::abs(v[best] - v[worst]) <= ftol * (1.0 + std::abs(v[best])) && size <= 1e-9) {
      converged = true;
      break;
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) c += x[idx[i]];
    c /= n;
    const Eigen::VectorXd xr = c + (c - x[worst]);
    const double vr = f(xr);
    if (vr > v[best]) {
      const Eigen::VectorXd xe = c + 2.0 * (c - x[worst]);
      const double ve = f(xe);
      if (ve > vr) {
        x[worst] = xe;
        v[worst] = ve;
      } else {
        x[worst] = xr;
        v[worst] = vr;
      }
      continue;
    }
    if (vr > v[second]) {
      x[worst] = xr;
      v[worst] = vr;
      continue;
    }
    const bool outside = vr > v[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(c + 0.5 * (xr - c)) : Eigen::VectorXd(c + 0.5 * (x[worst] - c));
    const double vc = f(xc);
    if (vc > (outside ? vr : v[worst])) {
      x[worst] = xc;
      v[worst] = vc;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      x[idx[i]] = x[best] + 0.5 * (x[idx[i]] - x[best]);
      v[idx[i]] = f(x[idx[i]]);
    }
  }
  const int best = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  return {x[best], v[best], it, converged};
}

}  // namespace mulab
