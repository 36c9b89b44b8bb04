#include "mulab/divided_difference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "mulab/errors.hpp"

namespace mulab {

namespace {

constexpr int kSeriesTerms = 30;

// [y_0..y_m] exp for nodes within a window of width <= 1 around zero.
double centred_series(const double* y, int count) {
  const int m = count - 1;
  // h[k] = h_k(y_0..y_j), updated in place for j = 0..m.
  double h[kSeriesTerms + 1];
  h[0] = 1.0;
  for (int k = 1; k <= kSeriesTerms; ++k) h[k] = std::pow(y[0], k);
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= kSeriesTerms; ++k) h[k] += y[j] * h[k - 1];
  double inv_fact = 1.0;
  for (int i = 2; i <= m; ++i) inv_fact /= i;
  double sum = 0.0;
  for (int k = 0; k <= kSeriesTerms; ++k) {
    sum += h[k] * inv_fact;
    inv_fact /= (k + m + 1);
  }
  return sum;
}

class Table {
 public:
  explicit Table(std::vector<double> x) : x_(std::move(x)) {}

  double operator()(int i, int j) {
    const auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double v;
    if (x_[j] - x_[i] <= 1.0) {
      const double c = 0.5 * (x_[i] + x_[j]);
      std::vector<double> y(x_.begin() + i, x_.begin() + j + 1);
      for (auto& t : y) t -= c;
      v = std::exp(c) * centred_series(y.data(), j - i + 1);
    } else {
      v = ((*this)(i + 1, j) - (*this)(i, j - 1)) / (x_[j] - x_[i]);
    }
    memo_.emplace(key, v);
    return v;
  }

 private:
  std::vector<double> x_;
  std::map<std::pair<int, int>, double> memo_;
};

}  // namespace

double divided_difference_exp(std::vector<double> nodes) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidInput, "divided difference needs at least one node");
  for (double x : nodes) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NonFiniteInput, "non-finite exponent value");
    if (x > 700.0) throw Error(ErrorKind::OverflowRisk, "exponent exceeds 700");
  }
  std::sort(nodes.begin(), nodes.end());
  const int n = static_cast<int>(nodes.size());
  Table t(std::move(nodes));
  return t(0, n - 1);
}

}  // namespace mulab
