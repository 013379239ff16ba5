#include "wdbo/optim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wdbo::optim {

namespace {

Eigen::VectorXd clamp_box(Eigen::VectorXd x, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
  for (int i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

}  // namespace

MinimizeResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& start,
                           const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper,
                           const NelderMeadOptions& opts) {
  const int n = static_cast<int>(start.size());
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("nelder_mead: bound dimension mismatch");
  }

  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.reserve(n + 1);
  values.reserve(n + 1);

  simplex.push_back(clamp_box(start, lower, upper));
  values.push_back(f(simplex[0]));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = simplex[0];
    const double span = upper[i] - lower[i];
    double step = opts.initial_step * (span > 0 ? span : 1.0);
    if (v[i] + step > upper[i]) step = -step;
    v[i] += step;
    simplex.push_back(clamp_box(v, lower, upper));
    values.push_back(f(simplex.back()));
  }

  const auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      v2[i] = values[idx[i]];
    }
    simplex.swap(s2);
    values.swap(v2);
  };
  order();

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    if (std::abs(values[n] - values[0]) <
            opts.f_tol * (1.0 + std::abs(values[0])) &&
        (simplex[n] - simplex[0]).norm() < opts.x_tol) {
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= n;

    const auto eval_at = [&](double coef) {
      Eigen::VectorXd p =
          clamp_box(centroid + coef * (simplex[n] - centroid), lower, upper);
      return std::make_pair(p, f(p));
    };

    auto [xr, fr] = eval_at(-1.0);  // reflection
    if (fr < values[0]) {
      auto [xe, fe] = eval_at(-2.0);  // expansion
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      auto [xc, fc] = eval_at(outside ? -0.5 : 0.5);  // contraction
      if (fc < std::min(fr, values[n])) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {  // shrink
          simplex[i] = clamp_box(
              simplex[0] + 0.5 * (simplex[i] - simplex[0]), lower, upper);
          values[i] = f(simplex[i]);
        }
      }
    }
    order();
  }

  MinimizeResult out;
  out.x = simplex[0];
  out.value = values[0];
  out.iterations = iter;
  return out;
}

Eigen::VectorXd halton_point(std::int64_t k, int d) {
  static constexpr std::array<int, 12> kPrimes = {2,  3,  5,  7,  11, 13,
                                                  17, 19, 23, 29, 31, 37};
  if (d > static_cast<int>(kPrimes.size())) {
    throw std::invalid_argument("halton_point: dimension too large");
  }
  Eigen::VectorXd out(d);
  for (int i = 0; i < d; ++i) {
    const int base = kPrimes[i];
    double f = 1.0;
    double r = 0.0;
    std::int64_t kk = k + 1;  // skip the all-zero point
    while (kk > 0) {
      f /= base;
      r += f * (kk % base);
      kk /= base;
    }
    out[i] = r;
  }
  return out;
}

}  // namespace wdbo::optim
