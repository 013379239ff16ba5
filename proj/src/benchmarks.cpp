#include "wdbo/benchmarks.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace wdbo::bench {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Eigen::VectorXd constant_vec(int n, double v) {
  return Eigen::VectorXd::Constant(n, v);
}

double rastrigin(const Eigen::VectorXd& z) {
  const double a = 10.0;
  double sum = a * z.size();
  for (int i = 0; i < z.size(); ++i) {
    sum += z[i] * z[i] - a * std::cos(2.0 * kPi * z[i]);
  }
  return sum;
}

double schwefel(const Eigen::VectorXd& z) {
  double sum = 418.9829 * z.size();
  for (int i = 0; i < z.size(); ++i) {
    sum -= z[i] * std::sin(std::sqrt(std::abs(z[i])));
  }
  return sum;
}

double styblinski_tang(const Eigen::VectorXd& z) {
  double sum = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    const double v = z[i];
    sum += v * v * v * v - 16.0 * v * v + 5.0 * v;
  }
  return 0.5 * sum;
}

double eggholder(const Eigen::VectorXd& z) {
  const double z1 = z[0];
  const double z2 = z[1];
  return -(z2 + 47.0) * std::sin(std::sqrt(std::abs(z2 + 0.5 * z1 + 47.0))) -
         z1 * std::sin(std::sqrt(std::abs(z1 - z2 - 47.0)));
}

double ackley(const Eigen::VectorXd& z) {
  const double a = 20.0;
  const double b = 0.2;
  const double c = 2.0 * kPi;
  const double dp = static_cast<double>(z.size());
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    s1 += z[i] * z[i];
    s2 += std::cos(c * z[i]);
  }
  // grouped so the known minimum at the origin cancels exactly
  return a * (1.0 - std::exp(-b * std::sqrt(s1 / dp))) +
         (std::exp(1.0) - std::exp(s2 / dp));
}

double rosenbrock(const Eigen::VectorXd& z) {
  double sum = 0.0;
  for (int i = 0; i + 1 < z.size(); ++i) {
    const double gap = z[i + 1] - z[i] * z[i];
    sum += 100.0 * gap * gap + (z[i] - 1.0) * (z[i] - 1.0);
  }
  return sum;
}

double shekel(const Eigen::VectorXd& z) {
  static const double beta[10] = {0.1, 0.2, 0.2, 0.4, 0.4,
                                  0.6, 0.3, 0.7, 0.5, 0.5};
  // printed 4x10 matrix, repeated rows kept verbatim
  static const double c[4][10] = {
      {4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
      {4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6},
      {4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
      {4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6},
  };
  double sum = 0.0;
  for (int i = 0; i < 10; ++i) {
    double inner = beta[i];
    for (int j = 0; j < 4; ++j) {
      const double diff = z[j] - c[j][i];
      inner += diff * diff;
    }
    sum -= 1.0 / inner;
  }
  return sum;
}

double hartmann3(const Eigen::VectorXd& z) {
  static const double alpha[4] = {1.0, 1.2, 3.0, 3.2};
  static const double a[4][3] = {
      {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0},
      {0.1, 10.0, 35.0}};
  static const double p[4][3] = {{0.3689, 0.1170, 0.2673},
                                 {0.4699, 0.4387, 0.7470},
                                 {0.1091, 0.8732, 0.5547},
                                 {0.0381, 0.5743, 0.8828}};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    double expo = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double diff = z[j] - p[i][j];
      expo += a[i][j] * diff * diff;
    }
    sum -= alpha[i] * std::exp(-expo);
  }
  return sum;
}

double hartmann6(const Eigen::VectorXd& z) {
  static const double alpha[4] = {1.0, 1.2, 3.0, 3.2};
  static const double a[4][6] = {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
                                 {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
                                 {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
                                 {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
  static const double p[4][6] = {
      {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
      {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
      {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
      {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    double expo = 0.0;
    for (int j = 0; j < 6; ++j) {
      const double diff = z[j] - p[i][j];
      expo += a[i][j] * diff * diff;
    }
    sum -= alpha[i] * std::exp(-expo);
  }
  return sum;
}

double powell(const Eigen::VectorXd& z) {
  double sum = 0.0;
  for (int i = 1; i <= z.size() / 4; ++i) {
    const double z1 = z[4 * i - 4];
    const double z2 = z[4 * i - 3];
    const double z3 = z[4 * i - 2];
    const double z4 = z[4 * i - 1];
    const double t1 = z1 + 10.0 * z2;
    const double t2 = z3 - z4;
    const double t3 = z2 - 2.0 * z3;
    const double t4 = z1 - z4;
    sum += t1 * t1 + 5.0 * t2 * t2 + t3 * t3 * t3 * t3 +
           10.0 * t4 * t4 * t4 * t4;
  }
  return sum;
}

std::map<std::string, BenchmarkProblem> make_registry() {
  std::map<std::string, BenchmarkProblem> reg;
  const auto add = [&](const std::string& name, int total_dim, double lo,
                       double hi,
                       std::function<double(const Eigen::VectorXd&)> fn) {
    BenchmarkProblem p;
    p.name = name;
    p.spatial_dim = total_dim - 1;
    p.lower = constant_vec(total_dim, lo);
    p.upper = constant_vec(total_dim, hi);
    p.evaluator = std::move(fn);
    reg[name] = std::move(p);
  };
  add("rastrigin", 5, -4.0, 4.0, rastrigin);
  add("schwefel", 4, -500.0, 500.0, schwefel);
  add("styblinski_tang", 4, -5.0, 5.0, styblinski_tang);
  add("eggholder", 2, -512.0, 512.0, eggholder);
  add("ackley", 4, -32.0, 32.0, ackley);
  add("rosenbrock", 3, -1.0, 1.5, rosenbrock);
  add("shekel", 4, 0.0, 10.0, shekel);
  add("hartmann3", 3, 0.0, 1.0, hartmann3);
  add("hartmann6", 6, 0.0, 1.0, hartmann6);
  add("powell", 4, -4.0, 5.0, powell);
  return reg;
}

const std::map<std::string, BenchmarkProblem>& registry() {
  static const std::map<std::string, BenchmarkProblem> reg = make_registry();
  return reg;
}

}  // namespace

Eigen::VectorXd BenchmarkProblem::to_raw(const Eigen::VectorXd& unit) const {
  return lower.array() + unit.array() * (upper - lower).array();
}

Eigen::VectorXd BenchmarkProblem::to_unit(const Eigen::VectorXd& raw) const {
  return (raw - lower).array() / (upper - lower).array();
}

double BenchmarkProblem::evaluate(const Eigen::VectorXd& z) const {
  if (z.size() != total_dim()) {
    throw std::domain_error("benchmark " + name + ": wrong input dimension");
  }
  for (int i = 0; i < z.size(); ++i) {
    if (z[i] < lower[i] - 1e-9 || z[i] > upper[i] + 1e-9) {
      throw std::domain_error("benchmark " + name +
                              ": coordinate out of bounds");
    }
  }
  return evaluator(z);
}

double BenchmarkProblem::evaluate_unit(const Eigen::VectorXd& x,
                                       double t) const {
  Eigen::VectorXd unit(total_dim());
  unit.head(spatial_dim) = x;
  unit[spatial_dim] = t;
  return evaluate(to_raw(unit));
}

const BenchmarkProblem& benchmark_by_name(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    throw std::invalid_argument("unknown benchmark: " + name);
  }
  return it->second;
}

std::vector<std::string> benchmark_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

double evaluate_benchmark(const std::string& name, const Eigen::VectorXd& z) {
  return benchmark_by_name(name).evaluate(z);
}

}  // namespace wdbo::bench
