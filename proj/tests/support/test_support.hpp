#pragma once

// Shared helpers for the test suites: an adaptive-quadrature oracle for Beta
// partial expectations (independent of the library's incomplete-beta
// identities), finite-difference helpers, and temp-file utilities.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// `force` levels of subdivision are unconditional: the error estimate can
// lie at coarse resolution when the integrand's features fall symmetrically
// between sample points, so the first few levels never terminate early.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth, int force) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || (force <= 0 && std::fabs(left + right - whole) <= 15.0 * tol)) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40, 6);
}

// Integral of g(x) * x^(t-1) * (1-x)^(t-1) / B(t,t) over [a, b] in [0,1].
// For t >= 1 the weight is bounded, so the integrand is used directly (in
// log space, which also survives very large t). For t < 1 each half-interval
// is mapped through v = x^t (resp. w = (1-x)^t), which absorbs the endpoint
// singularity and leaves a bounded smooth integrand.
inline double beta_weighted_integral(double t, double a, double b,
                                     const std::function<double(double)>& g) {
  const double log_b_tt = 2.0 * std::lgamma(t) - std::lgamma(2.0 * t);
  if (t >= 1.0) {
    const auto h = [&](double x) {
      if (t == 1.0) return g(x);
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return g(x) * std::exp((t - 1.0) * (std::log(x) + std::log1p(-x)) - log_b_tt);
    };
    return integrate(h, a, b, 1e-13);
  }
  const double norm = std::exp(-log_b_tt) / t;

  // lower side: x in [a0, b0] <= 1/2, v = x^t
  const auto lower_piece = [&](double a0, double b0) {
    if (!(b0 > a0)) return 0.0;
    const auto h = [&](double v) {
      const double x = std::pow(v, 1.0 / t);
      return g(x) * std::pow(1.0 - x, t - 1.0);
    };
    return norm * integrate(h, std::pow(a0, t), std::pow(b0, t), 1e-13);
  };
  // upper side: x in [a0, b0] >= 1/2, w = (1-x)^t (descending in x)
  const auto upper_piece = [&](double a0, double b0) {
    if (!(b0 > a0)) return 0.0;
    const auto h = [&](double w) {
      const double x = 1.0 - std::pow(w, 1.0 / t);
      return g(x) * std::pow(x, t - 1.0);
    };
    return norm * integrate(h, std::pow(1.0 - b0, t), std::pow(1.0 - a0, t), 1e-13);
  };

  double total = 0.0;
  total += lower_piece(std::min(a, 0.5), std::min(b, 0.5));
  total += upper_piece(std::max(a, 0.5), std::max(b, 0.5));
  return total;
}

// Quadrature oracles for the symmetric Beta family.
inline double beta_cdf_quad(double t, double x) {
  return beta_weighted_integral(t, 0.0, x, [](double) { return 1.0; });
}
inline double beta_partial_expectation_quad(double t, double a, double b) {
  return beta_weighted_integral(t, a, b, [](double x) { return x; });
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}
inline double second_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Self-cleaning temporary directory for file-based tests.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 gen(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("screenopt-test-" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string path() const { return path_.string(); }

  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    const std::string p = file(name);
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

// Deterministic case generator for property tests (independent of the
// library's RNG).
class CaseRng {
 public:
  explicit CaseRng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace testsupport
