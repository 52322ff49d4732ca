#pragma once

// Bottom of the radial Dirichlet spectrum of -(1/w)(w u')' on [r_min, r_max],
// with w the geodesic-sphere density of quaternionic hyperbolic space.
//
// Second-order finite differences on a uniform mesh give the pencil
// A u = lambda B u with A symmetric tridiagonal and B = diag(w). The smallest
// eigenvalue is bracketed by Sturm counts (the number of negative pivots of
// A - sigma B), then refined by inverse iteration from just below it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkcomp/comparison.hpp"

namespace qkcomp::spectral {

class EstimationFailure : public std::runtime_error {
 public:
  EstimationFailure(const std::string& what, std::vector<double> last) : std::runtime_error(what), last_iterate(std::move(last)) {}
  std::vector<double> last_iterate;
};

struct RadialProblem {
  int n = 2;
  double r_min = 1e-3;
  double r_max = 12;
  int mesh_points = 20000;             // interior nodes
  std::function<double(double)> log_weight;  // empty: the delta = -1 model density

  void validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(r_min > 0) || !(r_min < r_max)) throw std::invalid_argument("need 0 < r_min < r_max");
    if (mesh_points < 64) throw std::invalid_argument("mesh_points must be at least 64");
  }

  [[nodiscard]] double log_w(double r) const {
    if (log_weight) return log_weight(r);
    return comparison::log_area_density(comparison::ModelGeometry(n, -1), r);
  }

  [[nodiscard]] double step() const { return (r_max - r_min) / (mesh_points + 1); }
  [[nodiscard]] double node(int i) const { return r_min + (i + 1) * step(); }  // i = 0..mesh_points-1
};

/// Weight r^{4n-1} of flat R^{4n}, for sanity runs.
inline std::function<double(double)> flat_log_weight(int n) {
  return [n](double r) { return (4 * n - 1) * std::log(r); };
}

/// The discretized pencil; weights are scaled by their maximum.
struct Pencil {
  std::vector<double> diag;  // A_ii
  std::vector<double> off;   // A_{i,i+1}
  std::vector<double> mass;  // B_ii
  [[nodiscard]] std::size_t size() const { return diag.size(); }
};

inline Pencil assemble(const RadialProblem& p) {
  p.validate();
  const int m = p.mesh_points;
  const double h = p.step();
  std::vector<double> log_half(static_cast<std::size_t>(m + 1)), log_node(static_cast<std::size_t>(m));
  for (int i = 0; i <= m; ++i) log_half[static_cast<std::size_t>(i)] = p.log_w(p.r_min + (i + 0.5) * h);
  for (int i = 0; i < m; ++i) log_node[static_cast<std::size_t>(i)] = p.log_w(p.node(i));
  const double top = std::max(*std::max_element(log_half.begin(), log_half.end()), *std::max_element(log_node.begin(), log_node.end()));
  Pencil a;
  a.diag.resize(static_cast<std::size_t>(m));
  a.off.resize(static_cast<std::size_t>(m - 1));
  a.mass.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double left = std::exp(log_half[k] - top), right = std::exp(log_half[k + 1] - top);
    a.diag[k] = (left + right) / (h * h);
    if (i + 1 < m) a.off[k] = -right / (h * h);
    a.mass[k] = std::exp(log_node[k] - top);
  }
  return a;
}

/// Number of pencil eigenvalues below sigma.
inline int sturm_count(const Pencil& a, double sigma) {
  int negative = 0;
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = a.diag[i] - sigma * a.mass[i] - (i == 0 ? 0.0 : a.off[i - 1] * a.off[i - 1] / d);
    if (d == 0) d = -std::numeric_limits<double>::epsilon() * std::abs(a.diag[i]);
    if (d < 0) ++negative;
  }
  return negative;
}

/// Solves (A - sigma B) x = rhs by elimination along the tridiagonal.
inline std::vector<double> shifted_solve(const Pencil& a, double sigma, const std::vector<double>& rhs) {
  const std::size_t m = a.size();
  std::vector<double> c(m), d(m), x(m);
  double b = a.diag[0] - sigma * a.mass[0];
  c[0] = m > 1 ? a.off[0] / b : 0;
  d[0] = rhs[0] / b;
  for (std::size_t i = 1; i < m; ++i) {
    b = a.diag[i] - sigma * a.mass[i] - a.off[i - 1] * c[i - 1];
    c[i] = i + 1 < m ? a.off[i] / b : 0;
    d[i] = (rhs[i] - a.off[i - 1] * d[i - 1]) / b;
  }
  x[m - 1] = d[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

inline std::vector<double> apply_a(const Pencil& a, const std::vector<double>& u) {
  const std::size_t m = a.size();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = a.diag[i] * u[i];
    if (i > 0) y[i] += a.off[i - 1] * u[i - 1];
    if (i + 1 < m) y[i] += a.off[i] * u[i + 1];
  }
  return y;
}

/// u^T A u / u^T B u for a vector on the interior nodes.
inline double rayleigh_quotient(const Pencil& a, const std::vector<double>& u) {
  if (u.size() != a.size()) throw std::invalid_argument("trial vector has the wrong length");
  const auto au = apply_a(a, u);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += u[i] * au[i];
    den += u[i] * u[i] * a.mass[i];
  }
  if (!(den > 0)) throw std::invalid_argument("trial has zero weighted norm");
  return num / den;
}

struct SpectralEstimate {
  double lambda1 = 0;
  double residual = 0;
  int mesh_points = 0;
  double r_max = 0;
  int iterations = 0;
  std::vector<double> eigenvector;  // interior nodes, unit B-norm
};

inline SpectralEstimate lambda1_dirichlet(const RadialProblem& p, double tolerance = 1e-8, int max_iterations = 10000) {
  const Pencil a = assemble(p);
  const std::size_t m = a.size();

  // bracket the smallest eigenvalue: A is positive definite, so none lie below 0
  double lo = 0, hi = 1;
  while (sturm_count(a, hi) == 0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300) throw EstimationFailure("no eigenvalue found", {});
  }
  for (int k = 0; k < 200 && hi - lo > 1e-12 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(a, mid) == 0 ? lo : hi) = mid;
  }
  const double sigma = lo - 1e-9 * hi;

  std::vector<double> u(m, 1.0);
  SpectralEstimate est;
  est.mesh_points = p.mesh_points;
  est.r_max = p.r_max;
  for (int it = 1; it <= max_iterations; ++it) {
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = a.mass[i] * u[i];
    u = shifted_solve(a, sigma, rhs);
    double norm = 0;
    for (std::size_t i = 0; i < m; ++i) norm += u[i] * u[i] * a.mass[i];
    norm = std::sqrt(norm);
    for (auto& x : u) x /= norm;
    const auto au = apply_a(a, u);
    double lambda = 0;
    for (std::size_t i = 0; i < m; ++i) lambda += u[i] * au[i];
    double res = 0, bu = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = au[i] - lambda * a.mass[i] * u[i];
      res += r * r;
      bu += a.mass[i] * u[i] * a.mass[i] * u[i];
    }
    est.lambda1 = lambda;
    est.residual = std::sqrt(res / bu);
    est.iterations = it;
    if (est.residual <= tolerance) {
      if (u[m / 2] < 0)
        for (auto& x : u) x = -x;
      est.eigenvector = std::move(u);
      return est;
    }
  }
  throw EstimationFailure("inverse iteration did not converge", u);
}

/// Continuous Rayleigh quotient int u'^2 w / int u^2 w over [r_min, r_max].
inline double rayleigh_quotient(const RadialProblem& p, const std::function<double(double)>& u, const std::function<double(double)>& du) {
  p.validate();
  if (std::abs(u(p.r_max)) > 1e-12) throw std::invalid_argument("trial must vanish at r_max");
  const double ref = p.log_w(p.r_max);
  auto w = [&](double r) { return std::exp(p.log_w(r) - ref); };
  double num = 0, den = 0;
  // unit pieces keep the adaptive rule well inside its depth limit
  for (double a = p.r_min; a < p.r_max; a += 1.0) {
    const double b = std::min(a + 1.0, p.r_max);
    num += comparison::integrate([&](double r) { return du(r) * du(r) * w(r); }, a, b);
    den += comparison::integrate([&](double r) { return u(r) * u(r) * w(r); }, a, b);
  }
  if (!(den > 0)) throw std::invalid_argument("trial has zero weighted norm");
  return num / den;
}

/// u = e^{-k r} (1 - r / r_max).
inline double exponential_trial_quotient(const RadialProblem& p, double k) {
  const double R = p.r_max;
  return rayleigh_quotient(
      p, [=](double r) { return std::exp(-k * r) * (1 - r / R); },
      [=](double r) { return -k * std::exp(-k * r) * (1 - r / R) - std::exp(-k * r) / R; });
}

struct StudyRow {
  double r_max;
  int mesh_points;
  double lambda1;
  double gap;  // lambda1 - (2n+1)^2
  double residual;
};

/// lambda1 for each r_max at one mesh spacing: the last entry gets `mesh`
/// interior points and the others proportionally fewer.
inline std::vector<StudyRow> convergence_study(int n, const std::vector<double>& r_max_list, int mesh, double r_min = 1e-3) {
  if (r_max_list.empty()) return {};
  for (std::size_t i = 1; i < r_max_list.size(); ++i)
    if (!(r_max_list[i] > r_max_list[i - 1])) throw std::invalid_argument("r_max list must increase");
  const double h = (r_max_list.back() - r_min) / (mesh + 1);
  const double target = (2.0 * n + 1) * (2.0 * n + 1);
  std::vector<StudyRow> rows;
  for (double R : r_max_list) {
    RadialProblem p{n, r_min, R, static_cast<int>(std::lround((R - r_min) / h)) - 1, {}};
    const auto e = lambda1_dirichlet(p);
    rows.push_back({R, p.mesh_points, e.lambda1, e.lambda1 - target, e.residual});
  }
  return rows;
}

/// lambda1 on meshes with step h, h/2, h/4, ...; successive differences
/// should shrink by about 4 for a second-order scheme.
inline std::vector<double> refinement_sequence(RadialProblem p, int levels) {
  std::vector<double> out;
  for (int k = 0; k < levels; ++k) {
    out.push_back(lambda1_dirichlet(p).lambda1);
    p.mesh_points = 2 * p.mesh_points + 1;
  }
  return out;
}

}  // namespace qkcomp::spectral
