#pragma once

// Riccati barriers and the model-space comparison quantities: the Laplacian of
// the distance function, its line/transversal Hessian blocks, area density,
// volume growth and the eigenvalue constants.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qkcomp/rational.hpp"
#include "qkcomp/report.hpp"

namespace qkcomp::comparison {

// ---------------------------------------------------------------------------
// Riccati barriers for u' + u^2/m + mK = 0 with u ~ m/t at 0+.

struct RiccatiProblem {
  Rational m;
  Rational K;
};

enum class BarrierKind { Cot, Coth, Reciprocal };

/// a*cot(bt) or a*coth(bt) with a = m sqrt|K| and b = sqrt|K|, or m/t.
/// Only |K| is stored (as the radicand), so the square root stays symbolic.
struct ComparisonFunction {
  BarrierKind kind = BarrierKind::Reciprocal;
  Rational m;
  Rational radicand;  // |K|; zero for the reciprocal

  [[nodiscard]] double b() const { return std::sqrt(radicand.get_d()); }
  [[nodiscard]] double a() const { return m.get_d() * b(); }

  [[nodiscard]] double operator()(double t) const {
    switch (kind) {
      case BarrierKind::Cot: return a() / std::tan(b() * t);
      case BarrierKind::Coth: return a() / std::tanh(b() * t);
      case BarrierKind::Reciprocal: break;
    }
    return m.get_d() / t;
  }

  [[nodiscard]] double derivative(double t) const {
    switch (kind) {
      case BarrierKind::Cot: {
        const double s = std::sin(b() * t);
        return -a() * b() / (s * s);
      }
      case BarrierKind::Coth: {
        const double s = std::sinh(b() * t);
        return -a() * b() / (s * s);
      }
      case BarrierKind::Reciprocal: break;
    }
    return -m.get_d() / (t * t);
  }

  /// First pole of the cot barrier (the end of its domain), infinity otherwise.
  [[nodiscard]] double domain_end() const {
    return kind == BarrierKind::Cot ? std::numbers::pi / b() : std::numeric_limits<double>::infinity();
  }

  [[nodiscard]] std::string describe() const {
    if (kind == BarrierKind::Reciprocal) return to_compact_string(m) + "/t";
    const char* fn = kind == BarrierKind::Cot ? "cot" : "coth";
    if (auto r = exact_sqrt(radicand))
      return to_compact_string(m * *r) + "*" + fn + "(" + to_compact_string(*r) + "*t)";
    const std::string root = "sqrt(" + to_compact_string(radicand) + ")";
    return to_compact_string(m) + "*" + root + "*" + fn + "(" + root + "*t)";
  }
};

inline ComparisonFunction riccati_barrier(const RiccatiProblem& p) {
  if (sgn(p.m) <= 0) throw std::domain_error("Riccati weight m must be positive");
  if (sgn(p.K) > 0) return {BarrierKind::Cot, p.m, p.K};
  if (sgn(p.K) < 0) return {BarrierKind::Coth, p.m, Rational(-p.K)};
  return {BarrierKind::Reciprocal, p.m, 0};
}

/// u' + u^2/m + mK written as c0 + c2 X^2 with X = cot, coth or 1/t.
/// With a = m r, b = r and r^2 = radicand: ab = m*radicand and a^2/m = m*radicand.
struct SymbolicResidual {
  Rational constant;
  Rational quadratic;
  [[nodiscard]] bool is_zero() const { return sgn(constant) == 0 && sgn(quadratic) == 0; }
};

inline SymbolicResidual symbolic_residual(const ComparisonFunction& u, const RiccatiProblem& p) {
  const Rational mK = p.m * p.K;
  if (u.kind == BarrierKind::Reciprocal) {
    // u = m X, u' = -m X^2
    return {mK, Rational(-u.m + u.m * u.m / p.m)};
  }
  const Rational ab = u.m * u.radicand;             // a*b
  const Rational a2_over_m = u.m * u.m * u.radicand / p.m;
  if (u.kind == BarrierKind::Cot) {
    // u' = -ab (1 + X^2)
    return {Rational(-ab + mK), Rational(-ab + a2_over_m)};
  }
  // u' = -ab (X^2 - 1)
  return {Rational(ab + mK), Rational(-ab + a2_over_m)};
}

inline double numeric_residual(const ComparisonFunction& u, const RiccatiProblem& p, double t) {
  const double v = u(t);
  return u.derivative(t) + v * v / p.m.get_d() + p.m.get_d() * p.K.get_d();
}

struct Trajectory {
  std::vector<double> t;
  std::vector<double> u;
  bool blew_up = false;
};

/// Classical RK4 on the equality ODE u' = -u^2/m - mK.
inline Trajectory integrate_riccati(const RiccatiProblem& p, double u0, double t0, double t1, int steps) {
  if (!(t0 > 0) || !(t1 > t0)) throw std::invalid_argument("need 0 < t0 < t1");
  if (steps < 100) throw std::invalid_argument("need at least 100 steps");
  const auto barrier = riccati_barrier(p);
  if (u0 > barrier(t0) + 1e-12 * std::max(1.0, std::abs(barrier(t0))))
    throw std::invalid_argument("initial value lies above the barrier");
  const double m = p.m.get_d(), mK = m * p.K.get_d();
  auto rhs = [&](double u) { return -u * u / m - mK; };
  const double h = (t1 - t0) / steps;
  Trajectory tr;
  tr.t.reserve(static_cast<std::size_t>(steps) + 1);
  tr.u.reserve(static_cast<std::size_t>(steps) + 1);
  double u = u0;
  tr.t.push_back(t0);
  tr.u.push_back(u);
  for (int k = 1; k <= steps; ++k) {
    const double k1 = rhs(u), k2 = rhs(u + 0.5 * h * k1), k3 = rhs(u + 0.5 * h * k2), k4 = rhs(u + h * k3);
    u += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(u) || std::abs(u) > 1e9) {
      tr.blew_up = true;
      break;
    }
    tr.t.push_back(t0 + k * h);
    tr.u.push_back(u);
  }
  return tr;
}

/// Largest u(t) - barrier(t) along a trajectory.
inline double max_excess_over_barrier(const Trajectory& tr, const ComparisonFunction& barrier) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.t.size(); ++k) worst = std::max(worst, tr.u[k] - barrier(tr.t[k]));
  return worst;
}

/// The two Riccati instances behind the comparison: the quaternionic-line
/// block (m = 3, K = 4 delta) and each transversal block (m = 4, K = delta).
inline RiccatiProblem line_problem(int delta) { return {3, 4 * delta}; }
inline RiccatiProblem transversal_problem(int delta) { return {4, delta}; }

// ---------------------------------------------------------------------------
// Model geometry

struct ModelGeometry {
  int n = 2;
  int delta = -1;
  ModelGeometry(int n_, int delta_) : n(n_), delta(delta_) {
    if (n_ < 2) throw std::invalid_argument("n must be at least 2");
    if (delta_ < -1 || delta_ > 1) throw std::invalid_argument("delta must be -1, 0 or 1");
  }
};

inline double domain_end(const ModelGeometry& g) {
  return g.delta == 1 ? std::numbers::pi / 2 : std::numeric_limits<double>::infinity();
}

inline void check_radius(const ModelGeometry& g, double r) {
  if (!(r > 0)) throw std::domain_error("radius must be positive");
  if (g.delta == 1 && !(r < std::numbers::pi / 2)) throw std::domain_error("radius must be below pi/2 when delta = 1");
}

/// c * f(k r) with f one of cot, coth, 1/r.
struct Term {
  BarrierKind fn;
  Rational k;
  friend auto operator<=>(const Term& a, const Term& b) {
    if (a.fn != b.fn) return a.fn <=> b.fn;
    return cmp(a.k, b.k) <=> 0;
  }
  friend bool operator==(const Term& a, const Term& b) { return a.fn == b.fn && a.k == b.k; }
};
using TermSum = std::map<Term, Rational>;

inline void add(TermSum& s, const Term& t, const Rational& c) {
  auto& v = s[t];
  v += c;
  if (sgn(v) == 0) s.erase(t);
}

inline double evaluate(const TermSum& s, double r) {
  double total = 0;
  for (const auto& [t, c] : s) {
    const double x = t.k.get_d() * r;
    const double f = t.fn == BarrierKind::Cot ? 1 / std::tan(x) : t.fn == BarrierKind::Coth ? 1 / std::tanh(x) : 1 / x;
    total += c.get_d() * f;
  }
  return total;
}

/// Closed form of the distance Laplacian in each model, written out directly:
/// 6 coth 2r + 4(n-1) coth r, (4n-1)/r, 6 cot 2r + 4(n-1) cot r.
inline TermSum laplacian_closed_form(const ModelGeometry& g) {
  TermSum s;
  if (g.delta == 0) {
    add(s, {BarrierKind::Reciprocal, 1}, 4 * g.n - 1);
    return s;
  }
  const BarrierKind fn = g.delta < 0 ? BarrierKind::Coth : BarrierKind::Cot;
  add(s, {fn, 2}, 6);
  add(s, {fn, 1}, 4 * (g.n - 1));
  return s;
}

/// The block barriers as returned by riccati_barrier, converted to terms.
inline TermSum barrier_terms(const ComparisonFunction& f) {
  TermSum s;
  if (f.kind == BarrierKind::Reciprocal) {
    add(s, {BarrierKind::Reciprocal, 1}, f.m);
    return s;
  }
  const auto r = exact_sqrt(f.radicand);
  if (!r) throw std::domain_error("barrier parameter is not rational");
  add(s, {f.kind, *r}, f.m * *r);
  return s;
}

struct BlockTerms {
  TermSum line;
  TermSum transversal;
};

inline BlockTerms block_terms(const ModelGeometry& g) {
  return {barrier_terms(riccati_barrier(line_problem(g.delta))),
          barrier_terms(riccati_barrier(transversal_problem(g.delta)))};
}

/// Exact check: closed form = line block + (n-1) * transversal block.
inline bool block_sum_identity(const ModelGeometry& g) {
  const auto b = block_terms(g);
  TermSum sum = b.line;
  for (const auto& [t, c] : b.transversal) add(sum, t, (g.n - 1) * c);
  return sum == laplacian_closed_form(g);
}

/// Coefficient printed for the flat case in the source statement, kept for reports.
inline int printed_flat_coefficient(int n) { return 4 * n - 3; }

inline double laplacian_distance(const ModelGeometry& g, double r) {
  check_radius(g, r);
  return evaluate(laplacian_closed_form(g), r);
}

struct LaplacianTerms {
  double line_block;
  double transversal_block;
  double total;
};

inline LaplacianTerms laplacian_terms(const ModelGeometry& g, double r) {
  check_radius(g, r);
  const auto b = block_terms(g);
  const double line = evaluate(b.line, r), trans = evaluate(b.transversal, r);
  return {line, trans, line + (g.n - 1) * trans};
}

/// (line-block bound, transversal-block bound).
inline std::pair<double, double> hessian_block_bounds(const ModelGeometry& g, double r) {
  const auto t = laplacian_terms(g, r);
  return {t.line_block, t.transversal_block};
}

/// J(r) = (sinh(2r)/2)^3 sinh(r)^{4(n-1)}, normalised so that J ~ r^{4n-1} at 0.
inline double log_area_density(const ModelGeometry& g, double r) {
  check_radius(g, r);
  const double k = 4.0 * (g.n - 1);
  switch (g.delta) {
    case -1: {
      // log sinh x = x + log1p(-e^{-2x}) - log 2, stable for large x
      auto log_sinh = [](double x) { return x < 20 ? std::log(std::sinh(x)) : x + std::log1p(-std::exp(-2 * x)) - std::numbers::ln2; };
      return 3 * (log_sinh(2 * r) - std::numbers::ln2) + k * log_sinh(r);
    }
    case 1: return 3 * std::log(std::sin(2 * r) / 2) + k * std::log(std::sin(r));
    default: return (4.0 * g.n - 1) * std::log(r);
  }
}

inline double area_density(const ModelGeometry& g, double r) { return std::exp(log_area_density(g, r)); }

/// Area of the unit sphere S^{4n-1}: 2 pi^{2n} / Gamma(2n).
inline double unit_sphere_area(int n) { return 2 * std::pow(std::numbers::pi, 2 * n) / std::tgamma(2.0 * n); }

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

inline double volume(const ModelGeometry& g, double r) {
  if (!(r > 0)) throw std::domain_error("radius must be positive");
  if (g.delta == 1 && r > std::numbers::pi / 2) throw std::domain_error("radius beyond pi/2 when delta = 1");
  const double end = g.delta == 1 ? std::min(r, std::numbers::pi / 2) : r;
  auto J = [&](double s) { return s <= 0 || (g.delta == 1 && s >= std::numbers::pi / 2) ? 0.0 : area_density(g, s); };
  return unit_sphere_area(g.n) * integrate(J, 0, end);
}

struct VolumeRatioResult {
  double ratio = 0;        // V_x(r2) / V_x(r1)
  double model_ratio = 0;  // V(r2) / V(r1) for the model
  bool hypothesis_ok = true;
  bool holds = false;
};

/// Compares the volume ratio of a density against the model. The hypothesis
/// density/J nonincreasing is checked on `samples` points of (0, r2].
inline VolumeRatioResult volume_ratio_check(const std::function<double(double)>& density, const ModelGeometry& g,
                                            double r1, double r2, int samples = 200) {
  if (!(r1 > 0) || r2 < r1) throw std::invalid_argument("need 0 < r1 <= r2");
  check_radius(g, r2);
  VolumeRatioResult out;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= samples; ++k) {
    const double r = r2 * k / samples;
    const double q = density(r) / area_density(g, r);
    if (q > previous * (1 + 1e-12)) out.hypothesis_ok = false;
    previous = q;
  }
  const double v1 = integrate(density, 0, r1), v2 = integrate(density, 0, r2);
  auto J = [&](double s) { return s <= 0 ? 0.0 : area_density(g, s); };
  const double m1 = integrate(J, 0, r1), m2 = integrate(J, 0, r2);
  out.ratio = v2 / v1;
  out.model_ratio = m2 / m1;
  out.holds = out.ratio <= out.model_ratio * (1 + 1e-8);
  return out;
}

/// Five-point central difference of log J minus the closed-form Laplacian.
inline double log_derivative_error(const ModelGeometry& g, double r) {
  const double room = g.delta == 1 ? std::min(r, std::numbers::pi / 2 - r) : r;
  const double h = 1e-3 * room;
  auto L = [&](double x) { return log_area_density(g, x); };
  const double d = (L(r - 2 * h) - 8 * L(r - h) + 8 * L(r + h) - L(r + 2 * h)) / (12 * h);
  return d - laplacian_distance(g, r);
}

// ---------------------------------------------------------------------------

struct EigenvalueBounds {
  Rational quaternionic;     // (2n+1)^2
  Rational real_cheng;       // (4n-1)(n+2)
  Rational kahler_reference;  // n^2
};

inline EigenvalueBounds eigenvalue_bounds(int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  const Rational d = 4 * n;
  // Cheng's (d-1)^2/4 for Ric >= -(d-1), rescaled to Ric >= -4(n+2).
  const Rational cheng = (d - 1) * (d - 1) / 4 * (Rational(4 * (n + 2)) / (d - 1));
  return {Rational((2 * n + 1) * (2 * n + 1)), cheng, Rational(n * n)};
}

}  // namespace qkcomp::comparison
