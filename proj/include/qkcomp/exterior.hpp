#pragma once

// Exact exterior algebra over R^dim with the canonical orthonormal basis and
// orientation. Basis p-forms are keyed by bitmasks (bit k <-> theta^{k+1}),
// so dim is capped at 32. Indices in this API are 0-based.

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkcomp/random.hpp"
#include "qkcomp/rational.hpp"

namespace qkcomp::exterior {

using Mask = std::uint32_t;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct InnerSpace {
  int dim = 1;
  explicit InnerSpace(int d) : dim(d) {
    if (d < 1 || d > 32) throw std::invalid_argument("dimension must be in 1..32");
  }
};

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask mask_of(const std::vector<int>& indices) {
  Mask m = 0;
  for (int i : indices) m |= Mask{1} << i;
  return m;
}

inline std::vector<int> indices_of(Mask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1U) out.push_back(i);
  return out;
}

/// (-1)^{#{(i,j) : i in a, j in b, i > j}}: the sign of e_a ^ e_b after sorting.
inline int merge_sign(Mask a, Mask b) {
  int inversions = 0;
  for (Mask rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    const Mask above = j >= 31 ? Mask{0} : ~((Mask{2} << j) - 1);
    inversions += popcount(a & above);
  }
  return (inversions & 1) ? -1 : 1;
}

class Form {
 public:
  using Terms = std::map<Mask, Rational>;

  Form(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1 || dim > 32) throw std::invalid_argument("dimension must be in 1..32");
  }

  static Form scalar(int dim, const Rational& c) {
    Form f(dim, 0);
    f.add_term(0, c);
    return f;
  }

  /// c * theta^{i1} ^ theta^{i2} ^ ... in the order given (sign applied when sorting).
  static Form monomial(int dim, const std::vector<int>& indices, const Rational& c = 1) {
    Form f(dim, static_cast<int>(indices.size()));
    Mask m = 0;
    int sign = 1;
    for (int i : indices) {
      if (i < 0 || i >= dim) throw std::out_of_range("basis index out of range");
      const Mask bit = Mask{1} << i;
      if (m & bit) return f;
      sign *= merge_sign(m, bit);
      m |= bit;
    }
    f.add_term(m, sign > 0 ? c : Rational(-c));
    return f;
  }

  static Form one_form(const std::vector<Rational>& coefficients) {
    Form f(static_cast<int>(coefficients.size()), 1);
    for (std::size_t k = 0; k < coefficients.size(); ++k) f.add_term(Mask{1} << k, coefficients[k]);
    return f;
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  [[nodiscard]] Rational coefficient(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Coefficient on theta^{i1}^...^theta^{ip} with the indices in the given order.
  [[nodiscard]] Rational coefficient(const std::vector<int>& indices) const {
    const Form unit = monomial(dim_, indices);
    if (unit.is_zero()) return 0;
    const auto& [m, s] = *unit.terms_.begin();
    return s * coefficient(m);
  }

  void add_term(Mask m, const Rational& c) {
    if (popcount(m) != degree_) throw std::invalid_argument("term degree does not match form degree");
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  Form& operator+=(const Form& other) {
    require_compatible(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }
  Form& operator-=(const Form& other) {
    require_compatible(other);
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
  }
  Form& operator*=(const Rational& s) {
    if (sgn(s) == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) { return a *= Rational(-1); }
  friend Form operator*(const Rational& s, Form a) { return a *= s; }

  /// Zero forms compare equal whatever their nominal degree.
  friend bool operator==(const Form& a, const Form& b) {
    if (a.dim_ != b.dim_) return false;
    if (a.is_zero() && b.is_zero()) return true;
    return a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  // A zero form adopts the degree of whatever is added to it.
  void require_compatible(const Form& other) {
    if (other.dim_ != dim_) throw DimensionMismatch("forms live in different dimensions");
    if (other.degree_ == degree_ || other.is_zero()) return;
    if (!is_zero()) throw std::invalid_argument("adding forms of different degree");
    degree_ = other.degree_;
  }

  int dim_;
  int degree_;
  Terms terms_;
};

using Vector = std::vector<Rational>;

inline Vector basis_vector(int dim, int k) {
  Vector v(static_cast<std::size_t>(dim), Rational(0));
  v.at(static_cast<std::size_t>(k)) = 1;
  return v;
}

inline Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vectors of different length");
  Rational s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// The 1-form metrically dual to v.
inline Form dual(const Vector& v) { return Form::one_form(v); }

inline Form wedge(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge of forms in different dimensions");
  Form out(a.dim(), a.degree() + b.degree());
  if (a.degree() + b.degree() > a.dim()) return out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      const Rational c = ca * cb;
      out.add_term(ma | mb, merge_sign(ma, mb) > 0 ? c : Rational(-c));
    }
  return out;
}

/// *e_I = sign(I, I^c) e_{I^c}.
inline Form hodge_star(const Form& a) {
  const int dim = a.dim();
  const Mask full = dim == 32 ? ~Mask{0} : (Mask{1} << dim) - 1;
  Form out(dim, dim - a.degree());
  for (const auto& [m, c] : a.terms()) {
    const Mask rest = full & ~m;
    out.add_term(rest, merge_sign(m, rest) > 0 ? c : Rational(-c));
  }
  return out;
}

/// l(v) e_I = sum_k v_k (-1)^{position of k in I} e_{I \ k}.
inline Form interior(const Vector& v, const Form& a) {
  if (static_cast<int>(v.size()) != a.dim()) throw DimensionMismatch("vector and form dimensions differ");
  Form out(a.dim(), a.degree() - 1);
  if (a.degree() == 0) return out;
  for (const auto& [m, c] : a.terms()) {
    int position = 0;
    for (Mask rest = m; rest != 0; rest &= rest - 1, ++position) {
      const int k = std::countr_zero(rest);
      const Rational& vk = v[static_cast<std::size_t>(k)];
      if (sgn(vk) == 0) continue;
      const Rational term = c * vk;
      out.add_term(m & ~(Mask{1} << k), (position & 1) ? Rational(-term) : term);
    }
  }
  return out;
}

inline Form ext_mult(const Form& theta, const Form& a) {
  if (theta.degree() != 1) throw std::invalid_argument("exterior multiplication needs a 1-form");
  return wedge(theta, a);
}

/// Induced inner product: basis monomials are orthonormal.
inline Rational inner(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("inner product of forms in different dimensions");
  Rational s = 0;
  for (const auto& [m, c] : a.terms()) {
    auto it = b.terms().find(m);
    if (it != b.terms().end()) s += c * it->second;
  }
  return s;
}

inline std::string to_string(const Form& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    if (!first) os << " + ";
    first = false;
    os << to_fraction_string(c);
    if (m == 0) continue;
    os << " ";
    bool lead = true;
    for (int k : indices_of(m)) {
      os << (lead ? "" : "^") << "e" << (k + 1);
      lead = false;
    }
  }
  return os.str();
}

inline std::string to_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + to_fraction_string(v[k]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Random inputs

inline Vector random_vector(Rng& rng, int dim) {
  Vector v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = rng.small_rational();
  return v;
}

/// Every basis monomial of the given degree gets an independent small rational.
inline Form random_form(Rng& rng, int dim, int degree) {
  Form f(dim, degree);
  const Mask limit = dim == 32 ? ~Mask{0} : (Mask{1} << dim) - 1;
  for (Mask m = 0;; ++m) {
    if (popcount(m) == degree) f.add_term(m, rng.small_rational());
    if (m == limit) break;
  }
  return f;
}

// ---------------------------------------------------------------------------
// The six operator laws

/// Operator table used by the identity checker, so a deliberately broken
/// implementation can be swapped in to confirm the checker notices.
struct ExteriorOps {
  std::function<Form(const Form&)> star = hodge_star;
  std::function<Form(const Vector&, const Form&)> contract = interior;
  std::function<Form(const Form&, const Form&)> multiply = ext_mult;
};

struct IdentityResult {
  int id = 0;
  std::string law;
  int samples = 0;
  bool pass = true;
  std::string counterexample;
};

struct IdentityReport {
  int dim = 0;
  int degree = 0;
  std::vector<IdentityResult> identities;

  [[nodiscard]] bool passed() const {
    for (const auto& r : identities)
      if (!r.pass) return false;
    return true;
  }
};

inline int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

inline IdentityReport check_star_identities(int dim, int degree, int trials, std::uint64_t seed,
                                            const ExteriorOps& ops = {}) {
  if (dim < 1 || dim > 12 || degree < 1 || degree > dim)
    throw std::invalid_argument("identity check needs 1 <= degree <= dim <= 12");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const int p = degree;
  const int n = dim;
  IdentityReport report{dim, degree, {}};
  report.identities = {
      {1, "**xi = (-1)^{p(n-p)} xi", 0, true, {}},
      {2, "*e(theta)xi = (-1)^p l(v)*xi", 0, true, {}},
      {3, "e(theta)*xi = (-1)^{p-1} *l(v)xi", 0, true, {}},
      {4, "*e(theta)*xi = (-1)^{(p-1)(n-p)} l(v)xi", 0, true, {}},
      {5, "l(v)e(theta')xi + e(theta')l(v)xi = 0 for v orthogonal to v'", 0, true, {}},
      {6, "l(v)e(theta)xi + e(theta)l(v)xi = <v,v> xi", 0, true, {}},
  };

  Rng rng(seed);
  auto record = [](IdentityResult& r, const Form& lhs, const Form& rhs, const std::string& inputs) {
    ++r.samples;
    if (r.pass && !(lhs == rhs)) {
      r.pass = false;
      r.counterexample = inputs + "; lhs = " + to_string(lhs) + "; rhs = " + to_string(rhs);
    }
  };

  for (int t = 0; t < trials; ++t) {
    const Form xi = random_form(rng, n, p);
    Vector v = random_vector(rng, n);
    if (sgn(dot(v, v)) == 0) v = basis_vector(n, 0);
    const Form theta = dual(v);
    const std::string inputs = "xi = " + to_string(xi) + ", v = " + to_string(v);

    const Form star_xi = ops.star(xi);
    record(report.identities[0], ops.star(star_xi), Rational(parity_sign(long{p} * (n - p))) * xi, inputs);
    record(report.identities[1], ops.star(ops.multiply(theta, xi)),
           Rational(parity_sign(p)) * ops.contract(v, star_xi), inputs);
    record(report.identities[2], ops.multiply(theta, star_xi),
           Rational(parity_sign(p - 1)) * ops.star(ops.contract(v, xi)), inputs);
    record(report.identities[3], ops.star(ops.multiply(theta, star_xi)),
           Rational(parity_sign(long{p - 1} * (n - p))) * ops.contract(v, xi), inputs);

    // v' = w minus its component along v.
    const Vector w = random_vector(rng, n);
    Vector v2 = w;
    const Rational along = dot(w, v) / dot(v, v);
    for (int k = 0; k < n; ++k) v2[k] -= along * v[k];
    const Form theta2 = dual(v2);
    record(report.identities[4],
           ops.contract(v, ops.multiply(theta2, xi)) + ops.multiply(theta2, ops.contract(v, xi)), Form(n, p),
           inputs + ", v' = " + to_string(v2));

    record(report.identities[5], ops.contract(v, ops.multiply(theta, xi)) + ops.multiply(theta, ops.contract(v, xi)),
           dot(v, v) * xi, inputs);
  }
  return report;
}

}  // namespace qkcomp::exterior
