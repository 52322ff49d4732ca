#pragma once

// The solvable Lie group model of quaternionic hyperbolic space, done in
// exact arithmetic. Left-invariant orthonormal frame e_0..e_{4n-1} in the
// Interleaved layout: e_0 = d/dt, z = span(e_1, e_2, e_3) = (I, J, K) e_0,
// v = the remaining lines. All indices are 0-based; the curvature tables
// below are written 1-based and converted on entry.
//
// Curvature convention: R(a, b, c, d) = <R(e_a, e_b) e_d, e_c>, so the
// sectional curvature is K(x, y) = R(x, y, x, y).

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qkcomp/exterior.hpp"
#include "qkcomp/matrix.hpp"
#include "qkcomp/quaternionic.hpp"
#include "qkcomp/random.hpp"
#include "qkcomp/rational.hpp"
#include "qkcomp/report.hpp"

namespace qkcomp::model {

using exterior::Form;
using exterior::Vector;
using quaternionic::Layout;
using quaternionic::QuaternionicFrame;
using quaternionic::Structure;

class ModelConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <int Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int dim) : dim_(dim), data_(size_for(dim), Rational(0)) {}

  [[nodiscard]] int dim() const { return dim_; }

  template <class... I>
  Rational& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({idx...})];
  }
  template <class... I>
  const Rational& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({idx...})];
  }

  friend bool operator==(const Tensor& a, const Tensor& b) { return a.dim_ == b.dim_ && a.data_ == b.data_; }

  /// Nonzero entries with their index tuples, in lexicographic order.
  [[nodiscard]] std::vector<std::pair<std::array<int, Rank>, Rational>> nonzeros() const {
    std::vector<std::pair<std::array<int, Rank>, Rational>> out;
    for (std::size_t k = 0; k < data_.size(); ++k) {
      if (sgn(data_[k]) == 0) continue;
      std::array<int, Rank> idx{};
      std::size_t rest = k;
      for (int r = Rank - 1; r >= 0; --r) {
        idx[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(dim_));
        rest /= static_cast<std::size_t>(dim_);
      }
      out.emplace_back(idx, data_[k]);
    }
    return out;
  }

 private:
  static std::size_t size_for(int dim) {
    std::size_t s = 1;
    for (int r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(dim);
    return s;
  }
  [[nodiscard]] std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t k = 0;
    for (int i : idx) {
      if (i < 0 || i >= dim_) throw std::out_of_range("tensor index out of range");
      k = k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return k;
  }

  int dim_ = 0;
  std::vector<Rational> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

/// Einstein residual of the trial algebra at one value of c.
struct SweepEntry {
  Rational c;
  Rational residual;  // sum of squared entries of Ric + 4(n+2) id
};

struct Derivation {
  std::vector<SweepEntry> sweep;
  std::vector<Rational> roots;  // rational c with Ric = -4(n+2) id exactly
};

/// [e_a, e_b] = sum_d C(a, b, d) e_d.
struct StructureConstants {
  int n = 0;
  Rational z_coefficient;
  Tensor3 C;
  Derivation derivation;

  [[nodiscard]] int dim() const { return 4 * n; }
};

/// Gamma(a, b, d) with nabla_{e_a} e_b = sum_d Gamma(a, b, d) e_d.
struct ConnectionCoefficients {
  Tensor3 gamma;
};

struct CurvatureTensor {
  Tensor4 R;

  [[nodiscard]] int dim() const { return R.dim(); }
  const Rational& operator()(int a, int b, int c, int d) const { return R(a, b, c, d); }
  [[nodiscard]] Rational sectional(int x, int y) const { return R(x, y, x, y); }
};

// ---------------------------------------------------------------------------
// Construction

inline StructureConstants structure_constants(int n, const Rational& c) {
  if (n < 2) throw std::invalid_argument("model needs n >= 2");
  const QuaternionicFrame frame(n, Layout::Interleaved);
  const int D = 4 * n;
  StructureConstants sc;
  sc.n = n;
  sc.z_coefficient = c;
  sc.C = Tensor3(D);
  auto set = [&](int a, int b, int d, const Rational& v) {
    sc.C(a, b, d) += v;
    sc.C(b, a, d) -= v;
  };
  for (int p = 1; p <= 3; ++p) set(0, p, p, 2);
  for (int a = 4; a < D; ++a) set(0, a, a, 1);
  const Structure ops[3] = {Structure::I, Structure::J, Structure::K};
  for (int u = 4; u < D; ++u)
    for (int k = 0; k < 3; ++k) {
      // <A u, v> is nonzero only for v = A u
      const auto t = frame.apply(ops[k], u);
      if (t.index > u) set(u, t.index, 1 + k, c * t.sign);
    }
  return sc;
}

/// Koszul formula for a left-invariant orthonormal frame.
inline Tensor3 koszul(const Tensor3& C) {
  const int D = C.dim();
  Tensor3 G(D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c) {
        Rational s = C(a, b, c) - C(b, c, a) + C(c, a, b);
        if (sgn(s) != 0) G(a, b, c) = s / 2;
      }
  return G;
}

inline Tensor4 curvature_of(const Tensor3& C, const Tensor3& G) {
  const int D = C.dim();
  Tensor4 R(D);
  Rational s;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int d = 0; d < D; ++d)
        for (int f = 0; f < D; ++f) {
          s = 0;
          for (int e = 0; e < D; ++e) {
            if (sgn(G(b, d, e)) != 0 && sgn(G(a, e, f)) != 0) s += G(b, d, e) * G(a, e, f);
            if (sgn(G(a, d, e)) != 0 && sgn(G(b, e, f)) != 0) s -= G(a, d, e) * G(b, e, f);
            if (sgn(C(a, b, e)) != 0 && sgn(G(e, d, f)) != 0) s -= C(a, b, e) * G(e, d, f);
          }
          R(a, b, f, d) = s;
        }
  return R;
}

/// Ric(x, y) = sum_i R(x, i, y, i), computed without forming R.
inline SquareMatrix<Rational> ricci_of(const Tensor3& C, const Tensor3& G) {
  const int D = C.dim();
  SquareMatrix<Rational> ric(D);
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) {
      Rational s = 0;
      for (int i = 0; i < D; ++i)
        for (int e = 0; e < D; ++e) {
          if (sgn(G(i, i, e)) != 0 && sgn(G(x, e, y)) != 0) s += G(i, i, e) * G(x, e, y);
          if (sgn(G(x, i, e)) != 0 && sgn(G(i, e, y)) != 0) s -= G(x, i, e) * G(i, e, y);
          if (sgn(C(x, i, e)) != 0 && sgn(G(e, i, y)) != 0) s -= C(x, i, e) * G(e, i, y);
        }
      ric(x, y) = s;
    }
  return ric;
}

inline ConnectionCoefficients levi_civita(const StructureConstants& sc) { return {koszul(sc.C)}; }

inline CurvatureTensor curvature(const StructureConstants& sc, const ConnectionCoefficients& cc) {
  return {curvature_of(sc.C, cc.gamma)};
}

inline SquareMatrix<Rational> ricci(const CurvatureTensor& R) {
  const int D = R.dim();
  SquareMatrix<Rational> ric(D);
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y)
      for (int i = 0; i < D; ++i) ric(x, y) += R(x, i, y, i);
  return ric;
}

namespace detail {

inline Rational einstein_residual(int n, const Rational& c) {
  const auto sc = structure_constants(n, c);
  auto ric = ricci_of(sc.C, koszul(sc.C));
  ric += Rational(4 * (n + 2)) * SquareMatrix<Rational>::identity(4 * n);
  return ric.frobenius(ric);
}

// Rational roots of a c^2 + b c + d.
inline std::vector<Rational> rational_roots(const Rational& a, const Rational& b, const Rational& d) {
  if (sgn(a) == 0) {
    if (sgn(b) == 0) return {};
    return {Rational(-d / b)};
  }
  const auto root = exact_sqrt(b * b - 4 * a * d);
  if (!root) return {};
  std::vector<Rational> out{Rational((-b - *root) / (2 * a)), Rational((-b + *root) / (2 * a))};
  if (out[0] == out[1]) out.pop_back();
  return out;
}

}  // namespace detail

/// The group model with the center scale c fixed by the Einstein condition.
///
/// Every Ricci entry is a polynomial of degree at most 2 in c, so each is
/// recovered exactly from c = 0, 1, 2 and confirmed at c = 3; the common
/// rational roots are the admissible scales. The positive root is used.
inline StructureConstants build_model(int n) {
  if (n < 2) throw std::invalid_argument("model needs n >= 2");
  const int D = 4 * n;
  Derivation der;
  for (const Rational& c : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)})
    der.sweep.push_back({c, detail::einstein_residual(n, c)});

  std::vector<SquareMatrix<Rational>> samples;
  for (int c = 0; c <= 3; ++c) {
    const auto sc = structure_constants(n, c);
    auto ric = ricci_of(sc.C, koszul(sc.C));
    ric += Rational(4 * (n + 2)) * SquareMatrix<Rational>::identity(D);
    samples.push_back(std::move(ric));
  }
  std::optional<std::vector<Rational>> candidates;
  std::vector<std::array<Rational, 3>> polys;
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) {
      const Rational r0 = samples[0](x, y), r1 = samples[1](x, y), r2 = samples[2](x, y);
      const Rational a = (r2 - 2 * r1 + r0) / 2, b = r1 - r0 - a;
      if (!(a * 9 + b * 3 + r0 == samples[3](x, y)))
        throw ModelConstructionError("Ricci entry is not quadratic in the center scale");
      if (sgn(a) == 0 && sgn(b) == 0 && sgn(r0) == 0) continue;
      polys.push_back({a, b, r0});
      if (!candidates) candidates = detail::rational_roots(a, b, r0);
    }
  if (!candidates) throw ModelConstructionError("Einstein condition does not constrain c");
  for (const Rational& c : *candidates) {
    bool all = true;
    for (const auto& [a, b, d] : polys) all = all && sgn(a * c * c + b * c + d) == 0;
    if (all) der.roots.push_back(c);
  }
  std::optional<Rational> chosen;
  for (const Rational& c : der.roots)
    if (sgn(c) > 0) chosen = c;
  if (!chosen) throw ModelConstructionError("no positive c satisfies the Einstein condition");
  auto sc = structure_constants(n, *chosen);
  sc.derivation = std::move(der);
  return sc;
}

inline QuaternionicFrame model_frame(const StructureConstants& sc) { return {sc.n, Layout::Interleaved}; }

// ---------------------------------------------------------------------------
// Checks

namespace detail {

// Names components 1-based, the way the tables are printed.
inline std::string component(const std::string& letter, std::initializer_list<int> idx) {
  std::string s = letter + "_{";
  bool first = true;
  for (int i : idx) {
    if (!first) s += ",";
    s += std::to_string(i + 1);
    first = false;
  }
  return s + "}";
}

// Records one check standing for a whole family: either every entry equals
// its expected value or the first offender is shown.
class FamilyCheck {
 public:
  explicit FamilyCheck(std::string name) : name_(std::move(name)) {}

  void compare(const std::string& where, const Rational& expected, const Rational& actual) {
    ++count_;
    if (expected == actual) return;
    ++bad_;
    if (first_.empty()) first_ = where + " expected " + to_fraction_string(expected) + " got " + to_fraction_string(actual);
  }

  void finish(CheckReport& out) const {
    const std::string expected = std::to_string(count_) + " entries";
    const std::string actual = bad_ == 0 ? expected : std::to_string(bad_) + " mismatches, first " + first_;
    out.add(name_, expected, actual, bad_ == 0 && count_ > 0);
  }

 private:
  std::string name_;
  long count_ = 0, bad_ = 0;
  std::string first_;
};

inline std::array<Structure, 3> structures() { return {Structure::I, Structure::J, Structure::K}; }

}  // namespace detail

inline CheckReport verify_structure(const StructureConstants& sc) {
  CheckReport out;
  const int D = sc.dim();
  const auto& C = sc.C;
  detail::FamilyCheck anti("antisymmetry"), jacobi("Jacobi identity"), deriv("ad(e_1) is a derivation");
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int d = 0; d < D; ++d) anti.compare(detail::component("C", {a, b, d}), -C(b, a, d), C(a, b, d));
  auto bracket2 = [&](int a, int b, int c, int f) {  // [[e_a, e_b], e_c]^f
    Rational s = 0;
    for (int e = 0; e < D; ++e)
      if (sgn(C(a, b, e)) != 0) s += C(a, b, e) * C(e, c, f);
    return s;
  };
  for (int a = 0; a < D; ++a)
    for (int b = a + 1; b < D; ++b)
      for (int c = b + 1; c < D; ++c)
        for (int f = 0; f < D; ++f)
          jacobi.compare(detail::component("J", {a, b, c, f}), 0, bracket2(a, b, c, f) + bracket2(b, c, a, f) + bracket2(c, a, b, f));
  // ad(e_1)[x, y] = [ad(e_1) x, y] + [x, ad(e_1) y]
  for (int x = 1; x < D; ++x)
    for (int y = 1; y < D; ++y)
      for (int f = 0; f < D; ++f) {
        Rational lhs = 0, rhs = 0;
        for (int e = 0; e < D; ++e) {
          lhs += C(x, y, e) * C(0, e, f);
          rhs += C(0, x, e) * C(e, y, f) + C(0, y, e) * C(x, e, f);
        }
        deriv.compare(detail::component("D", {x, y, f}), lhs, rhs);
      }
  anti.finish(out);
  jacobi.finish(out);
  deriv.finish(out);

  detail::FamilyCheck eig("ad(e_1) = diag(0, 2, 2, 2, 1, ...)");
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      const Rational expected = a != b ? 0 : a == 0 ? 0 : a <= 3 ? 2 : 1;
      eig.compare(detail::component("ad", {a, b}), expected, C(0, a, b));
    }
  eig.finish(out);
  return out;
}

inline CheckReport verify_connection(const StructureConstants& sc, const ConnectionCoefficients& cc) {
  CheckReport out;
  const int D = sc.dim();
  const auto& G = cc.gamma;
  detail::FamilyCheck metric("metric compatibility"), torsion("torsion free"), radial("nabla_{e_1} e_1 = 0"),
      parallel("frame parallel along e_1"), shape("<nabla_{e_a} e_1, e_a> = -h_aa");
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c) {
        metric.compare(detail::component("G", {a, b, c}), -G(a, c, b), G(a, b, c));
        torsion.compare(detail::component("T", {a, b, c}), sc.C(a, b, c), G(a, b, c) - G(b, a, c));
      }
  for (int c = 0; c < D; ++c) radial.compare(detail::component("G", {0, 0, c}), 0, G(0, 0, c));
  for (int b = 0; b < D; ++b)
    for (int c = 0; c < D; ++c) parallel.compare(detail::component("G", {0, b, c}), 0, G(0, b, c));
  for (int a = 1; a < D; ++a) shape.compare(detail::component("G", {a, 0, a}), a <= 3 ? -2 : -1, G(a, 0, a));
  metric.finish(out);
  torsion.finish(out);
  radial.finish(out);
  parallel.finish(out);
  shape.finish(out);
  return out;
}

inline CheckReport verify_symmetries(const CurvatureTensor& R) {
  CheckReport out;
  const int D = R.dim();
  detail::FamilyCheck ab("R_{abcd} = -R_{bacd}"), cd("R_{abcd} = -R_{abdc}"), pair("R_{abcd} = R_{cdab}"),
      bianchi("first Bianchi identity");
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c)
        for (int d = 0; d < D; ++d) {
          const auto where = detail::component("R", {a, b, c, d});
          ab.compare(where, -R(b, a, c, d), R(a, b, c, d));
          cd.compare(where, -R(a, b, d, c), R(a, b, c, d));
          pair.compare(where, R(c, d, a, b), R(a, b, c, d));
          // R(a,b)c + R(b,c)a + R(c,a)b = 0, paired with e_d
          bianchi.compare(where, 0, R(a, b, d, c) + R(b, c, d, a) + R(c, a, d, b));
        }
  ab.finish(out);
  cd.finish(out);
  pair.finish(out);
  bianchi.finish(out);
  return out;
}

inline CheckReport verify_einstein(const CurvatureTensor& R, int n) {
  CheckReport out;
  const int D = R.dim();
  if (D != 4 * n) throw std::invalid_argument("curvature dimension does not match n");
  const auto ric = ricci(R);
  const Rational einstein = -4 * (n + 2);
  detail::FamilyCheck diag("Ric diagonal = " + to_fraction_string(einstein)), off("Ric off-diagonal = 0");
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) {
      if (x == y)
        diag.compare(detail::component("Ric", {x, y}), einstein, ric(x, y));
      else
        off.compare(detail::component("Ric", {x, y}), 0, ric(x, y));
    }
  diag.finish(out);
  off.finish(out);
  out.add_exact("scalar curvature", Rational(-16 * n * (n + 2)), ric.trace());
  return out;
}

/// <R(X, Y) W, Z> for arbitrary vectors, through the nonzero entries.
class CurvatureForm {
 public:
  explicit CurvatureForm(const CurvatureTensor& R) : entries_(R.R.nonzeros()) {}

  [[nodiscard]] Rational operator()(const Vector& x, const Vector& y, const Vector& z, const Vector& w) const {
    Rational s = 0;
    for (const auto& [i, v] : entries_) {
      if (sgn(x[static_cast<std::size_t>(i[0])]) == 0 || sgn(y[static_cast<std::size_t>(i[1])]) == 0 ||
          sgn(z[static_cast<std::size_t>(i[2])]) == 0 || sgn(w[static_cast<std::size_t>(i[3])]) == 0)
        continue;
      s += v * x[static_cast<std::size_t>(i[0])] * y[static_cast<std::size_t>(i[1])] * z[static_cast<std::size_t>(i[2])] *
           w[static_cast<std::size_t>(i[3])];
    }
    return s;
  }
  [[nodiscard]] Rational sectional(const Vector& x, const Vector& y) const { return (*this)(x, y, x, y); }

 private:
  std::vector<std::pair<std::array<int, 4>, Rational>> entries_;
};

namespace detail {

inline Vector project_off_line(const QuaternionicFrame& f, const Vector& x, Vector y) {
  const Rational xx = exterior::dot(x, x);
  std::vector<Vector> span{x};
  for (Structure a : structures()) span.push_back(f.apply(a, x));
  for (const auto& u : span) {
    const Rational k = exterior::dot(y, u) / xx;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= k * u[i];
  }
  return y;
}

}  // namespace detail

/// Trace identities: sum over the quaternionic line of X of K(X, AX) is
/// 12 delta |X|^4, and the four-term sum over the line of Y is 4 delta |X|^2 |Y|^2
/// whenever Y is orthogonal to that line. delta = -1 here.
inline CheckReport verify_quaternionic_traces(const CurvatureTensor& R, const QuaternionicFrame& frame, int random_samples = 10,
                                              std::uint64_t seed = 0) {
  CheckReport out;
  const int D = frame.dim();
  if (R.dim() != D || frame.layout() != Layout::Interleaved) throw std::invalid_argument("frame does not match the model");
  detail::FamilyCheck three("three-sum = -12 on frame vectors"), four("four-sum = -4 on frame pairs");
  for (int x = 0; x < D; ++x) {
    Rational s = 0;
    for (Structure a : detail::structures()) s += R.sectional(x, frame.apply(a, x).index);
    three.compare(detail::component("X", {x}), -12, s);
    for (int y = 0; y < D; ++y) {
      if (frame.line_of(y) == frame.line_of(x)) continue;
      Rational t = R.sectional(x, y);
      for (Structure a : detail::structures()) t += R.sectional(x, frame.apply(a, y).index);
      four.compare(detail::component("XY", {x, y}), -4, t);
    }
  }
  three.finish(out);
  four.finish(out);

  // the e_1-lines are geodesics along which the frame is parallel, so the
  // transported sums are the pointwise sums at every point of the line
  Rational radial3 = 0;
  for (int p = 1; p <= 3; ++p) radial3 += R.sectional(0, p);
  out.add_exact("transported three-sum along e_1", -12, radial3);
  for (int line = 1; line < frame.n(); ++line) {
    Rational s = 0;
    for (int role = 0; role < 4; ++role) s += R.sectional(0, frame.index_of(line, role));
    out.add_exact("transported four-sum along e_1, line " + std::to_string(line + 1), -4, s);
  }

  const CurvatureForm form(R);
  Rng rng(seed);
  detail::FamilyCheck rthree("three-sum = -12|X|^4 on random X"), rfour("four-sum = -4|X|^2|Y|^2 on random X, Y");
  for (int t = 0; t < random_samples; ++t) {
    Vector x(static_cast<std::size_t>(D)), y(static_cast<std::size_t>(D));
    for (auto& v : x) v = rng.small_rational();
    for (auto& v : y) v = rng.small_rational();
    if (sgn(exterior::dot(x, x)) == 0) x[0] = 1;
    y = detail::project_off_line(frame, x, y);
    const Rational xx = exterior::dot(x, x), yy = exterior::dot(y, y);
    Rational s = 0, q = form.sectional(x, y);
    for (Structure a : detail::structures()) {
      s += form.sectional(x, frame.apply(a, x));
      q += form.sectional(x, frame.apply(a, y));
    }
    rthree.compare("sample " + std::to_string(t), -12 * xx * xx, s);
    rfour.compare("sample " + std::to_string(t), -4 * xx * yy, q);
  }
  if (random_samples > 0) {
    rthree.finish(out);
    rfour.finish(out);
  }
  return out;
}

/// alpha, beta, gamma of [R(X, Y), I] = gamma J - beta K and its cyclic versions.
struct BergerForms {
  SquareMatrix<Rational> alpha, beta, gamma;
};

inline SquareMatrix<Rational> curvature_operator(const CurvatureTensor& R, int x, int y) {
  const int D = R.dim();
  SquareMatrix<Rational> m(D);
  for (int f = 0; f < D; ++f)
    for (int d = 0; d < D; ++d) m(f, d) = R(x, y, f, d);
  return m;
}

inline CheckReport verify_berger(const CurvatureTensor& R, const QuaternionicFrame& frame, int n, BergerForms* forms = nullptr,
                                 int random_samples = 5, std::uint64_t seed = 0) {
  CheckReport out;
  const int D = frame.dim();
  if (R.dim() != D || D != 4 * n) throw std::invalid_argument("frame does not match the model");
  const std::array<SquareMatrix<Rational>, 3> Q{frame.matrix(Structure::I), frame.matrix(Structure::J), frame.matrix(Structure::K)};
  BergerForms bf{SquareMatrix<Rational>(D), SquareMatrix<Rational>(D), SquareMatrix<Rational>(D)};
  detail::FamilyCheck span("[R(X,Y), A] lies in span{I, J, K}"), pattern("commutator coefficient pattern");
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) {
      const auto Rm = curvature_operator(R, x, y);
      std::array<std::array<Rational, 3>, 3> coef;
      for (int k = 0; k < 3; ++k) {
        const auto com = Rm * Q[static_cast<std::size_t>(k)] - Q[static_cast<std::size_t>(k)] * Rm;
        auto residual = com;
        for (int j = 0; j < 3; ++j) {
          coef[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = com.frobenius(Q[static_cast<std::size_t>(j)]) / D;
          residual -= coef[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * Q[static_cast<std::size_t>(j)];
        }
        span.compare(detail::component("R", {x, y}) + " residual norm^2", 0, residual.frobenius(residual));
      }
      const Rational g = coef[0][1], b = -coef[0][2], a = coef[1][2];
      bf.gamma(x, y) = g;
      bf.beta(x, y) = b;
      bf.alpha(x, y) = a;
      const auto where = detail::component("R", {x, y});
      pattern.compare(where + " [R,I]_I", 0, coef[0][0]);
      pattern.compare(where + " [R,J]_J", 0, coef[1][1]);
      pattern.compare(where + " [R,K]_K", 0, coef[2][2]);
      pattern.compare(where + " [R,J]_I", -g, coef[1][0]);
      pattern.compare(where + " [R,K]_I", b, coef[2][0]);
      pattern.compare(where + " [R,K]_J", -a, coef[2][1]);
    }
  span.finish(out);
  pattern.finish(out);

  // alpha(X, IY) = beta(X, JY) = gamma(X, KY) = -Ric(X, Y)/(n+2) = 4<X, Y>
  const auto ric = ricci(R);
  detail::FamilyCheck eq_a("alpha(X, IY) = -Ric(X,Y)/(n+2)"), eq_b("beta(X, JY) = -Ric(X,Y)/(n+2)"),
      eq_c("gamma(X, KY) = -Ric(X,Y)/(n+2)"), four("-Ric(X,Y)/(n+2) = 4<X,Y>");
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) {
      const Rational target = -ric(x, y) / (n + 2);
      const auto where = detail::component("XY", {x, y});
      const auto iy = frame.apply(Structure::I, y), jy = frame.apply(Structure::J, y), ky = frame.apply(Structure::K, y);
      eq_a.compare(where, target, iy.sign * bf.alpha(x, iy.index));
      eq_b.compare(where, target, jy.sign * bf.beta(x, jy.index));
      eq_c.compare(where, target, ky.sign * bf.gamma(x, ky.index));
      four.compare(where, x == y ? 4 : 0, target);
    }
  eq_a.finish(out);
  eq_b.finish(out);
  eq_c.finish(out);
  four.finish(out);

  // <R(X,Y)Z, IZ> + <R(X,Y)JZ, KZ> = alpha(X,Y)|Z|^2 and cyclic
  const CurvatureForm form(R);
  detail::FamilyCheck c1("<R(X,Y)Z,IZ> + <R(X,Y)JZ,KZ> = alpha(X,Y)|Z|^2"),
      c2("<R(X,Y)Z,JZ> + <R(X,Y)KZ,IZ> = beta(X,Y)|Z|^2"), c3("<R(X,Y)Z,KZ> + <R(X,Y)IZ,JZ> = gamma(X,Y)|Z|^2");
  auto run = [&](const Vector& X, const Vector& Y, const Vector& Z, const std::string& where) {
    const Vector IZ = frame.apply(Structure::I, Z), JZ = frame.apply(Structure::J, Z), KZ = frame.apply(Structure::K, Z);
    const Rational zz = exterior::dot(Z, Z);
    Rational a = 0, b = 0, g = 0;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        const Rational xy = X[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(j)];
        if (sgn(xy) == 0) continue;
        a += bf.alpha(i, j) * xy;
        b += bf.beta(i, j) * xy;
        g += bf.gamma(i, j) * xy;
      }
    // <R(X,Y)W, V> = form(X, Y, V, W)
    c1.compare(where, a * zz, form(X, Y, IZ, Z) + form(X, Y, KZ, JZ));
    c2.compare(where, b * zz, form(X, Y, JZ, Z) + form(X, Y, IZ, KZ));
    c3.compare(where, g * zz, form(X, Y, KZ, Z) + form(X, Y, JZ, IZ));
  };
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y)
      for (int z = 0; z < D; ++z)
        run(exterior::basis_vector(D, x), exterior::basis_vector(D, y), exterior::basis_vector(D, z), detail::component("XYZ", {x, y, z}));
  Rng rng(seed);
  for (int t = 0; t < random_samples; ++t) {
    Vector X(static_cast<std::size_t>(D)), Y(static_cast<std::size_t>(D)), Z(static_cast<std::size_t>(D));
    for (auto* v : {&X, &Y, &Z})
      for (auto& c : *v) c = rng.small_rational();
    run(X, Y, Z, "sample " + std::to_string(t));
  }
  c1.finish(out);
  c2.finish(out);
  c3.finish(out);
  if (forms) *forms = std::move(bf);
  return out;
}

// ---------------------------------------------------------------------------
// Parallel 4-form

/// d on left-invariant forms, from d theta^c = -sum_{a<b} C(a, b, c) theta^a ^ theta^b.
inline Form exterior_derivative(const Form& w, const Tensor3& C) {
  const int D = w.dim();
  Form out(D, w.degree() + 1);
  for (const auto& [mask, coef] : w.terms()) {
    const auto idx = exterior::indices_of(mask);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Rational sign = (k % 2 == 0) ? coef : Rational(-coef);
      for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b) {
          const Rational& c = C(a, b, idx[k]);
          if (sgn(c) == 0) continue;
          std::vector<int> order(idx.begin(), idx.begin() + static_cast<long>(k));
          order.push_back(a);
          order.push_back(b);
          order.insert(order.end(), idx.begin() + static_cast<long>(k) + 1, idx.end());
          out += Form::monomial(D, order, -c * sign);
        }
    }
  }
  return out;
}

/// omega(X, Y) = <A X, Y> as a matrix.
inline SquareMatrix<Rational> kahler_matrix(const QuaternionicFrame& frame, Structure a) { return frame.matrix(a).transpose(); }

inline Form two_form(const SquareMatrix<Rational>& w) {
  Form f(w.size(), 2);
  for (int x = 0; x < w.size(); ++x)
    for (int y = x + 1; y < w.size(); ++y)
      if (sgn(w(x, y)) != 0) f += Form::monomial(w.size(), {x, y}, w(x, y));
  return f;
}

/// (nabla_{e_E} w)(e_X, e_Y) for a left-invariant 2-form.
inline SquareMatrix<Rational> covariant_derivative(const Tensor3& G, int E, const SquareMatrix<Rational>& w) {
  const int D = w.size();
  SquareMatrix<Rational> out(D);
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) {
      Rational s = 0;
      for (int f = 0; f < D; ++f) {
        if (sgn(G(E, x, f)) != 0) s -= G(E, x, f) * w(f, y);
        if (sgn(G(E, y, f)) != 0) s -= G(E, y, f) * w(x, f);
      }
      out(x, y) = s;
    }
  return out;
}

/// The 1-forms of nabla omega_1 = c omega_2 - b omega_3 and its cyclic versions.
struct Sp1Forms {
  Vector a, b, c;
};

inline CheckReport verify_parallel_four_form(const StructureConstants& sc, const QuaternionicFrame& frame, Sp1Forms* forms = nullptr,
                                             const BergerForms* berger = nullptr) {
  CheckReport out;
  const int D = sc.dim();
  if (frame.dim() != D || frame.layout() != Layout::Interleaved) throw std::invalid_argument("frame does not match the model");
  const auto G = levi_civita(sc).gamma;
  const std::array<SquareMatrix<Rational>, 3> W{kahler_matrix(frame, Structure::I), kahler_matrix(frame, Structure::J),
                                                kahler_matrix(frame, Structure::K)};
  const auto ff = quaternionic::build_fundamental_forms(frame);
  out.add_flag("Omega = sum omega_k ^ omega_k with omega_k(X,Y) = <A_k X, Y>",
               ff.Omega == exterior::wedge(two_form(W[0]), two_form(W[0])) + exterior::wedge(two_form(W[1]), two_form(W[1])) +
                               exterior::wedge(two_form(W[2]), two_form(W[2])));
  const Form dOmega = exterior_derivative(ff.Omega, sc.C);
  out.add("d Omega = 0", "0", dOmega.is_zero() ? "0" : std::to_string(dOmega.size()) + " nonzero terms", dOmega.is_zero());

  Sp1Forms sp{Vector(static_cast<std::size_t>(D)), Vector(static_cast<std::size_t>(D)), Vector(static_cast<std::size_t>(D))};
  detail::FamilyCheck span("nabla omega_k in the sp(1) span"), parallel("nabla Omega = 0");
  for (int E = 0; E < D; ++E) {
    const auto n1 = covariant_derivative(G, E, W[0]), n2 = covariant_derivative(G, E, W[1]), n3 = covariant_derivative(G, E, W[2]);
    const auto e = static_cast<std::size_t>(E);
    sp.c[e] = n1.frobenius(W[1]) / D;
    sp.b[e] = -n1.frobenius(W[2]) / D;
    sp.a[e] = n2.frobenius(W[2]) / D;
    const auto r1 = n1 - (sp.c[e] * W[1] - sp.b[e] * W[2]);
    const auto r2 = n2 - (sp.a[e] * W[2] - sp.c[e] * W[0]);
    const auto r3 = n3 - (sp.b[e] * W[0] - sp.a[e] * W[1]);
    const auto where = detail::component("E", {E});
    span.compare(where + " omega_1", 0, r1.frobenius(r1));
    span.compare(where + " omega_2", 0, r2.frobenius(r2));
    span.compare(where + " omega_3", 0, r3.frobenius(r3));
    // nabla is a derivation and 2-forms commute: nabla (w ^ w) = 2 nabla w ^ w
    Form nabla_omega(D, 4);
    for (int k = 0; k < 3; ++k) {
      const auto nk = covariant_derivative(G, E, W[static_cast<std::size_t>(k)]);
      nabla_omega += Rational(2) * exterior::wedge(two_form(nk), two_form(W[static_cast<std::size_t>(k)]));
    }
    parallel.compare(where, 0, Rational(static_cast<long>(nabla_omega.size())));
  }
  span.finish(out);
  parallel.finish(out);

  if (berger) {
    // alpha = da + b ^ c, beta = db + c ^ a, gamma = dc + a ^ b with da(X,Y) = -a([X,Y])
    const std::array<std::tuple<const char*, const Vector*, const Vector*, const Vector*, const SquareMatrix<Rational>*>, 3> rel{{
        {"alpha = da + b ^ c", &sp.a, &sp.b, &sp.c, &berger->alpha},
        {"beta = db + c ^ a", &sp.b, &sp.c, &sp.a, &berger->beta},
        {"gamma = dc + a ^ b", &sp.c, &sp.a, &sp.b, &berger->gamma},
    }};
    for (const auto& [name, f, g, h, target] : rel) {
      detail::FamilyCheck fc(name);
      for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y) {
          Rational v = (*g)[static_cast<std::size_t>(x)] * (*h)[static_cast<std::size_t>(y)] -
                       (*g)[static_cast<std::size_t>(y)] * (*h)[static_cast<std::size_t>(x)];
          for (int e = 0; e < D; ++e) v -= sc.C(x, y, e) * (*f)[static_cast<std::size_t>(e)];
          fc.compare(detail::component("XY", {x, y}), (*target)(x, y), v);
        }
      fc.finish(out);
    }
  }
  if (forms) *forms = std::move(sp);
  return out;
}

// ---------------------------------------------------------------------------
// Level sets of t

struct LevelSetGeometry {
  Rational scale;                      // s = e^{-2t}
  std::vector<Rational> second_fundamental;  // diagonal over e_2..e_{4n}
  CurvatureTensor induced;             // intrinsic curvature, indices 0..4n-2 <-> e_2..e_{4n}
  CheckReport report;
};

/// Structure constants of the level set N (indices shifted down by one).
inline Tensor3 level_set_brackets(const StructureConstants& sc) {
  const int D = sc.dim() - 1;
  Tensor3 C(D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int d = 0; d < D; ++d) C(a, b, d) = sc.C(a + 1, b + 1, d + 1);
  return C;
}

/// Intrinsic curvature of N with metric s^-2 sum omega_p^2 + s^-1 sum omega_alpha^2,
/// in its orthonormal frame (s e_p, sqrt(s) e_alpha). s must be a rational square.
inline CurvatureTensor level_set_curvature(const StructureConstants& sc, const Rational& scale) {
  if (sgn(scale) <= 0) throw std::domain_error("level-set scale must be positive");
  const auto root = exact_sqrt(scale);
  if (!root) throw std::domain_error("level-set scale must be the square of a rational");
  const Tensor3 base = level_set_brackets(sc);
  const int D = base.dim();
  std::vector<Rational> lambda(static_cast<std::size_t>(D));
  for (int i = 0; i < D; ++i) lambda[static_cast<std::size_t>(i)] = i < 3 ? scale : *root;
  Tensor3 C(D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int d = 0; d < D; ++d)
        if (sgn(base(a, b, d)) != 0)
          C(a, b, d) = base(a, b, d) * lambda[static_cast<std::size_t>(a)] * lambda[static_cast<std::size_t>(b)] /
                       lambda[static_cast<std::size_t>(d)];
  return {curvature_of(C, koszul(C))};
}

namespace detail {

// Additive term of the Gauss-equation table for 1-based i, j, k, l >= 2,
// with the branch number it came from (1..8).
inline std::pair<int, Rational> gauss_branch(int i, int j, int k, int l) {
  auto z = [](int x) { return 2 <= x && x <= 4; };
  auto v = [](int x) { return x >= 5; };
  auto delta = [](int a, int b) { return a == b ? 1 : 0; };
  if (v(i) && v(j) && v(k) && v(l)) return {1, delta(l, i) * delta(k, j) - delta(k, i) * delta(l, j)};
  if (z(i) && z(j) && z(k) && z(l)) return {2, 4 * delta(l, i) * delta(k, j) - 4 * delta(k, i) * delta(l, j)};
  if (z(i) && i == l && v(k) && k == j) return {3, 2};
  if (z(k) && k == j && v(i) && i == l) return {4, 2};
  if (z(i) && i == k && v(j) && j == l) return {5, -2};
  if (z(j) && j == l && v(i) && i == k) return {6, -2};
  if (z(k) && k == i && v(j) && j == l) return {7, -2};  // same entries as branch 5
  return {8, 0};
}

}  // namespace detail

inline LevelSetGeometry level_set_geometry(const StructureConstants& sc, const Rational& scale) {
  LevelSetGeometry ls;
  ls.scale = scale;
  ls.induced = level_set_curvature(sc, scale);
  const int D = sc.dim();
  const auto G = levi_civita(sc).gamma;
  const auto R = curvature(sc, {G});
  auto& out = ls.report;

  // h_ij = <nabla_{e_i} e_j, e_1>; the model is homogeneous so this is the same on every level
  detail::FamilyCheck h("second fundamental form = diag(2,2,2,1,...)");
  for (int i = 1; i < D; ++i) {
    ls.second_fundamental.push_back(G(i, i, 0));
    for (int j = 1; j < D; ++j) h.compare(detail::component("h", {i, j}), i != j ? 0 : i <= 3 ? 2 : 1, G(i, j, 0));
  }
  h.finish(out);

  std::array<detail::FamilyCheck, 8> branch{
      detail::FamilyCheck("Gauss branch 5<=i,j,k,l"),      detail::FamilyCheck("Gauss branch 2<=i,j,k,l<=4"),
      detail::FamilyCheck("Gauss branch i=l in z, k=j in v"), detail::FamilyCheck("Gauss branch k=j in z, i=l in v"),
      detail::FamilyCheck("Gauss branch i=k in z, j=l in v"), detail::FamilyCheck("Gauss branch j=l in z, i=k in v"),
      detail::FamilyCheck("Gauss branch k=i in z, j=l in v"), detail::FamilyCheck("Gauss branch otherwise")};
  detail::FamilyCheck gauss("R = Rbar + h_li h_kj - h_ki h_lj");
  const auto hh = [&](int a) { return ls.second_fundamental[static_cast<std::size_t>(a - 1)]; };
  for (int i = 1; i < D; ++i)
    for (int j = 1; j < D; ++j)
      for (int k = 1; k < D; ++k)
        for (int l = 1; l < D; ++l) {
          const auto where = detail::component("R", {i, j, k, l});
          const Rational& rbar = ls.induced(i - 1, j - 1, k - 1, l - 1);
          const auto [b, add] = detail::gauss_branch(i + 1, j + 1, k + 1, l + 1);
          branch[static_cast<std::size_t>(b - 1)].compare(where, rbar + add, R(i, j, k, l));
          // branch 7 repeats branch 5's entries; count them there as well
          if (b == 5) branch[6].compare(where, rbar + add, R(i, j, k, l));
          const Rational extra = (l == i && k == j ? hh(i) * hh(j) : Rational(0)) - (k == i && l == j ? hh(i) * hh(j) : Rational(0));
          gauss.compare(where, rbar + extra, R(i, j, k, l));
        }
  for (const auto& b : branch) b.finish(out);
  gauss.finish(out);

  // sums of level-set sectional curvatures; N indices are the M indices minus one
  auto KN = [&](int a, int b) { return ls.induced.sectional(a - 2, b - 2); };  // 1-based M labels
  out.add_exact("K^N(e_2,e_3)", 0, KN(2, 3));
  out.add_exact("K^N(e_2,e_4)", 0, KN(2, 4));
  out.add_exact("K^N(e_3,e_4)", 0, KN(3, 4));
  for (int s = 2; s <= sc.n; ++s) {
    const std::string tag = " (s=" + std::to_string(s) + ")";
    for (int p = 2; p <= 4; ++p) {
      Rational sum = 0;
      for (int i = 0; i <= 3; ++i) sum += KN(p, 4 * s - i);
      out.add_exact("sum_i K^N(e_" + std::to_string(p) + ", e_{4s-i})" + tag, 4, sum);
    }
    Rational nine = 0;
    for (int i = 1; i <= 3; ++i) nine += KN(4 * s, 4 * s - i);
    out.add_exact("sum_{i=1..3} K^N(e_{4s}, e_{4s-i})" + tag, -9, nine);
    for (int r = 2; r <= sc.n; ++r) {
      if (r == s) continue;
      Rational cross = 0;
      for (int i = 0; i <= 3; ++i) cross += KN(4 * s, 4 * r - i);
      out.add_exact("sum_i K^N(e_{4s}, e_{4r-i})" + tag + " r=" + std::to_string(r), 0, cross);
    }
  }
  return ls;
}

/// The quaternionic sum relations between M and N_0 at level s = e^{-2t}.
inline CheckReport level_sum_relations(const StructureConstants& sc, const CurvatureTensor& R, const Rational& s) {
  CheckReport out;
  const auto N0 = level_set_curvature(sc, 1);
  auto K = [&](int a, int b) { return R.sectional(a - 1, b - 1); };
  auto KN = [&](int a, int b) { return N0.sectional(a - 2, b - 2); };
  const std::string at = " at s=" + to_compact_string(s);
  out.add_exact("K(e_1,e_2)+K(e_1,e_3)+K(e_1,e_4)" + at, -12, K(1, 2) + K(1, 3) + K(1, 4));
  for (int p = 2; p <= 4; ++p) {
    Rational m = 0, nb = 0;
    for (int q = 1; q <= 4; ++q)
      if (q != p) m += K(p, q);
    for (int q = 2; q <= 4; ++q)
      if (q != p) nb += KN(p, q);
    out.add_exact("sum_q K(e_" + std::to_string(p) + ",e_q)" + at, -12 + s * nb, m);
  }
  for (int line = 2; line <= sc.n; ++line) {
    const std::string tag = " (s=" + std::to_string(line) + ")" + at;
    Rational k1 = 0;
    for (int i = 0; i <= 3; ++i) k1 += K(1, 4 * line - i);
    out.add_exact("sum_i K(e_1,e_{4s-i})" + tag, -4, k1);
    for (int p = 2; p <= 4; ++p) {
      Rational m = 0, nb = 0;
      for (int i = 0; i <= 3; ++i) {
        m += K(p, 4 * line - i);
        nb += KN(p, 4 * line - i);
      }
      out.add_exact("sum_i K(e_" + std::to_string(p) + ",e_{4s-i})" + tag, -4 + s * (nb - 4), m);
    }
    Rational m = 0, nb = 0;
    for (int i = 1; i <= 3; ++i) {
      m += K(4 * line, 4 * line - i);
      nb += KN(4 * line, 4 * line - i);
    }
    out.add_exact("sum_{i=1..3} K(e_{4s},e_{4s-i})" + tag, -12 + s * (nb + 9), m);
    for (int r = 2; r <= sc.n; ++r) {
      if (r == line) continue;
      Rational mc = 0, nc = 0;
      for (int i = 0; i <= 3; ++i) {
        mc += K(4 * line, 4 * r - i);
        nc += KN(4 * line, 4 * r - i);
      }
      out.add_exact("sum_i K(e_{4s},e_{4r-i})" + tag + " r=" + std::to_string(r), -4 + s * nc, mc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curvature tables

namespace detail {

using Key = std::array<int, 4>;

// Stores a 1-based component.
inline void put(std::map<Key, Rational>& m, int a, int b, int c, int d, const Rational& v) { m[{a - 1, b - 1, c - 1, d - 1}] = v; }

// Compares every entry R(a, b, *, *) for the given leading pairs against a
// table; listed entries become individual checks, the rest must vanish.
inline void table_family(CheckReport& out, const std::string& name, const CurvatureTensor& R,
                         const std::vector<std::pair<int, int>>& leading, const std::map<Key, Rational>& table) {
  const int D = R.dim();
  FamilyCheck zero(name + " = 0 otherwise");
  for (const auto& [a, b] : leading)
    for (int c = 0; c < D; ++c)
      for (int d = 0; d < D; ++d) {
        const auto it = table.find({a, b, c, d});
        if (it != table.end())
          out.add_exact(component("R", {a, b, c, d}), it->second, R(a, b, c, d));
        else
          zero.compare(component("R", {a, b, c, d}), 0, R(a, b, c, d));
      }
  zero.finish(out);
}

}  // namespace detail

/// Coefficient of eta_x ^ eta_y (x < y) in 1/2 R_{ABij} eta_j ^ eta_i, i.e. R_{AByx}.
inline std::map<std::pair<int, int>, Rational> curvature_two_form(const CurvatureTensor& R, int A, int B) {
  std::map<std::pair<int, int>, Rational> out;
  for (int x = 0; x < R.dim(); ++x)
    for (int y = x + 1; y < R.dim(); ++y)
      if (sgn(R(A, B, y, x)) != 0) out[{x, y}] = R(A, B, y, x);
  return out;
}

inline CheckReport verify_curvature_tables(const StructureConstants& sc, const CurvatureTensor& R,
                                           const std::vector<Rational>& scales = {Rational(1), Rational(1, 4)}) {
  CheckReport out;
  const int n = sc.n, D = sc.dim();

  out.add_exact("R_{1,2,7,8} (center scale cross-check)", -2, R(0, 1, 6, 7));
  for (int p = 1; p <= 3; ++p) out.add_exact(detail::component("K", {0, p}), -4, R.sectional(0, p));
  {
    detail::FamilyCheck ka("K(e_1, e_a) = -1");
    for (int a = 4; a < D; ++a) ka.compare(detail::component("K", {0, a}), -1, R.sectional(0, a));
    ka.finish(out);
  }

  // R_{1pAB}
  std::map<detail::Key, Rational> t1p;
  auto with_partner = [](std::map<detail::Key, Rational>& m, int a, int b, int c, int d, int v) {
    detail::put(m, a, b, c, d, v);
    detail::put(m, a, b, d, c, -v);
  };
  for (int p = 2; p <= 4; ++p) with_partner(t1p, 1, p, 1, p, -4);
  for (int s = 2; s <= n; ++s) {
    with_partner(t1p, 1, 2, 4 * s - 1, 4 * s, -2);
    with_partner(t1p, 1, 2, 4 * s - 3, 4 * s - 2, -2);
    with_partner(t1p, 1, 3, 4 * s, 4 * s - 2, -2);
    with_partner(t1p, 1, 3, 4 * s - 1, 4 * s - 3, 2);
    with_partner(t1p, 1, 4, 4 * s, 4 * s - 3, 2);
    with_partner(t1p, 1, 4, 4 * s - 1, 4 * s - 2, 2);
  }
  detail::table_family(out, "R_{1pAB}", R, {{0, 1}, {0, 2}, {0, 3}}, t1p);

  // R_{1aAB}: the listed component, its partner with the second and third
  // slots swapped, and the antisymmetric partners of both
  std::map<detail::Key, Rational> t1a;
  std::vector<std::pair<int, int>> lead1a;
  for (int a = 5; a <= D; ++a) {
    with_partner(t1a, 1, a, 1, a, -1);
    lead1a.emplace_back(0, a - 1);
  }
  for (int s = 2; s <= n; ++s) {
    const int listed[6][4] = {{4 * s, 4 * s - 1, 2, -1},     {4 * s, 4 * s - 2, 3, 1},     {4 * s, 4 * s - 3, 4, -1},
                              {4 * s - 1, 4 * s - 3, 3, -1}, {4 * s - 1, 4 * s - 2, 4, -1}, {4 * s - 2, 4 * s - 3, 2, -1}};
    for (const auto& [a, b, c, v] : listed) {
      with_partner(t1a, 1, a, b, c, v);
      with_partner(t1a, 1, b, a, c, -v);
    }
  }
  detail::table_family(out, "R_{1aAB}", R, lead1a, t1a);

  // the t-weighted families, against the curvature of N_0
  const auto N0 = level_set_curvature(sc, 1);
  auto rbar = [&](int i, int j, int k, int l) { return N0(i - 2, j - 2, k - 2, l - 2); };  // 1-based M labels
  auto r = [&](int i, int j, int k, int l) { return R(i - 1, j - 1, k - 1, l - 1); };
  for (const Rational& s : scales) {
    const std::string at = " at s=" + to_compact_string(s);
    detail::FamilyCheck pqro("R_{pqro} = 4 - or + e^{-4t} Rbar" + at);
    for (int p = 2; p <= 4; ++p)
      for (int q = 2; q <= 4; ++q) {
        if (p == q) continue;
        for (int ro = 2; ro <= 4; ++ro)
          for (int o = 2; o <= 4; ++o) {
            Rational expected = s * s * rbar(p, q, ro, o);
            if (ro == p && o == q) expected -= 4;
            if (ro == q && o == p) expected += 4;
            pqro.compare(detail::component("R", {p - 1, q - 1, ro - 1, o - 1}), expected, r(p, q, ro, o));
          }
      }
    pqro.finish(out);

    std::map<detail::Key, Rational> special;
    for (int l = 2; l <= n; ++l) {
      with_partner(special, 2, 3, 4 * l, 4 * l - 3, -2);
      with_partner(special, 2, 3, 4 * l - 1, 4 * l - 2, -2);
      with_partner(special, 2, 4, 4 * l, 4 * l - 2, -2);
      with_partner(special, 2, 4, 4 * l - 1, 4 * l - 3, 2);
      with_partner(special, 3, 4, 4 * l, 4 * l - 1, -2);
      with_partner(special, 3, 4, 4 * l - 2, 4 * l - 3, -2);
    }
    detail::FamilyCheck listed("R_{pqab} = e^{-2t} Rbar + c (e^{-2t} - 1)" + at), other("R_{pqab} = e^{-2t} Rbar otherwise" + at);
    for (int p = 2; p <= 4; ++p)
      for (int q = p + 1; q <= 4; ++q)
        for (int a = 5; a <= D; ++a)
          for (int b = 5; b <= D; ++b) {
            const auto where = detail::component("R", {p - 1, q - 1, a - 1, b - 1});
            const auto it = special.find({p - 1, q - 1, a - 1, b - 1});
            if (it != special.end())
              listed.compare(where, s * rbar(p, q, a, b) + it->second * (s - 1), r(p, q, a, b));
            else
              other.compare(where, s * rbar(p, q, a, b), r(p, q, a, b));
          }
    listed.finish(out);
    other.finish(out);
  }

  // the displayed curvature 2-forms at t = 0: the N_0 part plus listed terms
  auto display = [&](int A, int B, const std::vector<std::array<int, 3>>& terms) {
    std::map<std::pair<int, int>, Rational> expected;
    for (int x = 2; x <= D; ++x)
      for (int y = x + 1; y <= D; ++y)
        if (sgn(rbar(A, B, y, x)) != 0) expected[{x - 1, y - 1}] = rbar(A, B, y, x);
    for (const auto& [i, j, c] : terms) {
      if (i < j)
        expected[{i - 1, j - 1}] += c;
      else
        expected[{j - 1, i - 1}] -= c;
    }
    std::erase_if(expected, [](const auto& kv) { return sgn(kv.second) == 0; });
    const auto got = curvature_two_form(R, A - 1, B - 1);
    std::string mismatch;
    std::set<std::pair<int, int>> keys;
    for (const auto& [k, v] : expected) keys.insert(k);
    for (const auto& [k, v] : got) keys.insert(k);
    for (const auto& k : keys) {
      const Rational e = expected.count(k) ? expected.at(k) : Rational(0), g = got.count(k) ? got.at(k) : Rational(0);
      if (e != g && mismatch.empty())
        mismatch = "eta_" + std::to_string(k.first + 1) + "^eta_" + std::to_string(k.second + 1) + " expected " + to_fraction_string(e) +
                   " got " + to_fraction_string(g);
    }
    const std::string name = "curvature form " + detail::component("R", {A - 1, B - 1}) + " at s=1";
    const std::string terms_text = std::to_string(keys.size()) + " coefficients";
    out.add(name, terms_text, mismatch.empty() ? terms_text : mismatch, mismatch.empty());
  };
  for (int s = 2; s <= n; ++s) {
    display(2, 4 * s, {{1, 4 * s - 1, 1}, {4 * s, 2, -2}});
    display(2, 4 * s - 1, {{1, 4 * s, -1}, {4 * s - 1, 2, -2}});
    display(2, 4 * s - 2, {{1, 4 * s - 3, 1}, {4 * s - 2, 2, -2}});
    display(2, 4 * s - 3, {{1, 4 * s - 2, -1}, {4 * s - 3, 2, -2}});
    display(4 * s - 1, 4 * s, {{1, 2, 2}, {4 * s - 1, 4 * s, 1}});
    for (int q = 2; q <= n; ++q)
      if (q != s) display(4 * s - 3, 4 * q, {{4 * s - 3, 4 * q, 1}});
  }
  return out;
}

/// Level-set shape operator against the Busemann Hessian table.
inline CheckReport radial_hessian_check(const StructureConstants& sc) {
  CheckReport out;
  const int n = sc.n, D = sc.dim();
  const auto G = levi_civita(sc).gamma;
  const QuaternionicFrame frame = model_frame(sc);
  Rational trace = 0, line = 0;
  for (int i = 1; i < D; ++i) trace += G(i, i, 0);
  for (int i = 1; i <= 3; ++i) line += G(i, i, 0);
  out.add_exact("shape operator trace = 4n+2", 4 * n + 2, trace);
  out.add_exact("line block trace", 6, line);
  for (int l = 1; l < n; ++l) {
    Rational t = 0;
    for (int role = 0; role < 4; ++role) t += G(frame.index_of(l, role), frame.index_of(l, role), 0);
    out.add_exact("transversal block trace, line " + std::to_string(l + 1), 4, t);
  }
  // Busemann Hessian = minus the shape operator, zero along e_1
  const auto busemann = quaternionic::busemann_hessian(n);
  detail::FamilyCheck match("Hess(beta) = -shape operator");
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      const Rational model = (i == 0 || j == 0) ? Rational(0) : Rational(-G(i, j, 0));
      const int gi = quaternionic::convert_index(n, Layout::Interleaved, Layout::Grouped, i);
      const int gj = quaternionic::convert_index(n, Layout::Interleaved, Layout::Grouped, j);
      match.compare(detail::component("H", {i, j}), busemann(gi, gj), model);
    }
  match.finish(out);
  out.add_exact("Laplacian of beta", -2 * (2 * n + 1), -trace);
  return out;
}

// ---------------------------------------------------------------------------
// Everything at once

struct ModelReport {
  StructureConstants sc;
  CurvatureTensor R;
  CheckReport checks;
};

inline ModelReport model_report(int n, const std::vector<Rational>& scales = {Rational(1), Rational(1, 4)}, std::uint64_t seed = 0) {
  ModelReport rep{build_model(n), {}, {}};
  const auto& sc = rep.sc;
  const auto cc = levi_civita(sc);
  rep.R = curvature(sc, cc);
  const auto frame = model_frame(sc);
  auto& out = rep.checks;
  out.append(verify_structure(sc), "structure: ");
  out.append(verify_connection(sc, cc), "connection: ");
  out.append(verify_symmetries(rep.R), "symmetries: ");
  out.append(verify_einstein(rep.R, n), "einstein: ");
  out.append(verify_quaternionic_traces(rep.R, frame, 10, seed), "traces: ");
  BergerForms bf;
  out.append(verify_berger(rep.R, frame, n, &bf, 5, seed), "berger: ");
  out.append(verify_parallel_four_form(sc, frame, nullptr, &bf), "four-form: ");
  out.append(radial_hessian_check(sc), "radial: ");
  out.append(verify_curvature_tables(sc, rep.R, scales), "tables: ");
  for (const Rational& s : scales) {
    out.append(level_set_geometry(sc, s).report, "level set s=" + to_compact_string(s) + ": ");
    out.append(level_sum_relations(sc, rep.R, s), "level sums: ");
  }
  return rep;
}

}  // namespace qkcomp::model
