#pragma once

// Quaternionic structure on R^{4n}: I, J, K as signed permutations of a
// canonical orthonormal basis, the Kahler forms and the 4-form Omega, and the
// Hessian algebra behind quaternionic harmonicity.
//
// Each basis vector belongs to a quaternionic line s (0..n-1) and has a role
// (0..3 for e_s, Ie_s, Je_s, Ke_s). Grouped puts it at role*n + s,
// Interleaved at 4*s + role.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkcomp/exterior.hpp"
#include "qkcomp/matrix.hpp"
#include "qkcomp/random.hpp"
#include "qkcomp/rational.hpp"

namespace qkcomp::quaternionic {

using exterior::Form;
using exterior::Vector;

enum class Layout { Grouped, Interleaved };
enum class Structure { I = 0, J = 1, K = 2 };

inline const char* layout_name(Layout l) { return l == Layout::Grouped ? "grouped" : "interleaved"; }

struct SignedIndex {
  int index = 0;
  int sign = 1;
  friend bool operator==(const SignedIndex&, const SignedIndex&) = default;
};

// Action on the roles of one line: I e = Ie, I(Ie) = -e, I(Je) = Ke, I(Ke) = -Je, etc.
inline constexpr std::array<std::array<SignedIndex, 4>, 3> kRoleAction{{
    {{{1, 1}, {0, -1}, {3, 1}, {2, -1}}},
    {{{2, 1}, {3, -1}, {0, -1}, {1, 1}}},
    {{{3, 1}, {2, 1}, {1, -1}, {0, -1}}},
}};

inline int layout_index(int n, Layout layout, int line, int role) {
  return layout == Layout::Grouped ? role * n + line : 4 * line + role;
}

/// Where basis index i of layout `from` sits in layout `to`.
inline int convert_index(int n, Layout from, Layout to, int i) {
  const int line = from == Layout::Grouped ? i % n : i / 4;
  const int role = from == Layout::Grouped ? i / n : i % 4;
  return layout_index(n, to, line, role);
}

inline std::vector<int> layout_permutation(int n, Layout from, Layout to) {
  std::vector<int> p(static_cast<std::size_t>(4 * n));
  for (int i = 0; i < 4 * n; ++i) p[static_cast<std::size_t>(i)] = convert_index(n, from, to, i);
  return p;
}

class QuaternionicFrame {
 public:
  QuaternionicFrame(int n, Layout layout) : n_(n), layout_(layout) {
    if (n < 2) throw std::invalid_argument("quaternionic dimension n must be at least 2");
    for (int a = 0; a < 3; ++a) {
      auto& act = actions_[static_cast<std::size_t>(a)];
      act.resize(static_cast<std::size_t>(4 * n));
      for (int line = 0; line < n; ++line)
        for (int role = 0; role < 4; ++role) {
          const SignedIndex r = kRoleAction[static_cast<std::size_t>(a)][static_cast<std::size_t>(role)];
          act[static_cast<std::size_t>(index_of(line, role))] = {index_of(line, r.index), r.sign};
        }
    }
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int dim() const { return 4 * n_; }
  [[nodiscard]] Layout layout() const { return layout_; }
  [[nodiscard]] int index_of(int line, int role) const { return layout_index(n_, layout_, line, role); }
  [[nodiscard]] int line_of(int i) const { return layout_ == Layout::Grouped ? i % n_ : i / 4; }
  [[nodiscard]] int role_of(int i) const { return layout_ == Layout::Grouped ? i / n_ : i % 4; }

  /// A e_i = sign * e_index.
  [[nodiscard]] SignedIndex apply(Structure a, int i) const {
    return actions_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
  }

  [[nodiscard]] Vector apply(Structure a, const Vector& v) const {
    Vector out(v.size(), Rational(0));
    for (int i = 0; i < dim(); ++i) {
      const SignedIndex t = apply(a, i);
      out[static_cast<std::size_t>(t.index)] += t.sign * v[static_cast<std::size_t>(i)];
    }
    return out;
  }

  /// Column i holds the image of e_i.
  [[nodiscard]] SquareMatrix<Rational> matrix(Structure a) const {
    SquareMatrix<Rational> m(dim());
    for (int i = 0; i < dim(); ++i) {
      const SignedIndex t = apply(a, i);
      m(t.index, i) = t.sign;
    }
    return m;
  }

  /// The frame with (I, J, K) replaced by (J, K, I); again a quaternionic triple.
  [[nodiscard]] QuaternionicFrame cyclic_relabel() const {
    QuaternionicFrame f = *this;
    f.actions_ = {actions_[1], actions_[2], actions_[0]};
    return f;
  }

 private:
  int n_;
  Layout layout_;
  std::array<std::vector<SignedIndex>, 3> actions_;
};

inline QuaternionicFrame build_frame(int n, Layout layout) { return QuaternionicFrame(n, layout); }

/// Exact check of I^2 = J^2 = K^2 = -1, IJ = K, JK = I, KI = J and orthogonality.
inline bool frame_algebra_holds(const QuaternionicFrame& f) {
  const auto I = f.matrix(Structure::I), J = f.matrix(Structure::J), K = f.matrix(Structure::K);
  const auto minus_id = Rational(-1) * SquareMatrix<Rational>::identity(f.dim());
  const auto id = SquareMatrix<Rational>::identity(f.dim());
  return I * I == minus_id && J * J == minus_id && K * K == minus_id && I * J == K && J * K == I && K * I == J &&
         I.transpose() * I == id && J.transpose() * J == id && K.transpose() * K == id;
}

// ---------------------------------------------------------------------------
// Kahler forms and Omega

struct FundamentalForms {
  Form omega1, omega2, omega3;
  Form Omega;
};

/// omega_k(X, Y) = <A_k X, Y>.
inline Form kahler_form(const QuaternionicFrame& f, Structure a) {
  Form w(f.dim(), 2);
  for (int i = 0; i < f.dim(); ++i) {
    const SignedIndex t = f.apply(a, i);
    if (i < t.index) w.add_term(exterior::mask_of({i, t.index}), t.sign);
  }
  return w;
}

inline FundamentalForms build_fundamental_forms(const QuaternionicFrame& f) {
  FundamentalForms ff{kahler_form(f, Structure::I), kahler_form(f, Structure::J), kahler_form(f, Structure::K),
                      Form(f.dim(), 4)};
  ff.Omega = exterior::wedge(ff.omega1, ff.omega1) + exterior::wedge(ff.omega2, ff.omega2) +
             exterior::wedge(ff.omega3, ff.omega3);
  return ff;
}

/// Basis indices (e_s, Ie_s, Je_s, Ke_s) of a line.
inline std::vector<int> line_indices(const QuaternionicFrame& f, int line) {
  return {f.index_of(line, 0), f.index_of(line, 1), f.index_of(line, 2), f.index_of(line, 3)};
}

// ---------------------------------------------------------------------------
// Hessians

template <class T>
struct HessianMatrix {
  QuaternionicFrame frame;
  SquareMatrix<T> f;

  explicit HessianMatrix(QuaternionicFrame fr) : frame(std::move(fr)), f(frame.dim()) {}
  HessianMatrix(QuaternionicFrame fr, SquareMatrix<T> m) : frame(std::move(fr)), f(std::move(m)) {
    if (f.size() != frame.dim()) throw std::invalid_argument("Hessian size does not match the frame");
  }

  [[nodiscard]] int dim() const { return frame.dim(); }
  T& operator()(int i, int j) { return f(i, j); }
  const T& operator()(int i, int j) const { return f(i, j); }

  [[nodiscard]] bool is_symmetric() const { return f.is_symmetric(); }
  [[nodiscard]] bool is_harmonic() const { return f.trace() == 0; }

  /// f_XX + f_{IX,IX} + f_{JX,JX} + f_{KX,KX} for X = e_{line}.
  [[nodiscard]] T line_sum(int line) const {
    T s = 0;
    for (int i : line_indices(frame, line)) s += f(i, i);
    return s;
  }

  [[nodiscard]] bool is_quaternionic_harmonic() const {
    for (int line = 0; line < frame.n(); ++line)
      if (!(line_sum(line) == 0)) return false;
    return true;
  }

  [[nodiscard]] T norm_squared() const { return f.frobenius(f); }
};

using ExactHessian = HessianMatrix<Rational>;

inline ExactHessian random_symmetric(Rng& rng, const QuaternionicFrame& frame) {
  ExactHessian h(frame);
  for (int i = 0; i < frame.dim(); ++i)
    for (int j = i; j < frame.dim(); ++j) h(i, j) = h(j, i) = rng.small_rational();
  return h;
}

inline ExactHessian random_trace_free(Rng& rng, const QuaternionicFrame& frame) {
  ExactHessian h = random_symmetric(rng, frame);
  const Rational shift = h.f.trace() / frame.dim();
  for (int i = 0; i < frame.dim(); ++i) h(i, i) -= shift;
  return h;
}

/// Projects a random symmetric matrix onto the quaternionic-harmonic subspace
/// by subtracting each line's mean from its four diagonal entries.
inline ExactHessian random_quaternionic_harmonic(Rng& rng, const QuaternionicFrame& frame) {
  ExactHessian h = random_symmetric(rng, frame);
  for (int line = 0; line < frame.n(); ++line) {
    const Rational mean = h.line_sum(line) / 4;
    for (int i : line_indices(frame, line)) h(i, i) -= mean;
  }
  return h;
}

/// sum_{A,B} f_AB theta^B ^ l(e_A) Omega. Its coefficient on the line 4-form
/// theta^s ^ I theta^s ^ J theta^s ^ K theta^s is 6 times the line sum.
inline Form siu_corlette_defect(const ExactHessian& h, const FundamentalForms& ff) {
  if (!h.is_symmetric()) throw std::domain_error("Hessian must be symmetric");
  if (!h.is_harmonic()) throw std::domain_error("Hessian must be trace free (harmonic function)");
  const int m = h.dim();
  Form out(m, 4);
  for (int a = 0; a < m; ++a) {
    Vector row(static_cast<std::size_t>(m));
    bool any = false;
    for (int b = 0; b < m; ++b) {
      row[static_cast<std::size_t>(b)] = h(a, b);
      any = any || sgn(h(a, b)) != 0;
    }
    if (!any) continue;
    out += exterior::wedge(exterior::dual(row), exterior::interior(exterior::basis_vector(m, a), ff.Omega));
  }
  return out;
}

inline Rational line_coefficient(const Form& defect, const QuaternionicFrame& f, int line) {
  return defect.coefficient(line_indices(f, line));
}

// ---------------------------------------------------------------------------
// Pointwise identity *d*(df ^ Omega) = (-1)^{m-1} d*(df ^ *Omega)
//
// With f_ij the Hessian in an orthonormal frame, both sides are linear in f:
//   lhs = sum f_ij * e(theta_i) * e(theta_j) Omega
//   rhs = sum f_ij e(theta_i) * e(theta_j) * Omega
// and both reduce to S = sum f_ij e(theta_i) l(e_j) Omega. The kernels are
// precomputed once per frame.

class StarCommutationKernel {
 public:
  explicit StarCommutationKernel(const FundamentalForms& ff) : m_(ff.Omega.dim()), p_(ff.Omega.degree()) {
    using namespace exterior;
    const Form star_omega = hodge_star(ff.Omega);
    std::vector<Form> theta, e_omega, star_e_star_omega, l_omega;
    for (int j = 0; j < m_; ++j) {
      theta.push_back(Form::monomial(m_, {j}));
      e_omega.push_back(hodge_star(ext_mult(theta.back(), ff.Omega)));
      star_e_star_omega.push_back(hodge_star(ext_mult(theta.back(), star_omega)));
      l_omega.push_back(interior(basis_vector(m_, j), ff.Omega));
    }
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) {
        lhs_.push_back(hodge_star(ext_mult(theta[i], e_omega[j])));
        rhs_.push_back(ext_mult(theta[i], star_e_star_omega[j]));
        reduced_.push_back(ext_mult(theta[i], l_omega[j]));
      }
  }

  [[nodiscard]] int dim() const { return m_; }
  [[nodiscard]] int degree() const { return p_; }

  [[nodiscard]] Form lhs(const ExactHessian& h) const { return combine(h, lhs_); }
  [[nodiscard]] Form rhs(const ExactHessian& h) const { return combine(h, rhs_); }
  [[nodiscard]] Form reduced(const ExactHessian& h) const { return combine(h, reduced_); }

 private:
  [[nodiscard]] Form combine(const ExactHessian& h, const std::vector<Form>& k) const {
    if (h.dim() != m_) throw exterior::DimensionMismatch("Hessian and kernel dimensions differ");
    Form out(m_, p_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        if (sgn(h(i, j)) != 0) out += h(i, j) * k[static_cast<std::size_t>(i * m_ + j)];
    return out;
  }

  int m_, p_;
  std::vector<Form> lhs_, rhs_, reduced_;
};

struct StarCommutationResult {
  bool lhs_reduction = false;      // lhs = -(-1)^{p(m-p-1)} S
  bool rhs_reduction = false;      // rhs = (-1)^{(p-1)(m-p)} S
  bool relation = false;           // lhs = (-1)^{m-1} rhs
  bool printed_chain_sign = false; // lhs = +(-1)^{p(m-p-1)} S, the sign as printed
  [[nodiscard]] bool pass() const { return lhs_reduction && rhs_reduction && relation; }
};

inline StarCommutationResult verify_star_commutation(const ExactHessian& h, const StarCommutationKernel& k) {
  if (!h.is_symmetric() || !h.is_harmonic()) throw std::domain_error("Hessian must be symmetric and trace free");
  const int m = k.dim(), p = k.degree();
  const Form lhs = k.lhs(h), rhs = k.rhs(h), s = k.reduced(h);
  const Rational chain_sign = exterior::parity_sign(long{p} * (m - p - 1));
  const Rational rhs_sign = exterior::parity_sign(long{p - 1} * (m - p));
  StarCommutationResult r;
  // The chain turns sum f_ij l(e_i)e(theta_j) Omega into sum f_ij e(theta_i)l(e_j) Omega;
  // with tr f = 0 the anticommutator gives a minus sign there.
  r.lhs_reduction = lhs == Rational(-chain_sign) * s;
  r.printed_chain_sign = lhs == chain_sign * s;
  r.rhs_reduction = rhs == rhs_sign * s;
  r.relation = lhs == Rational(exterior::parity_sign(m - 1)) * rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Refined Kato chain for quaternionic-harmonic Hessians
//
//   |H|^2 >= f_dd^2 + sum_{A in I,J,K} f_{Ad,Ad}^2 + 2 sum_{B != d} f_dB^2   (bound1)
//         >= f_dd^2 + (1/3)(sum_A f_{Ad,Ad})^2 + 2 sum_{B != d} f_dB^2      (bound2)
//         >= (4/3) sum_B f_dB^2                                              (bound3)
// where d is the gradient direction.

struct KatoChain {
  Rational norm_squared, bound1, bound2, bound3, gap;
  [[nodiscard]] bool holds() const {
    return norm_squared >= bound1 && bound1 >= bound2 && bound2 >= bound3 && sgn(gap) >= 0;
  }
};

inline KatoChain refined_kato_chain(const ExactHessian& h, int gradient_direction = 0) {
  if (h.frame.layout() != Layout::Grouped) throw std::domain_error("refined Kato chain expects the grouped layout");
  if (!h.is_symmetric() || !h.is_quaternionic_harmonic())
    throw std::domain_error("refined Kato chain needs a symmetric quaternionic-harmonic Hessian");
  const int m = h.dim(), d = gradient_direction;
  if (d < 0 || d >= m) throw std::out_of_range("gradient direction out of range");
  Rational partner_squares = 0, partner_sum = 0, row_off = 0;
  for (Structure a : {Structure::I, Structure::J, Structure::K}) {
    const int q = h.frame.apply(a, d).index;
    partner_squares += h(q, q) * h(q, q);
    partner_sum += h(q, q);
  }
  for (int b = 0; b < m; ++b)
    if (b != d) row_off += h(d, b) * h(d, b);
  const Rational fdd2 = h(d, d) * h(d, d);
  KatoChain c;
  c.norm_squared = h.norm_squared();
  c.bound1 = fdd2 + partner_squares + 2 * row_off;
  c.bound2 = fdd2 + partner_sum * partner_sum / 3 + 2 * row_off;
  c.bound3 = Rational(4, 3) * (fdd2 + row_off);
  c.gap = c.norm_squared - c.bound3;
  return c;
}

inline Rational refined_kato_gap(const ExactHessian& h, int gradient_direction = 0) {
  return refined_kato_chain(h, gradient_direction).gap;
}

/// The equality shape: D1 = diag(-3mu, 0, ...), D2 = diag(mu, 0, ...) on the three other roles.
inline ExactHessian kato_equality_hessian(int n, const Rational& mu) {
  ExactHessian h(build_frame(n, Layout::Grouped));
  h(0, 0) = -3 * mu;
  for (int role = 1; role < 4; ++role) {
    const int i = h.frame.index_of(0, role);
    h(i, i) = mu;
  }
  return h;
}

/// Equality-case Hessian of the Busemann function (grouped layout):
/// D1 = diag(0, -1, ..., -1) and D2 = diag(-2, -1, ..., -1) on each of I, J, K.
inline ExactHessian busemann_hessian(int n) {
  ExactHessian h(build_frame(n, Layout::Grouped));
  for (int role = 0; role < 4; ++role)
    for (int line = 0; line < n; ++line) {
      const int i = h.frame.index_of(line, role);
      h(i, i) = line == 0 ? (role == 0 ? 0 : -2) : -1;
    }
  return h;
}

}  // namespace qkcomp::quaternionic
