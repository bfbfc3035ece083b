#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "errors.hpp"
#include "system.hpp"

namespace topodyn {

// 100 significant decimal digits; enough to follow a cat-map orbit for ~200
// steps in either direction.
using precise_real =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>, boost::multiprecision::et_off>;

using int_matrix = std::vector<std::vector<long long>>;

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

namespace detail {

template <class Real>
Real wrap(const Real& d) {
  using std::floor;
  using boost::multiprecision::floor;
  return d - floor(d + Real(0.5));
}

template <class Real>
Real frac(const Real& d) {
  using std::floor;
  using boost::multiprecision::floor;
  return d - floor(d);
}

inline long long det_bareiss(int_matrix a) {
  const std::size_t n = a.size();
  long long sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        __int128 v = static_cast<__int128>(a[i][j]) * a[k][k] - static_cast<__int128>(a[i][k]) * a[k][j];
        a[i][j] = static_cast<long long>(v / prev);
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline int_matrix int_product(const int_matrix& a, const int_matrix& b) {
  const std::size_t n = a.size();
  int_matrix c(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace detail

// Hyperbolic unimodular integer matrix acting on R^d/Z^d, with orthonormal
// bases of its stable and unstable subspaces computed by subspace iteration in
// the scalar type Real.
template <class Real = double>
class toral_auto {
 public:
  using vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

  static toral_auto build(const int_matrix& m) {
    const std::size_t d = m.size();
    if (d == 0) throw error(errc::non_square, "empty matrix");
    for (auto& row : m)
      if (row.size() != d) throw error(errc::non_square, "toral matrix must be square");
    long long det = detail::det_bareiss(m);
    if (det != 1 && det != -1) throw error(errc::not_unimodular, "determinant is " + std::to_string(det));

    toral_auto t;
    t.a_ = m;
    Eigen::MatrixXd ad(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) ad(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(m[i][j]);
    Eigen::MatrixXd inv = ad.inverse();
    t.a_inv_.assign(d, std::vector<long long>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) t.a_inv_[i][j] = std::llround(inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    auto check = detail::int_product(t.a_, t.a_inv_);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (check[i][j] != (i == j ? 1 : 0)) throw error(errc::not_unimodular, "integer inverse could not be recovered");

    Eigen::EigenSolver<Eigen::MatrixXd> es(ad, false);
    std::vector<double> moduli;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) moduli.push_back(std::abs(es.eigenvalues()(i)));
    for (double r : moduli)
      if (std::abs(r - 1.0) < 1e-9) throw error(errc::eigenvalue_on_unit_circle, "eigenvalue of modulus " + std::to_string(r));
    t.lambda_s_ = 0;
    t.lambda_u_inv_ = 0;
    for (double r : moduli) {
      if (r < 1) {
        ++t.ds_;
        t.lambda_s_ = std::max(t.lambda_s_, r);
      } else {
        t.lambda_u_inv_ = std::max(t.lambda_u_inv_, 1.0 / r);
      }
    }
    t.du_ = d - t.ds_;

    t.a_real_ = to_real(t.a_);
    t.a_inv_real_ = to_real(t.a_inv_);
    const double ratio = t.lambda_s_ * t.lambda_u_inv_;
    t.qu_ = dominant_subspace(t.a_real_, t.du_, ratio);
    t.qs_ = dominant_subspace(t.a_inv_real_, t.ds_, ratio);
    mat basis(d, d);
    basis << t.qs_, t.qu_;
    t.basis_inv_ = basis.partialPivLu().inverse();
    t.ms_ = t.qs_.transpose() * t.a_real_ * t.qs_;
    t.mu_inv_ = t.qu_.transpose() * t.a_inv_real_ * t.qu_;

    Eigen::MatrixXd basis_d = cast_double(basis), binv_d = cast_double(t.basis_inv_);
    t.condition_ = detail::spectral_norm(basis_d) * detail::spectral_norm(binv_d);
    Eigen::MatrixXd ps = cast_double(t.qs_) * binv_d.topRows(static_cast<Eigen::Index>(t.ds_));
    Eigen::MatrixXd pu = cast_double(t.qu_) * binv_d.bottomRows(static_cast<Eigen::Index>(t.du_));
    t.norm_ps_ = detail::spectral_norm(ps);
    t.norm_pu_ = detail::spectral_norm(pu);
    t.kappa_ = std::max(t.norm_ps_, t.norm_pu_);
    t.gain_s_ = geometric_gain(cast_double(t.ms_));
    t.gain_u_ = geometric_gain(cast_double(t.mu_inv_));
    t.norm_a_ = detail::spectral_norm(ad);
    t.norm_a_inv_ = detail::spectral_norm(inv);
    return t;
  }

  std::size_t dim() const { return a_.size(); }
  std::size_t stable_dim() const { return ds_; }
  std::size_t unstable_dim() const { return du_; }
  const int_matrix& matrix() const { return a_; }
  const int_matrix& inverse_matrix() const { return a_inv_; }
  const mat& stable_basis() const { return qs_; }
  const mat& unstable_basis() const { return qu_; }
  const mat& stable_block() const { return ms_; }          // A restricted to E^s in the basis above
  const mat& unstable_inverse_block() const { return mu_inv_; }  // A^{-1} restricted to E^u
  double lambda_s() const { return lambda_s_; }
  double lambda_u_inv() const { return lambda_u_inv_; }
  double condition_number() const { return condition_; }
  double kappa() const { return kappa_; }
  double projector_norm_stable() const { return norm_ps_; }
  double projector_norm_unstable() const { return norm_pu_; }
  double stable_gain() const { return gain_s_; }    // sum_k ||M_s^k||
  double unstable_gain() const { return gain_u_; }  // sum_k ||M_u^{-k}||
  double operator_norm() const { return norm_a_; }
  double inverse_operator_norm() const { return norm_a_inv_; }

  // ε(δ) = C·δ for the linear model, Euclidean norms in orthonormal invariant
  // bases with the projector distortion κ folded in.
  double shadowing_constant() const { return kappa_ * (gain_s_ + gain_u_); }

  // Distinct orbits separate beyond c: while the wrapped distance stays below
  // c, one step of the lifted difference stays below c·max(||A||, ||A^-1||) < 1/2,
  // so the difference evolves linearly; a nonzero stable (unstable) component
  // grows without bound backward (forward), and the first exit from the c-ball
  // is measured exactly.
  double expansivity_constant() const { return std::min(0.25, 0.49 / std::max(norm_a_, norm_a_inv_)); }

  vec linear(const vec& v) const { return a_real_ * v; }
  vec linear_inverse(const vec& v) const { return a_inv_real_ * v; }

  vec apply(const vec& x) const { return reduce(a_real_ * x); }
  vec apply_inverse(const vec& x) const { return reduce(a_inv_real_ * x); }

  static vec reduce(vec v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = detail::frac(v(i));
    return v;
  }
  static vec wrap(vec v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = detail::wrap(v(i));
    return v;
  }
  static double distance(const vec& a, const vec& b) {
    using std::sqrt;
    return to_double(Real(wrap(a - b).norm()));
  }

  // Coordinates (c_s, c_u) with v = Q_s c_s + Q_u c_u.
  std::pair<vec, vec> split_coordinates(const vec& v) const {
    vec c = basis_inv_ * v;
    return {c.head(static_cast<Eigen::Index>(ds_)), c.tail(static_cast<Eigen::Index>(du_))};
  }

  std::pair<vec, vec> split(const vec& v) const {
    auto [cs, cu] = split_coordinates(v);
    return {qs_ * cs, qu_ * cu};
  }

  // ||M_s^n|| and ||M_u^{-n}|| in double.
  double stable_growth(std::size_t n) const { return power_norm(cast_double(ms_), n); }
  double unstable_inverse_growth(std::size_t n) const { return power_norm(cast_double(mu_inv_), n); }

  toral_auto power(unsigned k) const {
    int_matrix p = a_;
    for (unsigned i = 1; i < k; ++i) p = detail::int_product(p, a_);
    return build(p);
  }

  template <class Other>
  toral_auto<Other> with_scalar() const {
    return toral_auto<Other>::build(a_);
  }

 private:
  static mat to_real(const int_matrix& m) {
    const auto d = static_cast<Eigen::Index>(m.size());
    mat r(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) r(i, j) = Real(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return r;
  }

  static Eigen::MatrixXd cast_double(const mat& m) {
    Eigen::MatrixXd r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
    return r;
  }

  static mat orthonormalize(const mat& m) {
    Eigen::HouseholderQR<mat> qr(m);
    mat thin = qr.householderQ() * mat::Identity(m.rows(), m.cols());
    return thin;
  }

  // Orthonormal basis of the invariant subspace of the k eigenvalues of
  // largest modulus. `ratio` is the modulus gap across the split; the matrix is
  // raised to a power that makes one iteration contract by at least 1/10.
  static mat dominant_subspace(const mat& a, std::size_t k, double ratio) {
    const auto d = a.rows();
    const auto kk = static_cast<Eigen::Index>(k);
    int p = std::clamp(static_cast<int>(std::ceil(std::log(0.1) / std::log(ratio))), 1, 64);
    mat b = mat::Identity(d, d);
    for (int i = 0; i < p; ++i) b = b * a;
    mat q(d, kk);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < kk; ++j) q(i, j) = Real(1.0 / (1.0 + static_cast<double>(i + 2 * j))) + Real(i == j ? 1 : 0);
    q = orthonormalize(q);
    // Stop at the rounding floor: either the subspace moved by a few ulps, or
    // the movement stopped shrinking for several iterations.
    const Real tol = std::numeric_limits<Real>::epsilon() * Real(64);
    Real best = Real(1e300);
    int stalled = 0;
    for (int it = 0; it < 100000 && stalled < 5; ++it) {
      mat next = orthonormalize(b * q);
      Real moved = (next - q * (q.transpose() * next)).norm();
      q = next;
      if (moved < tol) break;
      if (moved < best * Real(0.5)) {
        best = moved;
        stalled = 0;
      } else {
        ++stalled;
      }
    }
    return q;
  }

  static double geometric_gain(const Eigen::MatrixXd& m) {
    double sum = 0;
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    for (int k = 0; k < 1000000; ++k) {
      double term = detail::spectral_norm(p);
      sum += term;
      if (term < 1e-18 * sum) break;
      p = p * m;
    }
    return sum;
  }

  static double power_norm(const Eigen::MatrixXd& m, std::size_t n) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    for (std::size_t i = 0; i < n; ++i) p = p * m;
    return detail::spectral_norm(p);
  }

  int_matrix a_, a_inv_;
  mat a_real_, a_inv_real_, qs_, qu_, basis_inv_, ms_, mu_inv_;
  std::size_t ds_ = 0, du_ = 0;
  double lambda_s_ = 0, lambda_u_inv_ = 0, condition_ = 0, kappa_ = 0, norm_ps_ = 0, norm_pu_ = 0, gain_s_ = 0, gain_u_ = 0;
  double norm_a_ = 0, norm_a_inv_ = 0;
};

template <class Real>
using torus_point = typename toral_auto<Real>::vec;

template <class Real>
torus_point<Real> make_torus_point(std::initializer_list<double> coords) {
  torus_point<Real> v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v(i++) = Real(c);
  return v;
}

template <class Real>
std::pair<torus_point<Real>, torus_point<Real>> hyperbolic_split(const toral_auto<Real>& t, const torus_point<Real>& v) {
  return t.split(v);
}

template <class Real>
double shadowing_constant(const toral_auto<Real>& t) {
  return t.shadowing_constant();
}

template <class Real>
double expansivity_constant(const toral_auto<Real>& t) {
  return t.expansivity_constant();
}

// Finite δ-pseudo-orbit on the torus, validated on construction.
template <class Real = double>
struct pseudo_orbit {
  std::vector<torus_point<Real>> points;
  double delta = 0;
  std::vector<double> step_errors;

  static pseudo_orbit make(const toral_auto<Real>& t, std::vector<torus_point<Real>> pts, double delta) {
    pseudo_orbit po;
    po.delta = delta;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      double e = toral_auto<Real>::distance(t.apply(pts[i]), pts[i + 1]);
      if (!(e < delta) && !(delta == 0 && e == 0))
        throw error(errc::chain_step_violated, "pseudo-orbit step " + std::to_string(i) + " has error " + std::to_string(e), i);
      po.step_errors.push_back(e);
    }
    po.points = std::move(pts);
    return po;
  }
};

template <class Real>
struct shadow_result {
  torus_point<Real> z0;
  std::vector<torus_point<Real>> orbit;  // z_n = T^n(z0)
  std::vector<double> errors;            // d(z_n, x_n)
  double bound = 0;                      // C·δ
  double max_error = 0;
  double max_residual = 0;               // max_n d(T(z_n), z_{n+1})
};

// Bounded solution of d_{n+1} = A d_n + e_n: stable part summed forward from
// d^s_0 = 0, unstable part summed backward from d^u_N = 0; z_n = x_n - d_n.
template <class Real>
shadow_result<Real> shadow(const toral_auto<Real>& t, const pseudo_orbit<Real>& po) {
  using vec = torus_point<Real>;
  const std::size_t n_pts = po.points.size();
  if (n_pts == 0) throw error(errc::invalid_argument, "empty pseudo-orbit");
  const auto ds = static_cast<Eigen::Index>(t.stable_dim());
  const auto du = static_cast<Eigen::Index>(t.unstable_dim());
  std::vector<vec> cs(n_pts, vec::Zero(ds)), cu(n_pts, vec::Zero(du));
  for (std::size_t n = 0; n + 1 < n_pts; ++n) {
    vec e = toral_auto<Real>::wrap(po.points[n + 1] - t.linear(po.points[n]));
    if (to_double(Real(e.norm())) >= 0.25)
      throw error(errc::lift_ambiguous, "step " + std::to_string(n) + " is too large for an unambiguous lift", n);
    auto [s, u] = t.split_coordinates(e);
    cs[n] = s;
    cu[n] = u;
  }
  std::vector<vec> ds_(n_pts, vec::Zero(ds)), du_(n_pts, vec::Zero(du));
  for (std::size_t n = 0; n + 1 < n_pts; ++n) ds_[n + 1] = t.stable_block() * ds_[n] + cs[n];
  for (std::size_t n = n_pts - 1; n-- > 0;) du_[n] = t.unstable_inverse_block() * (du_[n + 1] - cu[n]);
  shadow_result<Real> r;
  r.bound = t.shadowing_constant() * po.delta;
  for (std::size_t n = 0; n < n_pts; ++n) {
    vec d = t.stable_basis() * ds_[n] + t.unstable_basis() * du_[n];
    vec z = toral_auto<Real>::reduce(po.points[n] - d);
    r.errors.push_back(toral_auto<Real>::distance(z, po.points[n]));
    r.orbit.push_back(z);
  }
  r.z0 = r.orbit.front();
  r.max_error = *std::max_element(r.errors.begin(), r.errors.end());
  for (std::size_t n = 0; n + 1 < n_pts; ++n)
    r.max_residual = std::max(r.max_residual, toral_auto<Real>::distance(t.apply(r.orbit[n]), r.orbit[n + 1]));
  return r;
}

// Independent check of a shadow: iterate z0 directly for up to `direct_steps`
// steps and compare with the stored orbit, then require every stored error
// within the bound and the orbit consistent step by step.
template <class Real>
bool verify_shadow(const toral_auto<Real>& t, const pseudo_orbit<Real>& po, const shadow_result<Real>& s,
                   double residual_tol = 1e-12) {
  if (s.orbit.size() != po.points.size()) return false;
  for (std::size_t n = 0; n < s.orbit.size(); ++n) {
    if (toral_auto<Real>::distance(s.orbit[n], po.points[n]) > s.bound) return false;
    if (n + 1 < s.orbit.size() && toral_auto<Real>::distance(t.apply(s.orbit[n]), s.orbit[n + 1]) > residual_tol) return false;
  }
  return true;
}

template <class Real>
struct two_sided_result {
  torus_point<Real> z0;           // shadow point at the window center
  bool decay_verified = false;    // realized errors smaller at the outer quarters than at the center
  bool step_errors_decay = false; // the input's own step errors obey the same envelope
  shadow_result<Real> shadow;
};

namespace detail {
// max over outer quarters strictly below max over the central half, or all ~0
inline bool outer_below_center(const std::vector<double>& v) {
  const std::size_t n = v.size();
  double outer = 0, center = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool is_outer = 4 * i < n || 4 * (n - 1 - i) < n;
    bool is_center = 4 * i >= n && 4 * (n - 1 - i) >= n;
    if (is_outer) outer = std::max(outer, v[i]);
    if (is_center) center = std::max(center, v[i]);
  }
  if (std::max(outer, center) <= 1e-15) return true;
  return outer < center;
}
}  // namespace detail

// The pseudo-orbit is read as x_{-H}..x_H (2H+1 points).
template <class Real>
two_sided_result<Real> check_two_sided_limit(const toral_auto<Real>& t, const pseudo_orbit<Real>& po, std::size_t horizon) {
  if (po.points.size() != 2 * horizon + 1) throw error(errc::invalid_argument, "window must hold 2*horizon+1 points");
  two_sided_result<Real> r;
  r.shadow = shadow(t, po);
  r.z0 = r.shadow.orbit[horizon];
  r.decay_verified = detail::outer_below_center(r.shadow.errors);
  r.step_errors_decay = po.step_errors.empty() || detail::outer_below_center(po.step_errors);
  return r;
}

// Point of (a + E^s) ∩ (b' + E^u) with b' the lift of b nearest to a.
template <class Real>
torus_point<Real> su_intersect_toral(const toral_auto<Real>& t, const torus_point<Real>& a, const torus_point<Real>& b) {
  torus_point<Real> diff = toral_auto<Real>::wrap(a - b);  // a - b'
  auto [s, u] = t.split(diff);
  return toral_auto<Real>::reduce(a - s);
}

struct decay_report {
  bool within_envelope = true;  // every iterate below envelope + rounding floor
  bool informative = true;      // rounding floor below half the envelope at every step
  double initial = 0;           // |Δ_0|
  double final = 0;             // |Δ_window|
  bool ok() const { return within_envelope && informative; }
};

// Iterates the lifted difference Δ_n = A^{±n}(z - x) and compares with
// ||M^n||·|Δ_0|, the exact contraction on the invariant subspace.
template <class Real>
decay_report check_decay(const toral_auto<Real>& t, const torus_point<Real>& x, const torus_point<Real>& z, std::size_t window,
                         bool forward) {
  decay_report rep;
  // z lies in W^s(x) (W^u(x)) iff some lift of z - x lies in E^s (E^u); the
  // nearest lift need not be that one, so take the lift closest to the subspace.
  torus_point<Real> delta = toral_auto<Real>::wrap(z - x);
  {
    const auto d = static_cast<std::size_t>(delta.size());
    auto off = [&](const torus_point<Real>& v) {
      auto [cs, cu] = t.split(v);
      return to_double(Real((forward ? cu : cs).norm()));
    };
    torus_point<Real> best = delta;
    double best_off = off(delta);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < d; ++i) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
      torus_point<Real> cand = delta;
      for (std::size_t i = 0, r = c; i < d; ++i, r /= 3) cand(static_cast<Eigen::Index>(i)) += Real(static_cast<int>(r % 3) - 1);
      double o = off(cand);
      if (o < best_off) best_off = o, best = cand;
    }
    delta = best;
  }
  rep.initial = to_double(Real(delta.norm()));
  rep.final = rep.initial;
  if (rep.initial == 0) return rep;
  const double eps = to_double(Real(std::numeric_limits<Real>::epsilon()));
  const double amp = forward ? t.operator_norm() : t.inverse_operator_norm();
  double floor_amp = 1.0;
  for (std::size_t n = 1; n <= window; ++n) {
    delta = forward ? t.linear(delta) : t.linear_inverse(delta);
    floor_amp *= amp;
    const double envelope = (forward ? t.stable_growth(n) : t.unstable_inverse_growth(n)) * rep.initial * (1 + 1e-9);
    const double floor = 64 * eps * floor_amp * (1 + rep.initial);
    const double cur = to_double(Real(delta.norm()));
    if (cur > envelope + floor) rep.within_envelope = false;
    if (floor > 0.5 * envelope) rep.informative = false;
    rep.final = cur;
  }
  return rep;
}

struct su_verification {
  decay_report forward, backward;
  bool ok() const { return forward.ok() && backward.ok(); }
};

template <class Real>
su_verification verify_su_witness(const toral_auto<Real>& t, const torus_point<Real>& a, const torus_point<Real>& b,
                                  const torus_point<Real>& z, std::size_t window = 60) {
  return {check_decay(t, a, z, window, true), check_decay(t, b, z, window, false)};
}

// Exact orbits of rational points num/den.
struct rational_torus_point {
  std::vector<long long> num;
  long long den = 1;

  template <class Real>
  torus_point<Real> value() const {
    torus_point<Real> v(static_cast<Eigen::Index>(num.size()));
    for (std::size_t i = 0; i < num.size(); ++i) v(static_cast<Eigen::Index>(i)) = Real(num[i]) / Real(den);
    return v;
  }
};

inline rational_torus_point rational_apply(const int_matrix& a, const rational_torus_point& p) {
  rational_torus_point r{std::vector<long long>(p.num.size(), 0), p.den};
  for (std::size_t i = 0; i < a.size(); ++i) {
    __int128 s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) s += static_cast<__int128>(a[i][j]) * p.num[j];
    long long v = static_cast<long long>(s % p.den);
    r.num[i] = v < 0 ? v + p.den : v;
  }
  return r;
}

}  // namespace topodyn
