#pragma once

#include "hermlie/hermitian.hpp"

namespace hermlie {

enum class ConnectionKind { levi_civita, chern, weyl };

inline const char* to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::levi_civita: return "levi_civita";
    case ConnectionKind::chern: return "chern";
    case ConnectionKind::weyl: return "weyl";
  }
  return "unknown";
}

/// Connection coefficients gamma(l,i,j): nabla_{e_i} e_j = sum_l gamma(l,i,j) e_l.
/// owner points at the structure the coefficients were built from and must
/// outlive them.
struct ConnectionCoefficients {
  ConnectionKind kind = ConnectionKind::levi_civita;
  NdArray gamma;
  const AlmostHermitianStructure* owner = nullptr;
};

/// T(k,i,j): torsion T(e_i,e_j) = nabla_i e_j - nabla_j e_i - [e_i,e_j].
inline NdArray torsion(const ConnectionCoefficients& C) {
  const auto& S = *C.owner;
  const int n = S.algebra.dim;
  NdArray T = NdArray::cube(3, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        T(k, i, j) = C.gamma(k, i, j) - C.gamma(k, j, i) - S.algebra.c(i, j, k);
  return T;
}

/// (nabla_{e_i} g)(e_j, e_k), which vanishes for metric connections.
inline NdArray nabla_g(const ConnectionCoefficients& C) {
  const auto& S = *C.owner;
  const int n = S.algebra.dim;
  NdArray out = NdArray::cube(3, n);
  for (int i = 0; i < n; ++i) {
    const Mat Gi = middle_slice(C.gamma, i);
    const Mat Di = -(Gi.transpose() * S.g + S.g * Gi);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = Di(j, k);
  }
  return out;
}

/// (nabla_{e_i} J) as endomorphism components out(l,i,j).
inline NdArray nabla_J(const ConnectionCoefficients& C) {
  const auto& S = *C.owner;
  const int n = S.algebra.dim;
  NdArray out = NdArray::cube(3, n);
  for (int i = 0; i < n; ++i) {
    const Mat Gi = middle_slice(C.gamma, i);
    set_middle_slice(out, i, Mat(Gi * S.J - S.J * Gi));
  }
  return out;
}

inline ConnectionCoefficients levi_civita(const AlmostHermitianStructure& S) {
  const int n = S.algebra.dim;
  // Koszul on invariant fields: 2 g(nabla_i e_j, e_k) = g([e_i,e_j], e_k)
  // - g([e_j,e_k], e_i) + g([e_k,e_i], e_j)
  NdArray K = NdArray::cube(3, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        K(i, j, k) = 0.5 * (fiber_last(S.algebra.c, i, j).dot(S.g.col(k)) -
                            fiber_last(S.algebra.c, j, k).dot(S.g.col(i)) +
                            fiber_last(S.algebra.c, k, i).dot(S.g.col(j)));
  ConnectionCoefficients C;
  C.kind = ConnectionKind::levi_civita;
  C.owner = &S;
  C.gamma = NdArray::cube(3, n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += S.ginv(l, k) * K(i, j, k);
        C.gamma(l, i, j) = s;
      }
  return C;
}

// Connection coefficients keep a pointer into S, so a temporary argument
// would dangle; the same guard is applied to the builders below.
ConnectionCoefficients levi_civita(AlmostHermitianStructure&&) = delete;

namespace detail {
inline void check_postcondition(const char* name, double residual, double tol) {
  if (!(residual <= tol)) throw validation_error(name, residual);
}
}  // namespace detail

/// Weyl connection of the pair (g, theta): torsion free with
/// nabla g = theta (x) g. Built from Levi-Civita by
/// nabla_X Y = D_X Y - (1/2) theta(X) Y - (1/2) theta(Y) X + (1/2) g(X,Y) theta^sharp.
/// Postconditions are asserted against the supplied one form.
inline ConnectionCoefficients weyl_connection(const AlmostHermitianStructure& S, const Vec& theta,
                                              double tol = 1e-8) {
  const int n = S.algebra.dim;
  ConnectionCoefficients C = levi_civita(S);
  C.kind = ConnectionKind::weyl;
  const Vec theta_sharp = S.ginv * theta;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double add = 0.5 * S.g(i, j) * theta_sharp(l);
        if (l == j) add -= 0.5 * theta(i);
        if (l == i) add -= 0.5 * theta(j);
        C.gamma(l, i, j) += add;
      }

  double torsion_res = torsion(C).max_abs();
  detail::check_postcondition("weyl torsion", torsion_res, tol);
  const NdArray Dg = nabla_g(C);
  double metric_res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        metric_res = std::max(metric_res, std::abs(Dg(i, j, k) - theta(i) * S.g(j, k)));
  detail::check_postcondition("weyl metric covariance", metric_res, tol);
  return C;
}

inline ConnectionCoefficients weyl_connection(const AlmostHermitianStructure& S,
                                              double tol = 1e-8) {
  return weyl_connection(S, S.lee.theta, tol);
}

ConnectionCoefficients weyl_connection(AlmostHermitianStructure&&, const Vec&,
                                       double = 1e-8) = delete;
ConnectionCoefficients weyl_connection(AlmostHermitianStructure&&, double = 1e-8) = delete;

/// Chern connection: Hermitian (nabla g = nabla J = 0) with vanishing (1,1)
/// torsion. The validate flag controls whether the defining postconditions
/// are asserted; they hold only when theta is the structure's Lee form.
inline ConnectionCoefficients chern_connection(const AlmostHermitianStructure& S, const Vec& theta,
                                               bool validate, double tol = 1e-8) {
  const int n = S.algebra.dim;
  ConnectionCoefficients C = levi_civita(S);
  C.kind = ConnectionKind::chern;
  const Vec theta_sharp = S.ginv * theta;
  const auto& N = S.nijenhuis_tensor.n;
  for (int i = 0; i < n; ++i) {
    const double thJi = theta.dot(S.J.col(i));  // theta(J e_i)
    for (int j = 0; j < n; ++j) {
      Vec w(n);
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int p = 0; p < n; ++p) s += S.g(i, p) * N(p, m, j);
        w(m) = s;
      }
      const Vec wn = S.ginv * w;
      for (int l = 0; l < n; ++l) {
        double add = -0.5 * thJi * S.J(l, j) + 0.5 * S.g(i, j) * theta_sharp(l) + wn(l);
        if (l == i) add -= 0.5 * theta(j);
        C.gamma(l, i, j) += add;
      }
    }
  }

  if (validate) {
    detail::check_postcondition("chern metric parallelism", nabla_g(C).max_abs(), tol);
    detail::check_postcondition("chern J parallelism", nabla_J(C).max_abs(), tol);
    // (1,1) part of the torsion: T(JX, JY) + T(X, Y)
    const NdArray T = torsion(C);
    double res11 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec tJ = Vec::Zero(n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (S.J(a, i) != 0.0 && S.J(b, j) != 0.0)
              tJ += S.J(a, i) * S.J(b, j) * fiber_first(T, a, b);
        tJ += fiber_first(T, i, j);
        res11 = std::max(res11, max_abs(tJ));
      }
    detail::check_postcondition("chern (1,1) torsion", res11, tol);
  }
  return C;
}

inline ConnectionCoefficients chern_connection(const AlmostHermitianStructure& S,
                                               double tol = 1e-8) {
  return chern_connection(S, S.lee.theta, true, tol);
}

ConnectionCoefficients chern_connection(AlmostHermitianStructure&&, const Vec&, bool,
                                        double = 1e-8) = delete;
ConnectionCoefficients chern_connection(AlmostHermitianStructure&&, double = 1e-8) = delete;

/// Curvature components R(l,i,j,k): R(e_i,e_j) e_k = sum_l R(l,i,j,k) e_l,
/// with the convention R(X,Y) = nabla_{[X,Y]} - [nabla_X, nabla_Y].
struct CurvatureTensor {
  ConnectionKind kind = ConnectionKind::levi_civita;
  NdArray R;
  const AlmostHermitianStructure* owner = nullptr;
};

inline CurvatureTensor curvature(const ConnectionCoefficients& C) {
  const auto& S = *C.owner;
  const int n = S.algebra.dim;
  CurvatureTensor R;
  R.kind = C.kind;
  R.owner = C.owner;
  R.R = NdArray(std::vector<int>{n, n, n, n});
  for (int i = 0; i < n; ++i) {
    const Mat Gi = middle_slice(C.gamma, i);
    for (int j = 0; j < n; ++j) {
      const Mat Gj = middle_slice(C.gamma, j);
      Mat M = -(Gi * Gj - Gj * Gi);
      for (int m = 0; m < n; ++m) {
        const double cm = S.algebra.c(i, j, m);
        if (cm != 0.0) M += cm * middle_slice(C.gamma, m);
      }
      set_pair_slice(R.R, i, j, M);
    }
  }
  return R;
}

/// Covariant derivative with a new leading covariant slot: covariant slots
/// contract with -gamma, contravariant slots with +gamma.
inline InvariantTensor covariant_derivative(const ConnectionCoefficients& C,
                                            const InvariantTensor& T) {
  const auto& S = *C.owner;
  const int n = S.algebra.dim;
  const int k = T.components.rank();
  if (static_cast<int>(T.variance.size()) != k)
    throw std::invalid_argument("covariant_derivative: variance arity mismatch");

  InvariantTensor out;
  out.variance.push_back(Slot::covariant);
  out.variance.insert(out.variance.end(), T.variance.begin(), T.variance.end());
  out.basis_id = T.basis_id;
  std::vector<int> shape(static_cast<std::size_t>(k + 1), n);
  out.components = NdArray(shape);

  std::vector<int> inner(static_cast<std::size_t>(k));
  std::vector<int> src;
  for_each_index(out.components.shape(), [&](const std::vector<int>& idx) {
    const int i = idx[0];
    for (std::size_t t = 0; t + 1 < idx.size(); ++t) inner[t] = idx[t + 1];
    double s = 0.0;
    for (int slot = 0; slot < k; ++slot) {
      src = inner;
      const int fixed = inner[static_cast<std::size_t>(slot)];
      for (int m = 0; m < n; ++m) {
        src[static_cast<std::size_t>(slot)] = m;
        if (T.variance[static_cast<std::size_t>(slot)] == Slot::covariant)
          s -= C.gamma(m, i, fixed) * T.components.at(src);
        else
          s += C.gamma(fixed, i, m) * T.components.at(src);
      }
    }
    out.components.at(idx) = s;
  });
  return out;
}

/// Covariant derivative of an all-covariant coefficient table;
/// out(i, j_1..j_k) = (nabla_{e_i} a)(e_{j_1}..e_{j_k}).
inline NdArray covariant_derivative_form(const ConnectionCoefficients& C, const NdArray& a) {
  InvariantTensor T;
  T.variance.assign(static_cast<std::size_t>(a.rank()), Slot::covariant);
  T.components = a;
  return covariant_derivative(C, T).components;
}

/// (nabla theta) of a 1-form as the matrix out(i,j) = (nabla_{e_i} theta)(e_j).
inline Mat covariant_derivative_one_form(const ConnectionCoefficients& C, const Vec& theta) {
  const auto& S = *C.owner;
  const int n = S.algebra.dim;
  Mat out(n, n);
  for (int i = 0; i < n; ++i) {
    const Mat Gi = middle_slice(C.gamma, i);
    out.row(i) = -(Gi.transpose() * theta).transpose();
  }
  return out;
}

/// Codifferential with respect to the supplied connection (Riemannian when
/// given Levi-Civita): (delta a) = -sum ginv(u,m) (nabla_{e_u} a)(e_m, ..).
inline NdArray codifferential(const ConnectionCoefficients& C, const NdArray& a) {
  const auto& S = *C.owner;
  const int n = S.algebra.dim;
  const int k = a.rank();
  if (k == 0) throw std::invalid_argument("codifferential: rank-0 input");
  const NdArray Da = covariant_derivative_form(C, a);
  NdArray out = NdArray::cube(k - 1, n);
  std::vector<int> full(static_cast<std::size_t>(k + 1));
  for_each_index(out.shape(), [&](const std::vector<int>& idx) {
    double s = 0.0;
    for (int u = 0; u < n; ++u)
      for (int m = 0; m < n; ++m) {
        if (S.ginv(u, m) == 0.0) continue;
        full[0] = u;
        full[1] = m;
        for (std::size_t t = 0; t < idx.size(); ++t) full[t + 2] = idx[t];
        s -= S.ginv(u, m) * Da.at(full);
      }
    out.at(idx) = s;
  });
  return out;
}

inline NdArray codifferential(const AlmostHermitianStructure& S, const NdArray& a) {
  const ConnectionCoefficients lc = levi_civita(S);
  return codifferential(lc, a);
}

inline double codifferential(const AlmostHermitianStructure& S, const Vec& one_form) {
  return codifferential(S, to_nd(one_form)).flat(0);
}

inline Vec codifferential(const AlmostHermitianStructure& S, const Mat& two_form) {
  return to_vec(codifferential(S, to_nd(two_form)));
}

}  // namespace hermlie
