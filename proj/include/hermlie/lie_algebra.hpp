#pragma once

#include "hermlie/tensor.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hermlie {

/// One bracket relation [e_i, e_j] = sum_k coeff_k e_k with 1-based indices.
struct BracketEntry {
  int i = 0;
  int j = 0;
  std::vector<std::pair<int, double>> out;  // (k, coeff), 1-based
};

/// Structure constants of a finite dimensional real Lie algebra over a fixed
/// basis e_1..e_dim: [e_i, e_j] = sum_k c(i,j,k) e_k, antisymmetric in (i,j).
struct LieAlgebraStructure {
  int dim = 0;
  NdArray c;  // rank 3, all extents equal to dim

  static LieAlgebraStructure zero(int dim) {
    LieAlgebraStructure L;
    L.dim = dim;
    L.c = NdArray::cube(3, dim);
    return L;
  }

  /// Build from 1-based bracket relations; both orientations of each pair are
  /// stored so that c stays antisymmetric. Entries with i == j are rejected.
  static LieAlgebraStructure from_brackets(int dim, const std::vector<BracketEntry>& entries) {
    LieAlgebraStructure L = zero(dim);
    for (const auto& e : entries) {
      if (e.i < 1 || e.i > dim || e.j < 1 || e.j > dim)
        throw std::invalid_argument("from_brackets: bracket index out of range");
      if (e.i == e.j) throw std::invalid_argument("from_brackets: repeated index in bracket pair");
      for (const auto& [k, coeff] : e.out) {
        if (k < 1 || k > dim) throw std::invalid_argument("from_brackets: output index out of range");
        L.c(e.i - 1, e.j - 1, k - 1) += coeff;
        L.c(e.j - 1, e.i - 1, k - 1) -= coeff;
      }
    }
    return L;
  }
};

/// Structural health of a bracket table. Residuals are max-abs; the flags
/// apply an absolute tolerance to the corresponding residual.
struct Diagnostics {
  double jacobi_residual = 0.0;
  double antisymmetry_residual = 0.0;
  double unimodular_residual = 0.0;  // max over basis of |tr ad_{e_i}|
  bool unimodular = false;
  bool nilpotent_hint = false;  // every ad_{e_i} nilpotent within tolerance
};

namespace detail {
inline void require_algebra_shape(const LieAlgebraStructure& L) {
  if (L.dim <= 0) throw std::invalid_argument("algebra: dimension must be positive");
  if (L.c.rank() != 3 || L.c.extent(0) != L.dim || L.c.extent(1) != L.dim ||
      L.c.extent(2) != L.dim)
    throw std::invalid_argument("algebra: structure constant table must be dim x dim x dim");
}
}  // namespace detail

/// Matrix of ad_X on basis columns: (ad_X)(k,j) = sum_i X_i c(i,j,k),
/// so ad_X Y = [X, Y].
inline Mat ad_matrix(const LieAlgebraStructure& L, const Vec& X) {
  detail::require_algebra_shape(L);
  if (X.size() != L.dim) throw std::invalid_argument("ad_matrix: vector dimension mismatch");
  Mat ad = Mat::Zero(L.dim, L.dim);
  for (int i = 0; i < L.dim; ++i) {
    if (X(i) == 0.0) continue;
    for (int j = 0; j < L.dim; ++j)
      for (int k = 0; k < L.dim; ++k) ad(k, j) += X(i) * L.c(i, j, k);
  }
  return ad;
}

inline Vec bracket(const LieAlgebraStructure& L, const Vec& X, const Vec& Y) {
  if (X.size() != L.dim || Y.size() != L.dim)
    throw std::invalid_argument("bracket: vector dimension mismatch");
  return ad_matrix(L, X) * Y;
}

inline Diagnostics validate_algebra(const LieAlgebraStructure& L, double tol = 1e-9) {
  detail::require_algebra_shape(L);
  Diagnostics d;
  const int n = L.dim;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        d.antisymmetry_residual =
            std::max(d.antisymmetry_residual, std::abs(L.c(i, j, k) + L.c(j, i, k)));

  // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] componentwise
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += L.c(i, j, m) * L.c(m, k, l) + L.c(j, k, m) * L.c(m, i, l) +
                 L.c(k, i, m) * L.c(m, j, l);
          d.jacobi_residual = std::max(d.jacobi_residual, std::abs(s));
        }

  bool nilp = true;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    Mat ad = ad_matrix(L, e);
    d.unimodular_residual = std::max(d.unimodular_residual, std::abs(ad.trace()));
    Mat p = Mat::Identity(n, n);
    for (int t = 0; t < n; ++t) p = p * ad;
    if (max_abs(p) > tol) nilp = false;
  }
  d.unimodular = d.unimodular_residual <= tol;
  d.nilpotent_hint = nilp;
  return d;
}

/// Differential of an invariant k-form, k < dim:
/// (d a)(X_0..X_k) = sum_{p<q} (-1)^{p+q} a([X_p, X_q], X_0..^p..^q..X_k),
/// so on 1-forms (d a)(X,Y) = -a([X,Y]).
inline NdArray exterior_derivative(const LieAlgebraStructure& L, const NdArray& alpha) {
  detail::require_algebra_shape(L);
  const int k = alpha.rank();
  if (k >= L.dim) throw std::invalid_argument("exterior_derivative: degree must be below dim");
  for (int a = 0; a < k; ++a)
    if (alpha.extent(a) != L.dim)
      throw std::invalid_argument("exterior_derivative: form extent mismatch");

  NdArray out = NdArray::cube(k + 1, L.dim);
  std::vector<int> rest(static_cast<std::size_t>(k));
  for_each_index(out.shape(), [&](const std::vector<int>& idx) {
    double s = 0.0;
    for (int p = 0; p <= k; ++p) {
      for (int q = p + 1; q <= k; ++q) {
        std::size_t t = 1;  // rest[0] is the bracket slot
        for (int r = 0; r <= k; ++r) {
          if (r == p || r == q) continue;
          rest[t++] = idx[static_cast<std::size_t>(r)];
        }
        const int sgn = ((p + q) % 2 == 0) ? 1 : -1;
        double inner = 0.0;
        for (int m = 0; m < L.dim; ++m) {
          rest[0] = m;
          inner += L.c(idx[static_cast<std::size_t>(p)], idx[static_cast<std::size_t>(q)], m) *
                   alpha.at(rest);
        }
        s += sgn * inner;
      }
    }
    out.at(idx) = s;
  });
  return out;
}

inline Mat d_one_form(const LieAlgebraStructure& L, const Vec& theta) {
  return to_mat(exterior_derivative(L, to_nd(theta)));
}

inline NdArray d_two_form(const LieAlgebraStructure& L, const Mat& omega) {
  return exterior_derivative(L, to_nd(omega));
}

enum class Slot { covariant, contravariant };

/// Componentwise tensor on the algebra's fixed basis, with one variance tag
/// per slot. basis_id names the basis the components refer to.
struct InvariantTensor {
  std::vector<Slot> variance;
  NdArray components;
  std::string basis_id = "e";
};

/// Lie derivative along X of an invariant tensor: covariant slots pick up
/// -T(.., [X, e_j], ..), contravariant slots +(ad_X) applied to the output
/// index. On an endomorphism this is ad_X T - T ad_X; on a metric it is
/// -(ad_X^T g + g ad_X).
inline InvariantTensor lie_derivative(const LieAlgebraStructure& L, const Vec& X,
                                      const InvariantTensor& T) {
  const int k = T.components.rank();
  if (static_cast<int>(T.variance.size()) != k)
    throw std::invalid_argument("lie_derivative: variance arity does not match rank");
  for (int a = 0; a < k; ++a)
    if (T.components.extent(a) != L.dim)
      throw std::invalid_argument("lie_derivative: tensor extent mismatch");
  const Mat ad = ad_matrix(L, X);

  InvariantTensor out;
  out.variance = T.variance;
  out.basis_id = T.basis_id;
  out.components = NdArray(T.components.shape());
  std::vector<int> src;
  for_each_index(T.components.shape(), [&](const std::vector<int>& idx) {
    double s = 0.0;
    for (int slot = 0; slot < k; ++slot) {
      src = idx;
      const int fixed = idx[static_cast<std::size_t>(slot)];
      for (int m = 0; m < L.dim; ++m) {
        src[static_cast<std::size_t>(slot)] = m;
        if (T.variance[static_cast<std::size_t>(slot)] == Slot::covariant)
          s -= ad(m, fixed) * T.components.at(src);
        else
          s += ad(fixed, m) * T.components.at(src);
      }
    }
    out.components.at(idx) = s;
  });
  return out;
}

/// Lie derivative of an all-covariant coefficient table (a k-form or k-tensor).
inline NdArray lie_derivative_form(const LieAlgebraStructure& L, const Vec& X,
                                   const NdArray& alpha) {
  InvariantTensor T;
  T.variance.assign(static_cast<std::size_t>(alpha.rank()), Slot::covariant);
  T.components = alpha;
  return lie_derivative(L, X, T).components;
}

/// Lie derivative of an endomorphism: ad_X J - J ad_X.
inline Mat lie_derivative_endo(const LieAlgebraStructure& L, const Vec& X, const Mat& J) {
  const Mat ad = ad_matrix(L, X);
  return ad * J - J * ad;
}

/// Lie derivative of a symmetric bilinear form: -(ad_X^T g + g ad_X).
inline Mat lie_derivative_bilinear(const LieAlgebraStructure& L, const Vec& X, const Mat& g) {
  const Mat ad = ad_matrix(L, X);
  return -(ad.transpose() * g + g * ad);
}

}  // namespace hermlie
