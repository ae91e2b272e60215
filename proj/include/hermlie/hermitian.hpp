#pragma once

#include "hermlie/lie_algebra.hpp"

#include <cstdio>
#include <string>

namespace hermlie {

namespace detail {
inline std::string short_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}
}  // namespace detail

/// Construction-time invariant violation; carries the name of the violated
/// invariant and the measured residual.
struct validation_error : std::runtime_error {
  std::string invariant;
  double residual;
  validation_error(const std::string& inv, double res)
      : std::runtime_error("validation failed: " + inv + " (residual " +
                           detail::short_double(res) + ")"),
        invariant(inv),
        residual(res) {}
};

/// Lee form and the least-squares residual of d F = theta ^ F.
struct LeeForm {
  Vec theta;
  double residual = 0.0;
};

/// Nijenhuis tensor components n(k,i,j): N(e_i, e_j) = sum_k n(k,i,j) e_k,
/// with the 1/4 normalization, plus its squared norm.
struct NijenhuisTensor {
  NdArray n;
  double norm_sq = 0.0;
};

struct BuildOptions {
  /// Record invariant residuals instead of throwing, and antisymmetrize the
  /// fundamental form so downstream machinery still runs. Meant for probing
  /// deliberately broken inputs; default construction is strict.
  bool lenient = false;
  double tol = 1e-9;
};

/// Left invariant almost Hermitian data (g, J) on a Lie algebra, J^2 = -Id
/// and g(J., J.) = g, with everything derived from them populated once at
/// construction: F(X,Y) = g(JX,Y), volume v_g = (1/2) F ^ F, a g-orthonormal
/// adapted frame (f, Jf, h, Jh), the Nijenhuis tensor and the Lee form.
struct AlmostHermitianStructure {
  LieAlgebraStructure algebra;
  Mat g;
  Mat J;

  Mat ginv;
  Mat F;
  NdArray volume;
  Mat frame;      // columns are the adapted frame vectors
  Mat frame_inv;
  NijenhuisTensor nijenhuis_tensor;
  LeeForm lee;

  double metric_symmetry_residual = 0.0;
  double j_square_residual = 0.0;
  double compatibility_residual = 0.0;
};

inline Mat jplus(const AlmostHermitianStructure& S, const Mat& psi) {
  return 0.5 * (psi + S.J.transpose() * psi * S.J);
}
inline Mat jminus(const AlmostHermitianStructure& S, const Mat& psi) {
  return 0.5 * (psi - S.J.transpose() * psi * S.J);
}

/// J acting on 1-forms: (J a)(X) = -a(JX).
inline Vec j_one_form(const AlmostHermitianStructure& S, const Vec& a) {
  return -S.J.transpose() * a;
}

/// J acting on k-forms: (J a)(X_1..X_k) = (-1)^k a(JX_1..JX_k).
inline NdArray form_J_action(const AlmostHermitianStructure& S, const NdArray& a) {
  NdArray out = contract_each_slot(a, S.J);
  if (a.rank() % 2 == 1) out *= -1.0;
  return out;
}

inline Vec sharp(const AlmostHermitianStructure& S, const Vec& alpha) { return S.ginv * alpha; }
inline Vec flat(const AlmostHermitianStructure& S, const Vec& X) { return S.g * X; }

namespace detail {
/// Raise every slot of a coefficient table with ginv.
inline NdArray raise_all(const Mat& ginv, const NdArray& a) {
  NdArray cur = a;
  for (int slot = 0; slot < a.rank(); ++slot) {
    NdArray next(cur.shape());
    std::vector<int> src;
    for_each_index(cur.shape(), [&](const std::vector<int>& idx) {
      double s = 0.0;
      src = idx;
      for (int m = 0; m < cur.extent(slot); ++m) {
        src[static_cast<std::size_t>(slot)] = m;
        s += ginv(idx[static_cast<std::size_t>(slot)], m) * cur.at(src);
      }
      next.at(idx) = s;
    });
    cur = std::move(next);
  }
  return cur;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int t = 2; t <= k; ++t) f *= t;
  return f;
}
}  // namespace detail

/// Inner product of k-forms: raise all indices, contract, divide by k!.
inline double form_ip(const AlmostHermitianStructure& S, const NdArray& a, const NdArray& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("form_ip: rank mismatch");
  const int k = a.rank();
  if (k == 0) return a.flat(0) * b.flat(0);
  const NdArray ar = detail::raise_all(S.ginv, a);
  double s = 0.0;
  for (std::size_t i = 0; i < ar.size(); ++i) s += ar.flat(i) * b.flat(i);
  return s / detail::factorial(k);
}

inline double form_ip(const AlmostHermitianStructure& S, const Vec& a, const Vec& b) {
  return a.dot(S.ginv * b);
}

inline double form_ip(const AlmostHermitianStructure& S, const Mat& a, const Mat& b) {
  return 0.5 * ((S.ginv * a * S.ginv).transpose() * b).trace();
}

template <class T>
double form_norm(const AlmostHermitianStructure& S, const T& a) {
  return std::sqrt(std::abs(form_ip(S, a, a)));
}

/// Frobenius norm of a bilinear form over any g-orthonormal frame.
inline double bil_norm(const AlmostHermitianStructure& S, const Mat& m) {
  return std::sqrt(std::abs((S.ginv * m * S.ginv * m.transpose()).trace()));
}

/// Decomposition of a 2-tensor into J-invariant, J-anti-invariant, symmetric
/// and antisymmetric parts.
struct TwoTensorParts {
  Mat j_invariant;
  Mat j_anti_invariant;
  Mat symmetric;
  Mat antisymmetric;
};

inline TwoTensorParts decompose_2tensor(const AlmostHermitianStructure& S, const Mat& psi) {
  return TwoTensorParts{jplus(S, psi), jminus(S, psi), sym(psi), antisym(psi)};
}

/// N_X(Y,Z) = g(N(Y,Z), X) as an antisymmetric 2-form.
inline Mat n_lower(const AlmostHermitianStructure& S, const Vec& X) {
  const int n = S.algebra.dim;
  const Vec gX = S.g * X;
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += S.nijenhuis_tensor.n(k, i, j) * gX(k);
      out(i, j) = s;
    }
  return out;
}

/// Hodge star through the adapted frame: express in frame components, pair
/// each k-subset with its signed complement, map back. Orientation is the
/// one of v_g, so star of 1 is v_g and star F = F in dimension 4.
inline NdArray hodge_star(const AlmostHermitianStructure& S, const NdArray& alpha) {
  const int dim = S.algebra.dim;
  const int k = alpha.rank();
  if (k > dim) throw std::invalid_argument("hodge_star: degree exceeds dimension");
  const NdArray aF = contract_each_slot(alpha, S.frame);
  NdArray out_frame = NdArray::cube(dim - k, dim);
  for (const auto& comb : combinations(dim, k)) {
    std::vector<int> rest;
    for (int t = 0; t < dim; ++t)
      if (std::find(comb.begin(), comb.end(), t) == comb.end()) rest.push_back(t);
    std::vector<int> joined = comb;
    joined.insert(joined.end(), rest.begin(), rest.end());
    const int sign = perm_sign(joined);
    const double val = aF.at(comb);
    std::vector<int> perm = rest;
    do {
      out_frame.at(perm) += sign * val * perm_sign_rel(rest, perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return contract_each_slot(out_frame, S.frame_inv);
}

inline Mat hodge_star(const AlmostHermitianStructure& S, const Mat& two_form) {
  return to_mat(hodge_star(S, to_nd(two_form)));
}

namespace detail {

inline NdArray compute_nijenhuis(const LieAlgebraStructure& L, const Mat& J) {
  const int n = L.dim;
  NdArray N = NdArray::cube(3, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // [Je_i, Je_j] - [e_i, e_j] - J[Je_i, e_j] - J[e_i, Je_j], then / 4
      Vec term = Vec::Zero(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (J(a, i) != 0.0 && J(b, j) != 0.0) term += J(a, i) * J(b, j) * fiber_last(L.c, a, b);
      term -= fiber_last(L.c, i, j);
      Vec m1 = Vec::Zero(n);
      for (int a = 0; a < n; ++a)
        if (J(a, i) != 0.0) m1 += J(a, i) * fiber_last(L.c, a, j);
      Vec m2 = Vec::Zero(n);
      for (int b = 0; b < n; ++b)
        if (J(b, j) != 0.0) m2 += J(b, j) * fiber_last(L.c, i, b);
      term -= J * m1;
      term -= J * m2;
      term *= 0.25;
      for (int k = 0; k < n; ++k) N(k, i, j) = term(k);
    }
  }
  return N;
}

inline double nijenhuis_norm_sq(const NdArray& N, const Mat& g, const Mat& ginv) {
  const int n = static_cast<int>(g.rows());
  double s = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int m = 0; m < n; ++m)
            for (int nn = 0; nn < n; ++nn)
              s += N(p, i, j) * N(q, m, nn) * ginv(i, m) * ginv(j, nn) * g(p, q);
  return s;
}

inline Mat adapted_frame(const Mat& g, const Mat& J, double tol = 1e-9) {
  const int n = static_cast<int>(g.rows());
  std::vector<Vec> cols;
  for (int cand = 0; cand < n && static_cast<int>(cols.size()) < n; ++cand) {
    Vec w = Vec::Zero(n);
    w(cand) = 1.0;
    for (const Vec& u : cols) w -= (u.dot(g * w)) * u;
    const double len = std::sqrt(std::abs(w.dot(g * w)));
    if (len <= tol) continue;
    Vec v = w / len;
    cols.push_back(v);
    cols.push_back(J * v);
  }
  if (static_cast<int>(cols.size()) != n)
    throw validation_error("adapted frame construction", static_cast<double>(cols.size()));
  Mat P(n, n);
  for (int a = 0; a < n; ++a) P.col(a) = cols[static_cast<std::size_t>(a)];
  return P;
}

inline LeeForm compute_lee(const LieAlgebraStructure& L, const AlmostHermitianStructure& S) {
  const int n = L.dim;
  const NdArray Fnd = to_nd(S.F);
  const NdArray dF = exterior_derivative(L, Fnd);
  std::vector<NdArray> cols;
  cols.reserve(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    Vec em = Vec::Zero(n);
    em(m) = 1.0;
    cols.push_back(wedge(to_nd(em), Fnd));
  }
  Mat A(n, n);
  Vec bvec(n);
  for (int m = 0; m < n; ++m) {
    for (int mm = 0; mm < n; ++mm) A(m, mm) = form_ip(S, cols[static_cast<std::size_t>(m)],
                                                      cols[static_cast<std::size_t>(mm)]);
    bvec(m) = form_ip(S, cols[static_cast<std::size_t>(m)], dF);
  }
  LeeForm lee;
  lee.theta = A.completeOrthogonalDecomposition().solve(bvec);
  NdArray res = dF;
  res -= wedge(to_nd(lee.theta), Fnd);
  lee.residual = std::sqrt(std::abs(form_ip(S, res, res)));
  return lee;
}

}  // namespace detail

inline AlmostHermitianStructure build_structure(const LieAlgebraStructure& L, const Mat& g,
                                                const Mat& J, const BuildOptions& opt = {}) {
  detail::require_algebra_shape(L);
  const int n = L.dim;
  if (g.rows() != n || g.cols() != n || J.rows() != n || J.cols() != n)
    throw std::invalid_argument("build_structure: g and J must be dim x dim");

  AlmostHermitianStructure S;
  S.algebra = L;
  S.g = g;
  S.J = J;

  const Diagnostics diag = validate_algebra(L);
  if (!opt.lenient && diag.jacobi_residual > 1e-6)
    throw validation_error("algebra Jacobi identity", diag.jacobi_residual);

  S.metric_symmetry_residual = max_abs(Mat(g - g.transpose()));
  if (!opt.lenient && S.metric_symmetry_residual > opt.tol)
    throw validation_error("metric symmetry", S.metric_symmetry_residual);

  const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  const double min_eig = es.eigenvalues().minCoeff();
  if (!opt.lenient && min_eig <= opt.tol)
    throw validation_error("metric positive definiteness", min_eig);

  S.j_square_residual = max_abs(Mat(J * J + Mat::Identity(n, n)));
  if (!opt.lenient && S.j_square_residual > opt.tol)
    throw validation_error("J squared plus identity", S.j_square_residual);

  S.compatibility_residual = max_abs(Mat(J.transpose() * g * J - g));
  if (!opt.lenient && S.compatibility_residual > opt.tol)
    throw validation_error("metric J compatibility", S.compatibility_residual);

  S.ginv = g.inverse();
  S.F = J.transpose() * g;
  if (opt.lenient) S.F = antisym(S.F);

  S.volume = wedge(to_nd(S.F), to_nd(S.F));
  S.volume *= 0.5;

  S.frame = detail::adapted_frame(S.g, S.J);
  S.frame_inv = S.frame.inverse();

  S.nijenhuis_tensor.n = detail::compute_nijenhuis(L, J);
  S.nijenhuis_tensor.norm_sq = detail::nijenhuis_norm_sq(S.nijenhuis_tensor.n, S.g, S.ginv);

  S.lee = detail::compute_lee(L, S);
  return S;
}

inline LeeForm lee_form(const AlmostHermitianStructure& S) { return S.lee; }
inline NijenhuisTensor nijenhuis(const AlmostHermitianStructure& S) { return S.nijenhuis_tensor; }

}  // namespace hermlie
