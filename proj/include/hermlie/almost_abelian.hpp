#pragma once

#include "hermlie/verifier.hpp"

#include <optional>

namespace hermlie {

/// Parameters of a 4-dimensional almost-abelian algebra in an adapted basis:
/// the codimension-one abelian ideal is span(e1, e2, e3) and ad_{e4} acts on
/// it by the matrix [[a, b^T], [v, A]] in the splitting R e1 + R^2.
struct AlmostAbelianData {
  double a = 0.0;
  Vec b = Vec::Zero(2);
  Vec v = Vec::Zero(2);
  Mat A = Mat::Zero(2, 2);
};

/// The complex structure restricted to the (e2, e3) plane.
inline Mat aa_J1() {
  Mat J1(2, 2);
  J1 << 0.0, -1.0, 1.0, 0.0;
  return J1;
}

inline Mat aa_matrix(const AlmostAbelianData& d) {
  Mat M = Mat::Zero(3, 3);
  M(0, 0) = d.a;
  M.block(0, 1, 1, 2) = d.b.transpose();
  M.block(1, 0, 2, 1) = d.v;
  M.block(1, 1, 2, 2) = d.A;
  return M;
}

/// Realize an almost-abelian algebra of dimension m+1 from the ad-action
/// matrix M (m x m) on the abelian ideal, with the standard compatible pair:
/// g = I (or the supplied metric) and J pairing e_i with e_{dim-1-i}.
inline AlmostHermitianStructure realize_almost_abelian(const Mat& M,
                                                       std::optional<Mat> metric = std::nullopt) {
  const int m = static_cast<int>(M.rows());
  if (M.cols() != m) throw std::invalid_argument("ad-action matrix must be square");
  const int dim = m + 1;
  if (dim % 2 != 0) throw std::invalid_argument("almost-abelian realization needs even dimension");
  LieAlgebraStructure L = LieAlgebraStructure::zero(dim);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      L.c(dim - 1, i, k) = M(k, i);
      L.c(i, dim - 1, k) = -M(k, i);
    }
  Mat g = metric ? *metric : Mat(Mat::Identity(dim, dim));
  Mat J = Mat::Zero(dim, dim);
  for (int i = 0; i < dim / 2; ++i) {
    J(dim - 1 - i, i) = 1.0;
    J(i, dim - 1 - i) = -1.0;
  }
  return build_structure(L, g, J);
}

inline AlmostHermitianStructure realize_almost_abelian(const AlmostAbelianData& d,
                                                       std::optional<Mat> metric = std::nullopt) {
  return realize_almost_abelian(aa_matrix(d), std::move(metric));
}

namespace detail {

inline Mat aa_two_form(std::initializer_list<std::pair<std::pair<int, int>, double>> entries) {
  Mat out = Mat::Zero(4, 4);
  for (const auto& e : entries) {
    const int i = e.first.first - 1, j = e.first.second - 1;  // e^{ij}, 1-based labels
    out(i, j) += e.second;
    out(j, i) -= e.second;
  }
  return out;
}

}  // namespace detail

/// Lee form of the standard structure, in closed form.
inline Vec lee_form_closed(const AlmostAbelianData& d) {
  Vec theta(4);
  theta << 0.0, -d.v(1), d.v(0), -d.A.trace();
  return theta;
}

/// The t-parameter Ricci form of the canonical connection family, in closed form.
inline Mat gauduchon_ricci_closed(const AlmostAbelianData& d, double t) {
  const double trA = d.A.trace();
  const double C = 2.0 * d.a * d.a + t * d.a * trA + (1.0 - t) * d.v.squaredNorm() + d.b.dot(d.v);
  const Vec w = (2.0 * d.a + t * trA) * d.b + d.A.transpose() * d.b +
                (1.0 - t) * d.A.transpose() * d.v;
  return detail::aa_two_form({{{1, 4}, -0.5 * C}, {{2, 4}, -0.5 * w(0)}, {{3, 4}, -0.5 * w(1)}});
}

/// J-anti-invariant quadratic Nijenhuis term, in closed form.
inline Mat nijenhuis_factor_closed(const AlmostAbelianData& d) {
  const double dA = d.A(0, 0) - d.A(1, 1);
  const double sA = d.A(0, 1) + d.A(1, 0);
  const double b1 = d.b(0), b2 = d.b(1);
  return 0.25 * detail::aa_two_form({{{1, 4}, d.b.squaredNorm()},
                                     {{2, 3}, sA * sA + dA * dA},
                                     {{1, 2}, b2 * dA - b1 * sA},
                                     {{1, 3}, b2 * sA + b1 * dA},
                                     {{2, 4}, b1 * dA + b2 * sA},
                                     {{3, 4}, b1 * sA - b2 * dA}});
}

/// Residuals whose simultaneous vanishing is Bismut-Ricci-flatness of the
/// standard structure. Entries scale like the defining parameters squared.
inline Vec bismut_einstein_system(const AlmostAbelianData& d) {
  const double trA = d.A.trace();
  const double C1 = 2.0 * d.a * d.a - d.a * trA + 2.0 * d.v.squaredNorm() + d.b.dot(d.v);
  const Vec w = (2.0 * d.a - trA) * d.b + d.A.transpose() * d.b + 2.0 * d.A.transpose() * d.v;
  Vec out(3);
  out << C1, w(0), w(1);
  return out;
}

/// Residuals for the second-Chern-Einstein condition, valid on unimodular
/// data (a + tr A = 0); non-unimodular input is rejected.
inline Vec second_chern_system(const AlmostAbelianData& d) {
  if (std::abs(d.a + d.A.trace()) > 1e-9)
    throw std::invalid_argument("second_chern_system requires unimodular data (a + tr A = 0)");
  const double dA = d.A(0, 0) - d.A(1, 1);
  const double sA = d.A(0, 1) + d.A(1, 0);
  const double Q = sA * sA + dA * dA;
  const Vec w = 3.0 * d.a * d.b + d.A.transpose() * d.b + 2.0 * d.A.transpose() * d.v;
  Vec out(3);
  out << d.b.squaredNorm() - 6.0 * d.a * d.a - 4.0 * d.v.squaredNorm() - 2.0 * d.b.dot(d.v) - Q,
      w(0) - d.b(0) * dA - d.b(1) * sA, w(1) - d.b(0) * sA + d.b(1) * dA;
  return out;
}

/// Residuals whose vanishing makes the Lee form parallel for the
/// Levi-Civita connection.
inline Vec parallel_lee_system(const AlmostAbelianData& d) {
  const double s = d.A(0, 1) + d.A(1, 0);
  const double r = d.A(0, 1) - d.A(1, 0);
  Vec out(6);
  out << d.a, d.b(0) * d.v(1) - d.b(1) * d.v(0), d.v(0) * r, d.v(1) * r,
      d.v(0) * s - 2.0 * d.A(0, 0) * d.v(1), d.v(1) * s - 2.0 * d.A(1, 1) * d.v(0);
  return out;
}

/// Closed-form value of (d J d F)(e1, e2, e3, e4) together with the
/// pluriclosed defect; the latter vanishes exactly on SKT data.
struct DjdfSkt {
  double djdf = 0.0;
  double skt_residual = 0.0;
};

inline DjdfSkt djdf_and_skt(const AlmostAbelianData& d) {
  const Mat J1 = aa_J1();
  const Mat AJ = d.A * J1;
  Vec y(2), z(2);
  y << 1.0, 0.0;
  z << 0.0, 1.0;
  DjdfSkt out;
  out.djdf = d.a * ((AJ * y).dot(z) - (AJ * z).dot(y)) + (AJ * d.A * y).dot(z) -
             (AJ * z).dot(d.A * y) + (AJ * y).dot(d.A * z) - (AJ * d.A * z).dot(y);
  const Mat P = d.a * d.A + d.A * d.A + d.A.transpose() * d.A;
  out.skt_residual = Mat(sym(P)).norm();
  return out;
}

/// Lee form is nonzero iff v or tr A is; integrability iff b = 0 and A
/// commutes with the restricted complex structure.
inline bool integrable_closed(const AlmostAbelianData& d, double tol = 1e-9) {
  const Mat J1 = aa_J1();
  return max_abs(d.b) <= tol && max_abs(Mat(d.A * J1 - J1 * d.A)) <= tol;
}

enum class ClassLabel {
  abelian,
  A31_plus_A1,
  A34_plus_A1,
  A36_plus_A1,
  A41,
  A48,
  A410,
  unrecognized
};

inline std::string to_string(ClassLabel c) {
  switch (c) {
    case ClassLabel::abelian: return "abelian";
    case ClassLabel::A31_plus_A1: return "A31_plus_A1";
    case ClassLabel::A34_plus_A1: return "A34_plus_A1";
    case ClassLabel::A36_plus_A1: return "A36_plus_A1";
    case ClassLabel::A41: return "A41";
    case ClassLabel::A48: return "A48";
    case ClassLabel::A410: return "A410";
    case ClassLabel::unrecognized: return "unrecognized";
  }
  return "unrecognized";
}

/// Classify a 4-dimensional almost-abelian algebra from the spectrum and
/// rank of the normalized ad-action matrix. Scale-invariant by design;
/// matrices outside the recognized families map to `unrecognized`.
inline ClassLabel classify_jordan(const Mat& M, double gap = 1e-6, double rank_tol = 1e-8) {
  if (M.rows() != 3 || M.cols() != 3)
    throw std::invalid_argument("classify_jordan expects the 3 x 3 ad-action matrix");
  const double scale = max_abs(M);
  if (scale < 1e-12) return ClassLabel::abelian;
  const Mat Mn = M / scale;

  Eigen::EigenSolver<Mat> es(Mn);
  std::vector<std::complex<double>> ev(3);
  for (int i = 0; i < 3; ++i) ev[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(),
            [](const auto& x, const auto& y) { return std::abs(x) < std::abs(y); });

  const double top = std::abs(ev[2]);
  if (top <= gap) {
    // nilpotent case: split by rank
    Eigen::JacobiSVD<Mat> svd(Mn);
    const Vec sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * sv(0)) ++rank;
    if (rank == 1) return ClassLabel::A31_plus_A1;
    if (rank == 2) return ClassLabel::A41;
    return ClassLabel::unrecognized;
  }
  if (std::abs(ev[0]) <= gap * top) {
    const auto l1 = ev[1], l2 = ev[2];
    const bool real_pair = std::abs(l1.imag()) <= gap * top && std::abs(l2.imag()) <= gap * top;
    if (real_pair && std::abs(l1.real() + l2.real()) <= gap * top) return ClassLabel::A34_plus_A1;
    const bool imaginary_pair = std::abs(l1.real()) <= gap * top &&
                                std::abs(l2.real()) <= gap * top &&
                                std::abs(l1.imag() + l2.imag()) <= gap * top;
    if (imaginary_pair) return ClassLabel::A36_plus_A1;
  }
  return ClassLabel::unrecognized;
}

inline ClassLabel classify_jordan(const AlmostAbelianData& d, double gap = 1e-6,
                                  double rank_tol = 1e-8) {
  return classify_jordan(aa_matrix(d), gap, rank_tol);
}

/// One solution family of a structure-equation search: a representative
/// witness, its isomorphism class and the geometric flags of the realized
/// structure. Residuals are recomputed from the realization, not assumed.
struct SolutionFamily {
  std::string description;
  AlmostAbelianData witness;
  ClassLabel class_label = ClassLabel::unrecognized;
  bool almost_kaehler = false;
  bool lee_nonzero = false;
  bool integrable = false;
  double einstein_residual = 0.0;
  double lambda = 0.0;
};

namespace detail {

enum class EinsteinKind { bismut, second_chern };

inline SolutionFamily make_family(std::string description, const AlmostAbelianData& d,
                                  EinsteinKind kind) {
  SolutionFamily fam;
  fam.description = std::move(description);
  fam.witness = d;
  fam.class_label = classify_jordan(d);
  const AlmostHermitianStructure S = realize_almost_abelian(d);
  const GeometryContext C = make_context(S);
  const ConditionFlags flags = condition_flags(C);
  const EinsteinReport rep = einstein_residuals(C);
  fam.almost_kaehler = flags.almost_kaehler.holds;
  fam.integrable = flags.integrable.holds;
  fam.lee_nonzero = std::sqrt(C.norm_theta_sq) > 1e-9;
  if (kind == EinsteinKind::bismut) {
    fam.einstein_residual = rep.bismut_residual;
    fam.lambda = rep.lambda_bismut;
  } else {
    fam.einstein_residual = rep.second_chern_residual;
    fam.lambda = rep.lambda_second_chern;
  }
  return fam;
}

}  // namespace detail

/// Unimodular Bismut-Ricci-flat families in dimension 4 (the Einstein
/// constant is forced to zero). Witnesses are representatives; each family
/// is closed under rotation of (b, v) and scaling of the matrix.
inline std::vector<SolutionFamily> solve_bismut_unimodular_dim4() {
  std::vector<SolutionFamily> out;
  {
    AlmostAbelianData d;
    d.v << 1.0, 0.0;
    d.b << -2.0, 0.0;
    out.push_back(detail::make_family("a = 0, A = 0, v != 0, b.v = -2|v|^2", d,
                                      detail::EinsteinKind::bismut));
  }
  {
    AlmostAbelianData d;
    d.b << 1.0, 0.0;
    out.push_back(
        detail::make_family("a = 0, A = 0, v = 0, b != 0", d, detail::EinsteinKind::bismut));
  }
  {
    AlmostAbelianData d;
    d.A << 0.0, 1.0, -1.0, 0.0;
    d.v << 1.0, 0.0;
    d.b << -2.0, 0.0;
    out.push_back(detail::make_family("a = 0, A a rotation, v != 0, b.v = -2|v|^2", d,
                                      detail::EinsteinKind::bismut));
  }
  return out;
}

/// Second-Chern-Einstein structures with parallel Lee form in dimension 4:
/// b = kappa v with kappa a root of kappa^2 - 2 kappa - 4 = 0, A = 0, a = 0.
inline std::vector<SolutionFamily> solve_second_chern_parallel_lee_dim4() {
  std::vector<SolutionFamily> out;
  const double roots[2] = {1.0 + std::sqrt(5.0), 1.0 - std::sqrt(5.0)};
  const char* names[2] = {"b = (1 + sqrt 5) v, A = 0, a = 0",
                          "b = (1 - sqrt 5) v, A = 0, a = 0"};
  for (int i = 0; i < 2; ++i) {
    AlmostAbelianData d;
    d.v << 1.0, 0.0;
    d.b << roots[i], 0.0;
    out.push_back(detail::make_family(names[i], d, detail::EinsteinKind::second_chern));
  }
  return out;
}

}  // namespace hermlie
