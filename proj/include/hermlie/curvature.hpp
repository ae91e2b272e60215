#pragma once

#include "hermlie/connection.hpp"

namespace hermlie {

namespace detail {

/// First Chern Ricci form of a curvature table.
inline Mat ricci_form_first(const AlmostHermitianStructure& S, const NdArray& R) {
  const int n = S.algebra.dim;
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Mat M = pair_slice(R, i, j);
      out(i, j) = 0.5 * (S.J.transpose() * S.g * M * S.ginv).trace();
    }
  return out;
}

/// Second trace of the curvature against J: the 2-form
/// out(k,m) = (1/2) sum_l M(l,k) g(l,m), M(l,k) = sum_{u,v} R(l,u,v,k) W(v,u),
/// W = J ginv.
inline Mat ricci_form_second(const AlmostHermitianStructure& S, const NdArray& R) {
  const int n = S.algebra.dim;
  const Mat W = S.J * S.ginv;
  Mat M = Mat::Zero(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) s += R(l, u, v, k) * W(v, u);
      M(l, k) = s;
    }
  Mat out = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) out(k, m) = 0.5 * M.col(k).dot(S.g.col(m));
  return out;
}

/// Ricci contraction out(j,l) = sum_{u,k,p} R(p,u,j,k) ginv(u,k) g(p,l).
inline Mat ricci_trace(const AlmostHermitianStructure& S, const NdArray& R) {
  const int n = S.algebra.dim;
  Mat out = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int u = 0; u < n; ++u)
        for (int k = 0; k < n; ++k) {
          if (S.ginv(u, k) == 0.0) continue;
          for (int p = 0; p < n; ++p) s += R(p, u, j, k) * S.ginv(u, k) * S.g(p, l);
        }
      out(j, l) = s;
    }
  return out;
}

/// Alternate Ricci contraction out(i,j) = sum_{a,k,p} R(p,i,a,j) ginv(a,k) g(p,k).
inline Mat ricci_trace_tilde(const AlmostHermitianStructure& S, const NdArray& R) {
  const int n = S.algebra.dim;
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k) {
          if (S.ginv(a, k) == 0.0) continue;
          for (int p = 0; p < n; ++p) s += R(p, i, a, j) * S.ginv(a, k) * S.g(p, k);
        }
      out(i, j) = s;
    }
  return out;
}

/// Star Ricci form out(k,m) = (1/2) sum_{l,p} M(l,k) g(l,p) J(p,m) with M as
/// in ricci_form_second, taken on the Riemannian curvature.
inline Mat rho_star_form(const AlmostHermitianStructure& S, const NdArray& R) {
  const int n = S.algebra.dim;
  const Mat W = S.J * S.ginv;
  Mat M = Mat::Zero(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) s += R(l, u, v, k) * W(v, u);
      M(l, k) = s;
    }
  Mat out = Mat::Zero(n, n);
  const Mat gJ = S.g * S.J;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) out(k, m) = 0.5 * M.col(k).dot(gJ.col(m));
  return out;
}

}  // namespace detail

/// Quadratic Nijenhuis 2-form: with T(p,q) the full ginv-contraction of
/// N (x) N, the antisymmetric part of g T (J^T g).
inline Mat nijenhuis_factor(const AlmostHermitianStructure& S) {
  const int n = S.algebra.dim;
  const auto& N = S.nijenhuis_tensor.n;
  Mat T = Mat::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int cc = 0; cc < n; ++cc)
            for (int dd = 0; dd < n; ++dd)
              s += N(p, a, b) * N(q, cc, dd) * S.ginv(a, cc) * S.ginv(b, dd);
      T(p, q) = s;
    }
  const Mat M1 = S.g * T * (S.J.transpose() * S.g);
  return antisym(M1);
}

/// Gauduchon line of canonical connections, Ricci form by the Lie group
/// trace formula: out(i,j) with W = [e_i, e_j] is
/// -(1/2) ( tr(ad_W J) - t tr(ad_{JW}) + (t-1) <F, d(W^flat)> ).
inline Mat gauduchon_ricci_trace(const AlmostHermitianStructure& S, double t) {
  const int n = S.algebra.dim;
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec W = fiber_last(S.algebra.c, i, j);
      const Mat adW = ad_matrix(S.algebra, W);
      const Mat adJW = ad_matrix(S.algebra, Vec(S.J * W));
      const Mat dWflat = d_one_form(S.algebra, Vec(S.g * W));
      out(i, j) = -0.5 * ((adW * S.J).trace() - t * adJW.trace() +
                          (t - 1.0) * form_ip(S, S.F, dWflat));
    }
  return out;
}

/// Diagnostic hooks for the verifier's mutation fixtures; the defaults
/// reproduce the geometry of the structure itself.
struct ContextOptions {
  const Vec* theta_override = nullptr;
  double d_scale = 1.0;
  const Mat* f_override = nullptr;
};

/// Shared intermediate data for curvature reports, condition flags and the
/// identity suite, computed once per structure. Borrows the structure: the
/// AlmostHermitianStructure passed to make_context must outlive the context.
struct GeometryContext {
  const AlmostHermitianStructure* S = nullptr;
  Vec theta;
  Mat F;
  double d_scale = 1.0;

  ConnectionCoefficients lc, weyl, chern;
  NdArray R_g, R_w, R_ch;

  Mat rho;      // first Chern Ricci form
  Mat r;        // second Chern Ricci form
  Mat rwf;      // Weyl curvature form
  Mat ric_w;    // Weyl Ricci
  Mat ric_wt;   // alternate Weyl Ricci trace
  Mat ric_g;    // Riemannian Ricci
  Mat rho_st;   // star Ricci form
  Mat ric_b;    // Bismut Ricci form rho + d(J theta)

  Mat dtheta, djtheta;
  Vec jtheta, theta_sharp;
  Mat cov_theta, cov_jtheta;
  double delta_theta = 0.0;
  double norm_theta_sq = 0.0;
  double norm_n_sq = 0.0;
  Mat n_theta;
  NdArray dj_lc, dj_w;
  NdArray dF;
  Mat nij_factor;

  double s_H = 0.0, s_g = 0.0, s_star = 0.0, s_W_conf = 0.0, s_W_tr = 0.0;
};

inline GeometryContext make_context(const AlmostHermitianStructure& S,
                                    const ContextOptions& opt = {}) {
  GeometryContext C;
  C.S = &S;
  C.theta = opt.theta_override ? *opt.theta_override : S.lee.theta;
  C.F = opt.f_override ? *opt.f_override : S.F;
  C.d_scale = opt.d_scale;

  C.lc = levi_civita(S);
  C.weyl = weyl_connection(S, C.theta);
  C.chern = chern_connection(S, C.theta, /*validate=*/false);
  C.R_g = curvature(C.lc).R;
  C.R_w = curvature(C.weyl).R;
  C.R_ch = curvature(C.chern).R;

  C.rho = detail::ricci_form_first(S, C.R_ch);
  C.r = detail::ricci_form_second(S, C.R_ch);
  C.rwf = detail::ricci_form_second(S, C.R_w);
  C.ric_w = detail::ricci_trace(S, C.R_w);
  C.ric_wt = detail::ricci_trace_tilde(S, C.R_w);
  C.ric_g = detail::ricci_trace(S, C.R_g);
  C.rho_st = detail::rho_star_form(S, C.R_g);

  C.dtheta = C.d_scale * d_one_form(S.algebra, C.theta);
  C.jtheta = j_one_form(S, C.theta);
  C.djtheta = C.d_scale * d_one_form(S.algebra, C.jtheta);
  C.ric_b = C.rho + C.djtheta;

  C.theta_sharp = S.ginv * C.theta;
  C.cov_theta = covariant_derivative_one_form(C.lc, C.theta);
  C.cov_jtheta = covariant_derivative_one_form(C.lc, C.jtheta);
  double dlt = 0.0;
  for (int u = 0; u < S.algebra.dim; ++u)
    for (int m = 0; m < S.algebra.dim; ++m) dlt -= S.ginv(u, m) * C.cov_theta(u, m);
  C.delta_theta = dlt;
  C.norm_theta_sq = C.theta.dot(S.ginv * C.theta);
  C.norm_n_sq = S.nijenhuis_tensor.norm_sq;
  C.n_theta = n_lower(S, C.theta_sharp);
  C.dj_lc = nabla_J(C.lc);
  C.dj_w = nabla_J(C.weyl);
  C.dF = exterior_derivative(S.algebra, to_nd(C.F));
  C.dF *= C.d_scale;
  C.nij_factor = nijenhuis_factor(S);

  C.s_H = (C.r * S.J * S.ginv).trace();
  C.s_g = (S.ginv * C.ric_g).trace();
  C.s_star = (S.ginv * C.rho_st).trace();
  C.s_W_tr = (S.ginv * C.ric_w).trace();
  C.s_W_conf = C.s_g - 3.0 * C.delta_theta - 1.5 * C.norm_theta_sq;
  return C;
}

// The context keeps a pointer into S, so a temporary argument would dangle.
GeometryContext make_context(AlmostHermitianStructure&&, const ContextOptions& = {}) = delete;

struct ScalarCurvatures {
  double s_H = 0.0;     // Hermitian scalar curvature, trace of r against F
  double s_g = 0.0;     // Riemannian scalar curvature
  double s_W = 0.0;     // Weyl scalar curvature
  double s_star = 0.0;  // star scalar curvature
};

/// One-stop curvature summary of a structure.
struct CurvatureReport {
  Mat rho_chern;         // first Chern Ricci form (closed)
  Mat r_second_chern;    // second Chern Ricci form (J invariant)
  Mat ric_bismut;        // Bismut Ricci form
  Mat rwf;               // Weyl curvature form
  Mat nijenhuis_factor;  // quadratic Nijenhuis 2-form
  Mat ric_weyl;
  Mat ric_weyl_tilde;
  Mat ric_riemann;
  Mat rho_star;
  ScalarCurvatures scalars;
};

inline CurvatureReport curvature_report(const GeometryContext& C) {
  CurvatureReport rep;
  rep.rho_chern = C.rho;
  rep.r_second_chern = C.r;
  rep.ric_bismut = C.ric_b;
  rep.rwf = C.rwf;
  rep.nijenhuis_factor = C.nij_factor;
  rep.ric_weyl = C.ric_w;
  rep.ric_weyl_tilde = C.ric_wt;
  rep.ric_riemann = C.ric_g;
  rep.rho_star = C.rho_st;
  rep.scalars = ScalarCurvatures{C.s_H, C.s_g, C.s_W_conf, C.s_star};
  return rep;
}

inline CurvatureReport curvature_report(const AlmostHermitianStructure& S) {
  return curvature_report(make_context(S));
}

inline Mat first_chern_ricci(const AlmostHermitianStructure& S) {
  return detail::ricci_form_first(S, curvature(chern_connection(S)).R);
}

inline Mat second_chern_ricci(const AlmostHermitianStructure& S) {
  return detail::ricci_form_second(S, curvature(chern_connection(S)).R);
}

inline Mat bismut_ricci(const AlmostHermitianStructure& S) {
  return first_chern_ricci(S) + d_one_form(S.algebra, j_one_form(S, S.lee.theta));
}

inline Mat weyl_curvature_form(const AlmostHermitianStructure& S) {
  return detail::ricci_form_second(S, curvature(weyl_connection(S)).R);
}

/// (Weyl Ricci, alternate Weyl Ricci trace); their difference is d theta.
inline std::pair<Mat, Mat> weyl_ricci(const AlmostHermitianStructure& S) {
  const NdArray R = curvature(weyl_connection(S)).R;
  return {detail::ricci_trace(S, R), detail::ricci_trace_tilde(S, R)};
}

/// (Riemannian Ricci, star Ricci form).
inline std::pair<Mat, Mat> riemann_ricci_and_star(const AlmostHermitianStructure& S) {
  const NdArray R = curvature(levi_civita(S)).R;
  return {detail::ricci_trace(S, R), detail::rho_star_form(S, R)};
}

inline ScalarCurvatures scalar_curvatures(const AlmostHermitianStructure& S) {
  const GeometryContext C = make_context(S);
  return ScalarCurvatures{C.s_H, C.s_g, C.s_W_conf, C.s_star};
}

}  // namespace hermlie
