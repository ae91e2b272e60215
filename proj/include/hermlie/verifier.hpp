#pragma once

#include "hermlie/curvature.hpp"

#include <functional>

namespace hermlie {

/// One named local condition: the measured residual and whether it clears
/// the absolute tolerance.
struct FlagEntry {
  bool holds = false;
  double residual = 0.0;
};

/// Residual-backed condition flags. Each flag is the statement that its
/// residual is at most the tolerance; lee_parallel implies lee_killing
/// implies sym_j_minus_vanishes by construction of the residuals.
struct ConditionFlags {
  FlagEntry lcs;                   // d theta = 0
  FlagEntry gauduchon;             // delta theta = 0
  FlagEntry almost_kaehler;        // d F = 0
  FlagEntry integrable;            // N = 0
  FlagEntry lee_parallel;          // nabla^g theta = 0
  FlagEntry lee_killing;           // sym(nabla^g theta) = 0
  FlagEntry sym_j_minus_vanishes;  // (nabla^g theta)^{sym,J,-} = 0
  FlagEntry n_theta_vanishes;      // N contracted with theta sharp = 0
  FlagEntry j_invariant_rho_chern;
  FlagEntry j_invariant_rwf;
  double tolerance = 1e-9;
};

inline ConditionFlags condition_flags(const GeometryContext& C, double tol = 1e-9) {
  const auto& S = *C.S;
  ConditionFlags f;
  f.tolerance = tol;
  auto entry = [tol](double res) { return FlagEntry{res <= tol, res}; };
  f.lcs = entry(max_abs(C.dtheta));
  f.gauduchon = entry(std::abs(C.delta_theta));
  f.almost_kaehler = entry(C.dF.max_abs());
  f.integrable = entry(std::sqrt(std::max(C.norm_n_sq, 0.0)));
  f.lee_parallel = entry(max_abs(C.cov_theta));
  f.lee_killing = entry(max_abs(Mat(sym(C.cov_theta))));
  f.sym_j_minus_vanishes = entry(max_abs(jminus(S, sym(C.cov_theta))));
  f.n_theta_vanishes = entry(max_abs(C.n_theta));
  f.j_invariant_rho_chern = entry(max_abs(jminus(S, C.rho)));
  f.j_invariant_rwf = entry(max_abs(jminus(S, C.rwf)));
  return f;
}

inline ConditionFlags condition_flags(const AlmostHermitianStructure& S, double tol = 1e-9) {
  return condition_flags(make_context(S), tol);
}

/// Einstein-type residuals. The Einstein-Weyl comparison is stated under
/// Gauduchon plus vanishing (nabla theta)^{sym,J,-}; weyl_hypotheses_hold
/// records whether those gates are met, the residual is reported either way.
struct EinsteinReport {
  double second_chern_residual = 0.0;
  double bismut_residual = 0.0;
  double weyl_residual = 0.0;
  double lambda_second_chern = 0.0;
  double lambda_bismut = 0.0;
  bool weyl_hypotheses_hold = false;
};

inline EinsteinReport einstein_residuals(const GeometryContext& C) {
  const auto& S = *C.S;
  EinsteinReport rep;
  const double fn = form_norm(S, C.F);
  rep.lambda_second_chern = C.s_H / 4.0;
  rep.second_chern_residual = form_norm(S, Mat(C.r - rep.lambda_second_chern * C.F)) / fn;
  const Mat bplus = jplus(S, C.ric_b);
  rep.lambda_bismut = form_ip(S, bplus, C.F) / form_ip(S, C.F, C.F);
  rep.bismut_residual = bil_norm(S, Mat(bplus - rep.lambda_bismut * C.F)) / fn;
  rep.weyl_residual = bil_norm(
      S, Mat(jminus(S, C.ric_g) + 0.5 * jminus(S, Mat(C.theta * C.theta.transpose()))));
  const ConditionFlags f = condition_flags(C);
  rep.weyl_hypotheses_hold = f.gauduchon.holds && f.sym_j_minus_vanishes.holds;
  return rep;
}

inline EinsteinReport einstein_residuals(const AlmostHermitianStructure& S) {
  return einstein_residuals(make_context(S));
}

/// One identity evaluation: relative residual, whether the row was skipped
/// because a gating hypothesis fails, and the hypothesis names (empty for
/// unconditional identities).
struct IdentityResult {
  std::string id;
  double residual = 0.0;
  bool skipped = false;
  std::vector<std::string> hypotheses;
};

namespace detail {

inline double rel_scalar(double resid, double a, double b) {
  return std::abs(resid) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_bil(const AlmostHermitianStructure& S, const Mat& lhs, const Mat& rhs) {
  return bil_norm(S, Mat(lhs - rhs)) / std::max({1.0, bil_norm(S, lhs), bil_norm(S, rhs)});
}

inline double rel_max(const Mat& lhs, const Mat& rhs) {
  return max_abs(Mat(lhs - rhs)) / std::max({1.0, max_abs(lhs), max_abs(rhs)});
}

}  // namespace detail

inline std::vector<std::string> identity_catalog() {
  return {"I-A",
          "I-B",
          "I-C",
          "I-D",
          "I-D-alt",
          "weyl_anti",
          "chern_weyl_bridge",
          "I-E",
          "I-F",
          "I-G",
          "I-H",
          "I-H-ref",
          "I-I",
          "I-J",
          "I-K",
          "I-L",
          "I-M",
          "I-N",
          "I-O",
          "conformal_sca",
          "diff_ricci",
          "diff_sca",
          "int_weyl",
          "cycle_n",
          "ricci_chern_bismut",
          "ricci_t1_first_chern",
          "lee_two_routes",
          "r_j_invariant",
          "rho_chern_closed",
          "ric_bismut_closed",
          "rho_star_exchange",
          "ric_weyl_symmetric",
          "ric_weyl_tilde_offset",
          "s_weyl_two_routes",
          "djtheta_f_pairing",
          "dtheta_f_pairing",
          "dgj_closed_form",
          "lee_killing_equiv",
          "lie_g_covariant",
          "sym_j_minus_equiv"};
}

/// Evaluate the identity suite on a prepared context. An empty selection
/// runs every identity; unknown ids in the selection are rejected.
inline std::vector<IdentityResult> run_identity_suite(const GeometryContext& C,
                                                      const std::vector<std::string>& selection = {}) {
  const auto& S = *C.S;
  const auto& L = S.algebra;
  const int n = L.dim;
  const auto& N = S.nijenhuis_tensor.n;

  auto jp = [&](const Mat& m) { return jplus(S, m); };
  auto jm = [&](const Mat& m) { return jminus(S, m); };

  const Mat symD = sym(C.cov_theta);
  const Mat theta_outer = C.theta * C.theta.transpose();
  const ConditionFlags flags = condition_flags(C);
  const EinsteinReport einstein = einstein_residuals(C);

  std::vector<IdentityResult> rows;
  auto want = [&](const std::string& id) {
    return selection.empty() || std::find(selection.begin(), selection.end(), id) != selection.end();
  };
  auto push = [&](std::string id, double resid, bool skipped = false,
                  std::vector<std::string> hyp = {}) {
    rows.push_back(IdentityResult{std::move(id), resid, skipped, std::move(hyp)});
  };

  // curvature endomorphism block, shared by I-D, I-D-alt and weyl_anti
  struct DBlock {
    double cor = 0.0, alt = 0.0, anti = 0.0;
  };
  auto d_block = [&]() {
    DBlock out;
    double worst_cor = 0.0, worst_alt = 0.0, worst_anti = 0.0, scale = 1.0;
    std::vector<Mat> Tend(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) Tend[static_cast<std::size_t>(k)] = middle_slice(C.dj_w, k);
    for (int i = 0; i < n; ++i) {
      const Mat Gi = middle_slice(C.weyl.gamma, i);
      for (int j = 0; j < n; ++j) {
        const Mat Gj = middle_slice(C.weyl.gamma, j);
        const Mat MW = pair_slice(C.R_w, i, j);
        const Mat Mch = pair_slice(C.R_ch, i, j);
        Mat E = Gi * Tend[static_cast<std::size_t>(j)] - Tend[static_cast<std::size_t>(j)] * Gi -
                (Gj * Tend[static_cast<std::size_t>(i)] - Tend[static_cast<std::size_t>(i)] * Gj);
        for (int m = 0; m < n; ++m) {
          const double cm = L.c(i, j, m);
          if (cm != 0.0) E -= cm * Tend[static_cast<std::size_t>(m)];
        }
        const Mat base = -0.5 * C.djtheta(i, j) * S.J - 0.5 * C.dtheta(i, j) * Mat::Identity(n, n) +
                         0.25 * (Tend[static_cast<std::size_t>(i)] * Tend[static_cast<std::size_t>(j)] -
                                 Tend[static_cast<std::size_t>(j)] * Tend[static_cast<std::size_t>(i)]);
        const Mat Mplus = 0.5 * (MW - S.J * MW * S.J);
        const Mat Manti = 0.5 * (MW + S.J * MW * S.J);
        worst_cor = std::max(worst_cor, max_abs(Mat(Mch - (Mplus + base))));
        worst_alt = std::max(worst_alt, max_abs(Mat(Mch - (MW - 0.5 * E * S.J + base))));
        worst_anti = std::max(worst_anti, max_abs(Mat(Manti - 0.5 * E * S.J)));
        scale = std::max({scale, max_abs(Mch), max_abs(MW)});
      }
    }
    out.cor = worst_cor / scale;
    out.alt = worst_alt / scale;
    out.anti = worst_anti / scale;
    return out;
  };
  DBlock dblk;
  bool dblk_done = false;
  auto ensure_dblk = [&]() {
    if (!dblk_done) {
      dblk = d_block();
      dblk_done = true;
    }
  };

  if (want("I-A")) {
    const Mat rhs = jp(C.rwf) + 0.5 * (C.delta_theta + C.norm_theta_sq) * C.F -
                    0.25 * C.norm_n_sq * C.F;
    push("I-A", detail::rel_bil(S, C.r, rhs));
  }
  if (want("I-B")) {
    const Mat lhs = jp(C.rwf) * S.J;
    const Mat rhs = sym(C.rho_st) + jp(symD) - 0.25 * C.norm_theta_sq * S.g + 0.5 * jp(theta_outer);
    push("I-B", detail::rel_bil(S, lhs, rhs));
  }
  if (want("I-C")) {
    const Mat lhs = C.r * S.J;
    const Mat rhs = jp(C.ric_g) + 0.25 * C.norm_n_sq * S.g + jp(symD) + 0.5 * jp(theta_outer);
    push("I-C", detail::rel_bil(S, lhs, rhs));
  }
  if (want("I-D")) {
    ensure_dblk();
    push("I-D", dblk.cor);
  }
  if (want("I-D-alt")) {
    ensure_dblk();
    push("I-D-alt", dblk.alt);
  }
  if (want("weyl_anti")) {
    ensure_dblk();
    push("weyl_anti", dblk.anti);
  }
  if (want("chern_weyl_bridge")) {
    double worst = 0.0, scale = 1.0;
    for (int i = 0; i < n; ++i) {
      const Mat Gch = middle_slice(C.chern.gamma, i);
      const Mat Gw = middle_slice(C.weyl.gamma, i);
      const Mat Ti = middle_slice(C.dj_w, i);
      const double thJi = C.theta.dot(S.J.col(i));
      const Mat pred = 0.5 * C.theta(i) * Mat::Identity(n, n) - 0.5 * thJi * S.J + 0.5 * Ti * S.J;
      worst = std::max(worst, max_abs(Mat(Gch - Gw - pred)));
      scale = std::max(scale, max_abs(Gch));
    }
    push("chern_weyl_bridge", worst / scale);
  }

  const Mat diff_ricci_lhs = sym(C.rho_st) - jp(C.ric_g);
  const Mat diff_ricci_rhs = ((C.s_star - C.s_g) / 4.0) * S.g;
  if (want("I-E")) push("I-E", detail::rel_bil(S, diff_ricci_lhs, diff_ricci_rhs));
  if (want("I-F")) {
    const Mat rhs = C.rwf - C.djtheta - S.J.transpose() * jm(C.dtheta) - C.nij_factor;
    push("I-F", detail::rel_bil(S, C.rho, rhs));
  }
  if (want("I-G")) {
    const Mat rhs = jp(C.ric_b) +
                    0.25 * (2.0 * C.delta_theta + 2.0 * C.norm_theta_sq - C.norm_n_sq) * C.F +
                    C.nij_factor;
    push("I-G", detail::rel_bil(S, C.r, rhs));
  }

  Mat trDN;
  bool trDN_done = false;
  auto ensure_trDN = [&]() {
    if (trDN_done) return;
    InvariantTensor TN;
    TN.variance = {Slot::contravariant, Slot::covariant, Slot::covariant};
    TN.components = N;
    const NdArray DN = covariant_derivative(C.lc, TN).components;
    trDN = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int u = 0; u < n; ++u) s += DN(u, u, i, j);
        trDN(i, j) = s;
      }
    trDN_done = true;
  };
  if (want("I-H")) {
    ensure_trDN();
    const Mat M = S.J.transpose() * trDN;
    const Mat T8 = jm(0.5 * (M - M.transpose()));
    const Mat gamma0 = jm(S.J.transpose() * jm(C.dtheta));
    const Mat rhs = -T8 + 0.75 * (jm(C.djtheta) + gamma0);
    push("I-H", detail::rel_bil(S, jm(C.rwf), rhs));
  }
  if (want("I-H-ref")) {
    // divergence-form variant kept for reference; reported but never gating
    ensure_trDN();
    const Mat rhs = -trDN + 1.5 * C.n_theta;
    push("I-H-ref", detail::rel_bil(S, jm(C.rwf), rhs), true, {"informational"});
  }

  if (want("I-I")) {
    const Mat LJ = lie_derivative_endo(L, C.theta_sharp, S.J);
    const Mat rhs = -C.norm_theta_sq * C.F +
                    (C.theta * C.jtheta.transpose() - C.jtheta * C.theta.transpose()) +
                    2.0 * (S.J.transpose() * symD) + LJ.transpose() * S.g;
    push("I-I", detail::rel_bil(S, C.djtheta, rhs));
  }
  if (want("I-J")) {
    const Vec jtheta_sharp = S.ginv * C.jtheta;
    const Mat LJt = lie_derivative_endo(L, jtheta_sharp, S.J);
    const Mat rhs = -2.0 * (S.J.transpose() * sym(C.cov_jtheta)) - LJt.transpose() * S.g;
    push("I-J", detail::rel_bil(S, C.dtheta, rhs));
  }
  if (want("I-K")) {
    const Vec jtheta_sharp = S.ginv * C.jtheta;
    const Mat lhs = lie_derivative_endo(L, jtheta_sharp, S.J) -
                    S.J * lie_derivative_endo(L, C.theta_sharp, S.J);
    Mat nend = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += N(k, i, j) * C.theta_sharp(i);
        nend(k, j) = s;
      }
    push("I-K", detail::rel_max(lhs, 4.0 * nend));
  }

  const double sW_resid = detail::rel_scalar(C.s_W_tr - C.s_W_conf, C.s_W_tr, C.s_W_conf);
  if (want("I-L")) push("I-L", sW_resid);

  if (want("I-M")) {
    const bool gated = flags.lee_killing.holds && flags.gauduchon.holds;
    const Mat dth_jm = jm(C.dtheta);
    double worst = 0.0;
    for (int m = 0; m < n; ++m) {
      Vec em = Vec::Zero(n);
      em(m) = 1.0;
      const double lhs = C.theta_sharp.dot(C.rho_st.col(m));
      const double rhs = -0.5 * C.theta_sharp.dot(dth_jm.col(m)) +
                         form_ip(S, C.dtheta, n_lower(S, em));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    push("I-M", worst / std::max(1.0, bil_norm(S, C.rho_st)), !gated,
         {"lee_killing", "gauduchon"});
  }
  if (want("I-N")) {
    const bool gated = einstein.second_chern_residual <= 1e-9 && flags.gauduchon.holds &&
                       flags.sym_j_minus_vanishes.holds;
    const Mat rhs = (C.s_H / 4.0) * S.g - 0.25 * C.norm_n_sq * S.g - 0.5 * jp(theta_outer);
    push("I-N", detail::rel_bil(S, jp(C.ric_g), rhs), !gated,
         {"second_chern_einstein", "gauduchon", "sym_j_minus_vanishes"});
  }
  if (want("I-O")) {
    const bool gated = flags.lcs.holds && einstein.second_chern_residual <= 1e-9 &&
                       flags.gauduchon.holds && flags.sym_j_minus_vanishes.holds &&
                       C.norm_theta_sq > 1e-9;
    const double resid =
        std::max({std::abs(C.s_H - (2.0 * C.norm_theta_sq - C.norm_n_sq)),
                  std::abs(C.s_W_conf + 2.0 * C.norm_n_sq),
                  std::abs(C.s_star - 0.5 * C.norm_theta_sq), flags.lee_parallel.residual}) /
        std::max(1.0, std::abs(C.s_H));
    push("I-O", resid, !gated,
         {"lcs", "second_chern_einstein", "gauduchon", "sym_j_minus_vanishes", "lee_nonzero"});
  }

  if (want("conformal_sca")) push("conformal_sca", sW_resid);
  if (want("diff_ricci")) push("diff_ricci", detail::rel_bil(S, diff_ricci_lhs, diff_ricci_rhs));
  if (want("diff_sca")) {
    const double rhs = -2.0 * C.delta_theta - C.norm_theta_sq + 2.0 * C.norm_n_sq;
    push("diff_sca", detail::rel_scalar((C.s_star - C.s_g) - rhs, C.s_star, C.s_g));
  }
  if (want("int_weyl")) {
    double worst = 0.0, scale = 1.0;
    const Mat gJ = S.g * S.J;
    for (int Z = 0; Z < n; ++Z)
      for (int X = 0; X < n; ++X)
        for (int Y = 0; Y < n; ++Y) {
          const double lhs = fiber_first(C.dj_w, Z, X).dot(gJ.col(Y));
          const double rhs = -2.0 * fiber_first(N, X, Y).dot(S.g.col(Z));
          worst = std::max(worst, std::abs(lhs - rhs));
          scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        }
    push("int_weyl", worst / scale);
  }
  if (want("cycle_n")) {
    double worst = 0.0, scale = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double t1 = fiber_first(N, i, j).dot(S.g.col(k));
          const double t2 = fiber_first(N, j, k).dot(S.g.col(i));
          const double t3 = fiber_first(N, k, i).dot(S.g.col(j));
          worst = std::max(worst, std::abs(t1 + t2 + t3));
          scale = std::max({scale, std::abs(t1), std::abs(t2), std::abs(t3)});
        }
    push("cycle_n", worst / scale);
  }
  if (want("ricci_chern_bismut"))
    push("ricci_chern_bismut", detail::rel_bil(S, C.ric_b, gauduchon_ricci_trace(S, -1.0)));
  if (want("ricci_t1_first_chern"))
    push("ricci_t1_first_chern", detail::rel_bil(S, C.rho, gauduchon_ricci_trace(S, 1.0)));
  if (want("lee_two_routes")) {
    const Vec route2 = j_one_form(S, Vec(codifferential(S, C.F)));
    const double worst = max_abs(Vec(C.theta - route2));
    push("lee_two_routes", worst / std::max({1.0, max_abs(C.theta), max_abs(route2)}));
  }
  if (want("r_j_invariant"))
    push("r_j_invariant", bil_norm(S, jm(C.r)) / std::max(1.0, bil_norm(S, C.r)));
  if (want("rho_chern_closed"))
    push("rho_chern_closed",
         exterior_derivative(L, to_nd(C.rho)).max_abs() / std::max(1.0, max_abs(C.rho)));
  if (want("ric_bismut_closed"))
    push("ric_bismut_closed",
         exterior_derivative(L, to_nd(C.ric_b)).max_abs() / std::max(1.0, max_abs(C.ric_b)));
  if (want("rho_star_exchange"))
    push("rho_star_exchange",
         detail::rel_max(C.rho_st, S.J.transpose() * C.rho_st.transpose() * S.J));
  if (want("ric_weyl_symmetric"))
    push("ric_weyl_symmetric", detail::rel_max(C.ric_w, C.ric_w.transpose()));
  if (want("ric_weyl_tilde_offset"))
    push("ric_weyl_tilde_offset", detail::rel_bil(S, Mat(C.ric_wt - C.ric_w), C.dtheta));
  if (want("s_weyl_two_routes")) push("s_weyl_two_routes", sW_resid);
  if (want("djtheta_f_pairing")) {
    const double ip = form_ip(S, C.djtheta, C.F);
    push("djtheta_f_pairing",
         detail::rel_scalar(ip + C.delta_theta + C.norm_theta_sq, ip, C.norm_theta_sq));
  }
  if (want("dtheta_f_pairing")) {
    const double ip = form_ip(S, C.dtheta, C.F);
    push("dtheta_f_pairing", detail::rel_scalar(ip, form_norm(S, C.dtheta), 0.0));
  }
  if (want("dgj_closed_form")) {
    double worst = 0.0, scale = 1.0;
    const Vec jtheta_sharp = S.ginv * C.jtheta;
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) {
        const Vec lhs = fiber_first(C.dj_lc, X, Y);
        const double thJY = C.theta.dot(S.J.col(Y));
        Vec w_cov(n);
        for (int m = 0; m < n; ++m) w_cov(m) = fiber_first(N, Y, m).dot(S.g * S.J.col(X));
        Vec eX = Vec::Zero(n);
        eX(X) = 1.0;
        const Vec rhs = 0.5 * S.g(X, Y) * jtheta_sharp + 0.5 * thJY * eX +
                        0.5 * S.J.col(X).dot(S.g.col(Y)) * C.theta_sharp -
                        0.5 * C.theta(Y) * S.J.col(X) + 2.0 * (S.ginv * w_cov);
        worst = std::max(worst, max_abs(Vec(lhs - rhs)));
        scale = std::max({scale, max_abs(lhs), max_abs(rhs)});
      }
    push("dgj_closed_form", worst / scale);
  }

  const Mat lie_g = lie_derivative_bilinear(L, C.theta_sharp, S.g);
  if (want("lee_killing_equiv")) {
    const double killing_res = max_abs(lie_g);
    const double sym_res = max_abs(symD);
    const bool agree = (killing_res <= 1e-9) == (sym_res <= 1e-9);
    push("lee_killing_equiv", agree ? 0.0 : std::max(killing_res, sym_res));
  }
  if (want("lie_g_covariant")) push("lie_g_covariant", detail::rel_bil(S, lie_g, 2.0 * symD));
  if (want("sym_j_minus_equiv")) {
    const Mat LJ = lie_derivative_endo(L, C.theta_sharp, S.J);
    const Mat LJ_sym = 0.5 * (LJ + S.ginv * LJ.transpose() * S.g);
    const double res_a = max_abs(jminus(S, symD));
    const double res_b = max_abs(LJ_sym);
    const bool agree = (res_a <= 1e-9) == (res_b <= 1e-9);
    push("sym_j_minus_equiv", agree ? 0.0 : std::max(res_a, res_b));
  }

  if (!selection.empty()) {
    const auto catalog = identity_catalog();
    for (const auto& id : selection)
      if (std::find(catalog.begin(), catalog.end(), id) == catalog.end())
        throw std::invalid_argument("unknown identity id: " + id);
  }
  return rows;
}

inline std::vector<IdentityResult> run_identity_suite(const AlmostHermitianStructure& S,
                                                      const std::vector<std::string>& selection = {}) {
  return run_identity_suite(make_context(S), selection);
}

}  // namespace hermlie
