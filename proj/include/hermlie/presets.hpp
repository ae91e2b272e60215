#pragma once

#include "hermlie/almost_abelian.hpp"

#include <map>
#include <random>

namespace hermlie {

/// Values a preset pins down exactly, for regression checks. Entries that a
/// preset does not pin stay empty (optional) or zero with a matching flag.
struct PresetExpected {
  Vec theta = Vec::Zero(4);
  Mat rho = Mat::Zero(4, 4);
  Mat r = Mat::Zero(4, 4);
  double s_H = 0.0;
  NdArray dF = NdArray::cube(3, 4);
  std::optional<Mat> dtheta_sym_jminus;
  Vec n_e1_e2 = Vec::Zero(4);
  std::map<std::string, bool> flags;  // pinned condition flags by name
};

struct Preset {
  std::string name;
  LieAlgebraStructure algebra;
  Mat g = Mat::Identity(4, 4);
  Mat J = Mat::Zero(4, 4);
  PresetExpected expected;
  std::map<std::string, std::string> notes;
};

/// J pairing e_i with e_{i + dim/2}.
inline Mat standard_complex_structure(int dim) {
  if (dim % 2 != 0) throw std::invalid_argument("complex structure needs even dimension");
  Mat J = Mat::Zero(dim, dim);
  const int h = dim / 2;
  for (int i = 0; i < h; ++i) {
    J(i + h, i) = 1.0;
    J(i, i + h) = -1.0;
  }
  return J;
}

namespace detail {

inline Mat two_form_entries(std::initializer_list<std::pair<std::pair<int, int>, double>> es) {
  Mat out = Mat::Zero(4, 4);
  for (const auto& e : es) {
    out(e.first.first, e.first.second) += e.second;
    out(e.first.second, e.first.first) -= e.second;
  }
  return out;
}

inline NdArray three_form_entry(int i, int j, int k, double val) {
  NdArray out = NdArray::cube(3, 4);
  const int idx[3] = {i, j, k};
  int perm[3] = {0, 1, 2};
  std::sort(perm, perm + 3);
  do {
    const std::vector<int> p = {idx[perm[0]], idx[perm[1]], idx[perm[2]]};
    out.at(p) = perm_sign({perm[0], perm[1], perm[2]}) * val;
  } while (std::next_permutation(perm, perm + 3));
  return out;
}

inline Mat diag4(double d0, double d1, double d2, double d3) {
  Vec d(4);
  d << d0, d1, d2, d3;
  return Mat(d.asDiagonal());
}

inline Mat preset_J_13_24() {
  Mat J = Mat::Zero(4, 4);
  J(2, 0) = 1.0;
  J(0, 2) = -1.0;
  J(3, 1) = 1.0;
  J(1, 3) = -1.0;
  return J;
}

inline Mat preset_J_14_23() {
  Mat J = Mat::Zero(4, 4);
  J(3, 0) = 1.0;
  J(0, 3) = -1.0;
  J(2, 1) = 1.0;
  J(1, 2) = -1.0;
  return J;
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
  return {"abelian_flat", "a36_a1", "a41", "a48", "a410"};
}

/// Named benchmark structures with pinned invariants.
inline Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "abelian_flat") {
    p.algebra = LieAlgebraStructure::zero(4);
    p.g = Mat::Identity(4, 4);
    p.J = detail::preset_J_13_24();
    p.expected.dtheta_sym_jminus = Mat::Zero(4, 4);
    p.expected.flags = {{"lcs", true}, {"n_theta_vanishes", true}, {"lee_parallel", true},
                        {"almost_kaehler", true}, {"integrable", true}};
    p.notes = {{"metric", "identity"}, {"geometry", "flat Kaehler"}};
    return p;
  }
  if (name == "a36_a1") {
    const double s5 = std::sqrt(5.0);
    p.algebra = LieAlgebraStructure::from_brackets(
        4, {{1, 3, {{2, -1.0}}}, {2, 3, {{1, 1.0}}}});
    p.g = detail::diag4(s5 - 1.0, 1.0, s5 - 1.0, 1.0);
    p.J = detail::preset_J_13_24();
    p.expected.theta << 0.0, 0.0, 0.0, 1.0 / (s5 - 1.0);
    p.expected.r = detail::two_form_entries({{{0, 2}, 0.25}, {{1, 3}, 0.25 / (s5 - 1.0)}});
    p.expected.rho = detail::two_form_entries({{{0, 2}, 0.5}});
    p.expected.s_H = 1.0 / (s5 - 1.0);
    p.expected.dF = detail::three_form_entry(0, 2, 3, 1.0);
    p.expected.dtheta_sym_jminus = Mat::Zero(4, 4);
    p.expected.n_e1_e2 << 0.0, 0.0, 0.25, 0.0;
    p.expected.flags = {{"lcs", true}, {"n_theta_vanishes", true}, {"lee_parallel", true}};
    p.notes = {{"brackets", "[e1,e3] = -e2, [e2,e3] = e1"},
               {"metric", "diag(sqrt(5)-1, 1, sqrt(5)-1, 1)"},
               {"theta", "e4 / (sqrt(5)-1)"},
               {"s_H", "1 / (sqrt(5)-1)"}};
    return p;
  }
  if (name == "a41") {
    p.algebra = LieAlgebraStructure::from_brackets(
        4, {{2, 4, {{1, 1.0}}}, {3, 4, {{2, 1.0}}}});
    p.g = detail::diag4(0.5, 1.0, 0.5, 1.0);
    p.J = detail::preset_J_13_24();
    p.expected.theta << 0.0, 0.0, -0.5, 0.0;
    p.expected.s_H = 0.0;
    p.expected.dF = detail::three_form_entry(1, 2, 3, 0.5);
    {
      Mat m = Mat::Zero(4, 4);
      m(1, 3) = 0.5;
      m(3, 1) = 0.5;
      p.expected.dtheta_sym_jminus = m;
    }
    p.expected.n_e1_e2 << 0.0, 0.25, 0.0, 0.0;
    p.expected.flags = {{"lcs", true}};
    p.notes = {{"brackets", "[e2,e4] = e1, [e3,e4] = e2"},
               {"metric", "diag(1/2, 1, 1/2, 1)"},
               {"theta", "-e3 / 2"}};
    return p;
  }
  if (name == "a48") {
    p.algebra = LieAlgebraStructure::from_brackets(
        4, {{2, 3, {{1, 1.0}}}, {2, 4, {{2, 1.0}}}, {3, 4, {{3, -1.0}}}});
    p.g = Mat::Identity(4, 4);
    p.J = detail::preset_J_14_23();
    p.expected.theta << 0.0, 0.0, 0.0, -1.0;
    p.expected.s_H = 0.0;
    p.expected.dF = detail::three_form_entry(1, 2, 3, -1.0);
    {
      Mat m = Mat::Zero(4, 4);
      m(2, 2) = 1.0;
      m(1, 1) = -1.0;
      p.expected.dtheta_sym_jminus = m;
    }
    p.expected.n_e1_e2 << 0.0, 0.0, 0.5, 0.0;
    p.expected.flags = {{"lcs", true}};
    p.notes = {{"brackets", "[e2,e3] = e1, [e2,e4] = e2, [e3,e4] = -e3"},
               {"metric", "identity"},
               {"theta", "-e4"}};
    return p;
  }
  if (name == "a410") {
    const double kappa = (1.0 + std::sqrt(17.0)) / 8.0;
    p.algebra = LieAlgebraStructure::from_brackets(
        4, {{2, 3, {{1, 1.0}}}, {2, 4, {{3, -1.0}}}, {3, 4, {{2, 1.0}}}});
    p.g = detail::diag4(kappa, 1.0, kappa, 1.0);
    p.J = detail::preset_J_13_24();
    p.expected.theta << -kappa, 0.0, 0.0, 0.0;
    p.expected.r = detail::two_form_entries({{{0, 2}, kappa / 4.0}, {{1, 3}, 0.25}});
    p.expected.rho = detail::two_form_entries({{{1, 3}, 0.5}, {{2, 3}, -0.5}});
    p.expected.s_H = 1.0;
    p.expected.dF = detail::three_form_entry(0, 1, 3, -kappa);
    p.expected.n_e1_e2 << 0.0, 0.25, 0.25, 0.0;
    p.expected.flags = {{"lcs", false}, {"n_theta_vanishes", false}};
    p.notes = {{"brackets", "[e2,e3] = e1, [e2,e4] = -e3, [e3,e4] = e2"},
               {"metric", "diag(k, 1, k, 1) with k = (1+sqrt(17))/8"},
               {"theta", "-k e1"},
               {"s_H", "1"}};
    return p;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

inline std::vector<Preset> preset_catalog() {
  std::vector<Preset> out;
  for (const auto& n : preset_names()) out.push_back(preset(n));
  return out;
}

inline AlmostHermitianStructure build_preset(const Preset& p) {
  return build_structure(p.algebra, p.g, p.J);
}

inline AlmostHermitianStructure build_preset(const std::string& name) {
  return build_preset(preset(name));
}

/// Named 4-dimensional algebras for sweeps and classification demos.
struct CatalogAlgebra {
  std::string name;
  LieAlgebraStructure algebra;
  std::string brackets;
};

inline std::vector<CatalogAlgebra> algebra_catalog() {
  std::vector<CatalogAlgebra> out;
  out.push_back({"abelian", LieAlgebraStructure::zero(4), "abelian"});
  out.push_back({"a31_a1", LieAlgebraStructure::from_brackets(4, {{1, 2, {{3, 1.0}}}}),
                 "[e1,e2] = e3"});
  out.push_back({"a34_a1",
                 LieAlgebraStructure::from_brackets(4, {{1, 3, {{1, 1.0}}}, {2, 3, {{2, -1.0}}}}),
                 "[e1,e3] = e1, [e2,e3] = -e2"});
  out.push_back({"a36_a1",
                 LieAlgebraStructure::from_brackets(4, {{1, 3, {{2, -1.0}}}, {2, 3, {{1, 1.0}}}}),
                 "[e1,e3] = -e2, [e2,e3] = e1"});
  out.push_back({"a41",
                 LieAlgebraStructure::from_brackets(4, {{2, 4, {{1, 1.0}}}, {3, 4, {{2, 1.0}}}}),
                 "[e2,e4] = e1, [e3,e4] = e2"});
  out.push_back(
      {"a48",
       LieAlgebraStructure::from_brackets(
           4, {{2, 3, {{1, 1.0}}}, {2, 4, {{2, 1.0}}}, {3, 4, {{3, -1.0}}}}),
       "[e2,e3] = e1, [e2,e4] = e2, [e3,e4] = -e3"});
  out.push_back(
      {"a410",
       LieAlgebraStructure::from_brackets(
           4, {{2, 3, {{1, 1.0}}}, {2, 4, {{3, -1.0}}}, {3, 4, {{2, 1.0}}}}),
       "[e2,e3] = e1, [e2,e4] = -e3, [e3,e4] = e2"});
  return out;
}

/// Random compatible pair on a fixed algebra: J is conjugated by a
/// perturbation of the identity, g is the J-invariant average of a shifted
/// Wishart draw, so the result is always a valid structure.
inline AlmostHermitianStructure random_structure(const LieAlgebraStructure& L, const Mat& J0,
                                                 std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = L.dim;
  // redraw near-singular transforms: conjugation by T must keep J*J = -I
  // well below the structure validator's tolerance
  Mat T = Mat::Identity(n, n);
  for (;;) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * gauss(rng);
    Eigen::JacobiSVD<Mat> svd(T);
    if (svd.singularValues()(n - 1) > 0.2 * svd.singularValues()(0)) break;
  }
  const Mat J = T * J0 * T.inverse();
  Mat B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
  const Mat h = B * B.transpose() + 4.0 * Mat::Identity(n, n);
  const Mat g = 0.5 * (h + J.transpose() * h * J);
  return build_structure(L, g, J);
}

}  // namespace hermlie
