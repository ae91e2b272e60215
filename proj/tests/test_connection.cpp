#include <hermlie/connection.hpp>
#include <hermlie/presets.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hermlie;

namespace {

// 2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y) on invariant data
double koszul_residual(const AlmostHermitianStructure& S, const ConnectionCoefficients& lc) {
  const auto& L = S.algebra;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double lhs = 0.0;
        for (int l = 0; l < 4; ++l) lhs += 2.0 * lc.gamma(l, i, j) * S.g(l, k);
        const double rhs = fiber_last(L.c, i, j).dot(S.g.col(k)) -
                           fiber_last(L.c, j, k).dot(S.g.col(i)) +
                           fiber_last(L.c, k, i).dot(S.g.col(j));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

Vec random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(4);
  for (int i = 0; i < 4; ++i) v(i) = gauss(rng);
  return v;
}

}  // namespace

TEST_CASE("levi-civita matches the six-term koszul formula") {
  std::mt19937_64 rng(43);
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    INFO(name);
    const AlmostHermitianStructure S = build_preset(p);
    CHECK(koszul_residual(S, levi_civita(S)) <= 1e-12);
    const AlmostHermitianStructure R = random_structure(p.algebra, p.J, rng);
    CHECK(koszul_residual(R, levi_civita(R)) <= 1e-11);
  }
}

TEST_CASE("levi-civita is torsion-free and metric") {
  std::mt19937_64 rng(47);
  const Preset p = preset("a410");
  const AlmostHermitianStructure S = random_structure(p.algebra, p.J, rng);
  const ConnectionCoefficients lc = levi_civita(S);
  CHECK(torsion(lc).max_abs() <= 1e-12);
  CHECK(nabla_g(lc).max_abs() <= 1e-12);
}

TEST_CASE("levi-civita is the unique torsion-free metric connection") {
  const AlmostHermitianStructure S = build_preset("a36_a1");
  ConnectionCoefficients lc = levi_civita(S);
  // any perturbation shows up in the torsion or in nabla g
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        ConnectionCoefficients c2 = lc;
        c2.gamma(l, i, j) += 1e-3;
        const double defect = std::max(torsion(c2).max_abs(), nabla_g(c2).max_abs());
        CHECK(defect > 1e-4);
      }
}

TEST_CASE("weyl connection: no torsion, nabla g = theta tensor g") {
  std::mt19937_64 rng(53);
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    const AlmostHermitianStructure S = random_structure(p.algebra, p.J, rng);
    INFO(name);
    // build succeeds for the structure's own Lee form and for arbitrary theta
    const ConnectionCoefficients w = weyl_connection(S);
    CHECK(torsion(w).max_abs() <= 1e-10);
    const Vec th = random_vec(rng);
    const ConnectionCoefficients w2 = weyl_connection(S, th);
    const NdArray Dg = nabla_g(w2);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          worst = std::max(worst, std::abs(Dg(i, j, k) - th(i) * S.g(j, k)));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("chern connection: metric, J-parallel, (1,1) torsion") {
  std::mt19937_64 rng(59);
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    const AlmostHermitianStructure S = random_structure(p.algebra, p.J, rng);
    INFO(name);
    const ConnectionCoefficients ch = chern_connection(S);  // validating build
    CHECK(nabla_g(ch).max_abs() <= 1e-10);
    CHECK(nabla_J(ch).max_abs() <= 1e-10);
    // torsion has no (1,1) part: T(JX, JY) = -T(X, Y)
    const NdArray T = torsion(ch);
    double worst = 0.0;
    for (int k = 0; k < 4; ++k)
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
          double tjj = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) tjj += S.J(a, x) * S.J(b, y) * T(k, a, b);
          worst = std::max(worst, std::abs(tjj + T(k, x, y)));
        }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("curvature: antisymmetry, flat case, first bianchi") {
  std::mt19937_64 rng(61);
  const AlmostHermitianStructure flat = build_preset("abelian_flat");
  CHECK(curvature(levi_civita(flat)).R.max_abs() == 0.0);

  const Preset p = preset("a48");
  const AlmostHermitianStructure S = random_structure(p.algebra, p.J, rng);
  const CurvatureTensor Rg = curvature(levi_civita(S));
  double w_anti = 0.0, w_bianchi = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      w_anti = std::max(w_anti, max_abs(Mat(pair_slice(Rg.R, i, j) + pair_slice(Rg.R, j, i))));
      for (int k = 0; k < 4; ++k) {
        Vec s = pair_slice(Rg.R, i, j).col(k);
        s += pair_slice(Rg.R, j, k).col(i);
        s += pair_slice(Rg.R, k, i).col(j);
        w_bianchi = std::max(w_bianchi, max_abs(s));
      }
    }
  CHECK(w_anti <= 1e-12);
  CHECK(w_bianchi <= 1e-11);
}

TEST_CASE("covariant derivatives agree across entry points") {
  std::mt19937_64 rng(67);
  const Preset p = preset("a36_a1");
  const AlmostHermitianStructure S = random_structure(p.algebra, p.J, rng);
  const ConnectionCoefficients lc = levi_civita(S);
  const Vec th = random_vec(rng);

  const Mat D1 = covariant_derivative_one_form(lc, th);
  InvariantTensor T;
  T.variance = {Slot::covariant};
  T.components = to_nd(th);
  const NdArray D2 = covariant_derivative(lc, T).components;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(D1(i, j) - D2(i, j)));
  CHECK(worst <= 1e-13);

  // mixed variance: nabla J as a (1,1) tensor matches the endomorphism route
  InvariantTensor TJ;
  TJ.variance = {Slot::contravariant, Slot::covariant};
  TJ.components = to_nd(S.J);
  const NdArray DJ = covariant_derivative(lc, TJ).components;  // (u, l, j)
  const NdArray DJ_endo = nabla_J(lc);                         // (l, u, j)
  for (int u = 0; u < 4; ++u)
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 4; ++j)
        worst = std::max(worst, std::abs(DJ(u, l, j) - DJ_endo(l, u, j)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("codifferential routes: connection trace vs -*d* on unimodular algebras") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& entry : algebra_catalog()) {
    const AlmostHermitianStructure S =
        random_structure(entry.algebra, standard_complex_structure(4), rng);
    INFO(entry.name);
    for (int t = 0; t < 3; ++t) {
      Vec th(4);
      for (int i = 0; i < 4; ++i) th(i) = gauss(rng);
      const NdArray star_route_1 =
          hodge_star(S, exterior_derivative(S.algebra, hodge_star(S, to_nd(th))));
      CHECK(std::abs(codifferential(S, th) + star_route_1()) <= 1e-11);

      Mat b = Mat::Zero(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          b(i, j) = gauss(rng);
          b(j, i) = -b(i, j);
        }
      const NdArray star_route_2 =
          hodge_star(S, exterior_derivative(S.algebra, hodge_star(S, to_nd(b))));
      const Vec delta_b = codifferential(S, b);
      CHECK(max_abs(Vec(delta_b + to_vec(star_route_2))) <= 1e-11);
    }
  }
  const AlmostHermitianStructure Sa = build_preset("a41");
  CHECK_THROWS_AS(codifferential(levi_civita(Sa), NdArray::cube(0, 4)),
                  std::invalid_argument);
}
