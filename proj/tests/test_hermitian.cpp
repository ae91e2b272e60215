#include <hermlie/hermitian.hpp>
#include <hermlie/presets.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hermlie;

namespace {

Mat random_two_form(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = gauss(rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

}  // namespace

TEST_CASE("structure validation names the failed invariant") {
  const Preset p = preset("a36_a1");

  Mat g_bad = p.g;
  g_bad(0, 1) = 0.3;  // breaks symmetry
  try {
    build_structure(p.algebra, g_bad, p.J);
    FAIL("expected a validation error");
  } catch (const validation_error& e) {
    CHECK(e.invariant == "metric symmetry");
    CHECK(e.residual > 0.1);
  }

  Mat g_neg = -p.g;
  CHECK_THROWS_AS(build_structure(p.algebra, g_neg, p.J), validation_error);

  Mat J_bad = p.J;
  J_bad(2, 0) = 0.5;
  CHECK_THROWS_AS(build_structure(p.algebra, p.g, J_bad), validation_error);

  // J-compatibility: this metric is positive and symmetric but not J-invariant
  Mat g_incomp = p.g;
  g_incomp(1, 1) += 0.1;
  CHECK_THROWS_AS(build_structure(p.algebra, g_incomp, p.J), validation_error);

  BuildOptions lenient;
  lenient.lenient = true;
  const AlmostHermitianStructure S = build_structure(p.algebra, g_incomp, p.J, lenient);
  CHECK(S.compatibility_residual > 1e-3);
}

TEST_CASE("fundamental form and volume per preset") {
  {
    const AlmostHermitianStructure S = build_preset("a36_a1");
    const double c = std::sqrt(5.0) - 1.0;
    Mat F = Mat::Zero(4, 4);
    F(0, 2) = c;
    F(2, 0) = -c;
    F(1, 3) = 1.0;
    F(3, 1) = -1.0;
    CHECK(max_abs(Mat(S.F - F)) <= 1e-14);
    // vol = F ^ F / 2 is the positive top form
    CHECK(S.volume(0, 1, 2, 3) == Catch::Approx(-c));  // e1 ^ e2 ^ e3 ^ e4 coefficient sign
    CHECK(std::abs(S.volume(0, 1, 2, 3)) == Catch::Approx(c));
  }
  {
    const AlmostHermitianStructure S = build_preset("a48");
    Mat F = Mat::Zero(4, 4);
    F(0, 3) = 1.0;
    F(3, 0) = -1.0;
    F(1, 2) = 1.0;
    F(2, 1) = -1.0;
    CHECK(max_abs(Mat(S.F - F)) <= 1e-14);
  }
}

TEST_CASE("two-form inner products on an orthonormal basis") {
  const AlmostHermitianStructure S = build_preset("abelian_flat");
  Mat e12 = Mat::Zero(4, 4), e13 = Mat::Zero(4, 4);
  e12(0, 1) = 1.0;
  e12(1, 0) = -1.0;
  e13(0, 2) = 1.0;
  e13(2, 0) = -1.0;
  CHECK(form_ip(S, e12, e12) == Catch::Approx(1.0));
  CHECK(form_ip(S, e12, e13) == Catch::Approx(0.0).margin(1e-14));
  CHECK(form_ip(S, S.F, S.F) == Catch::Approx(2.0));
  // F ^ F = 2 vol in the orientation induced by J; here J orders the frame
  // (e1, e3, e2, e4), an odd permutation, so the e1..e4 evaluation is -2
  CHECK(wedge(to_nd(S.F), to_nd(S.F))(0, 1, 2, 3) == Catch::Approx(-2.0));
}

TEST_CASE("hodge star fixes F and squares to the identity on two-forms") {
  std::mt19937_64 rng(23);
  for (const auto& name : preset_names()) {
    const AlmostHermitianStructure S = build_preset(name);
    INFO(name);
    CHECK(max_abs(Mat(hodge_star(S, S.F) - S.F)) <= 1e-12);
    for (int t = 0; t < 4; ++t) {
      const Mat b = random_two_form(rng);
      const Mat sb = hodge_star(S, b);
      CHECK(max_abs(Mat(hodge_star(S, sb) - b)) <= 1e-12);
      // defining pairing: a ^ *b = <a, b> vol
      const Mat a = random_two_form(rng);
      const double lhs = wedge(to_nd(a), to_nd(sb))(0, 1, 2, 3);
      const double rhs = form_ip(S, a, b) * S.volume(0, 1, 2, 3);
      CHECK(lhs == Catch::Approx(rhs).margin(1e-11));
    }
  }
}

TEST_CASE("J action on forms and the invariant split") {
  std::mt19937_64 rng(29);
  const AlmostHermitianStructure S = build_preset("a410");
  const Mat m = random_two_form(rng);
  const Mat mp = jplus(S, m), mm = jminus(S, m);
  CHECK(max_abs(Mat(mp + mm - m)) <= 1e-14);
  CHECK(max_abs(Mat(S.J.transpose() * mp * S.J - mp)) <= 1e-13);
  CHECK(max_abs(Mat(S.J.transpose() * mm * S.J + mm)) <= 1e-13);
  // projections are idempotent and orthogonal
  CHECK(max_abs(Mat(jplus(S, mp) - mp)) <= 1e-13);
  CHECK(max_abs(Mat(jplus(S, mm))) <= 1e-13);

  // 1-forms: (J theta)(X) = -theta(JX)
  Vec th(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 4; ++i) th(i) = gauss(rng);
  const Vec jth = j_one_form(S, th);
  for (int i = 0; i < 4; ++i)
    CHECK(jth(i) == Catch::Approx(-th.dot(S.J.col(i))).margin(1e-14));

  // sharp and flat invert each other
  CHECK(max_abs(Vec(flat(S, sharp(S, th)) - th)) <= 1e-13);
}

TEST_CASE("nijenhuis tensor values and symmetries") {
  std::mt19937_64 rng(31);
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    const AlmostHermitianStructure S = build_preset(p);
    INFO(name);
    CHECK(max_abs(Vec(fiber_first(S.nijenhuis_tensor.n, 0, 1) - p.expected.n_e1_e2)) <= 1e-12);
  }
  CHECK(build_preset("a36_a1").nijenhuis_tensor.norm_sq == Catch::Approx(0.5));
  CHECK(build_preset("a410").nijenhuis_tensor.norm_sq ==
        Catch::Approx(1.2807764064044154).epsilon(1e-12));

  // N(X, X) = 0 and N(JX, Y) = -J N(X, Y) on a random structure
  const Preset p = preset("a410");
  const AlmostHermitianStructure S = random_structure(p.algebra, p.J, rng);
  const auto& N = S.nijenhuis_tensor.n;
  for (int x = 0; x < 4; ++x) {
    CHECK(max_abs(fiber_first(N, x, x)) <= 1e-13);
    for (int y = 0; y < 4; ++y) {
      CHECK(max_abs(Vec(fiber_first(N, x, y) + fiber_first(N, y, x))) <= 1e-13);
      Vec njx = Vec::Zero(4);
      for (int m = 0; m < 4; ++m) njx += S.J(m, x) * fiber_first(N, m, y);
      CHECK(max_abs(Vec(njx + S.J * fiber_first(N, x, y))) <= 1e-12);
    }
  }
}

TEST_CASE("lee form solves dF = theta ^ F") {
  std::mt19937_64 rng(37);
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    const AlmostHermitianStructure S = build_preset(p);
    INFO(name);
    CHECK(S.lee.residual <= 1e-10);
    CHECK(max_abs(Vec(S.lee.theta - p.expected.theta)) <= 1e-12);
    const NdArray dF = exterior_derivative(S.algebra, to_nd(S.F));
    const NdArray thF = wedge(to_nd(S.lee.theta), to_nd(S.F));
    CHECK((dF - thF).max_abs() <= 1e-12);
    // random compatible pairs on the same algebra stay exactly solvable
    const AlmostHermitianStructure R = random_structure(p.algebra, p.J, rng);
    CHECK(R.lee.residual <= 1e-9);
  }
}

TEST_CASE("adapted frame is orthonormal and J-standard") {
  std::mt19937_64 rng(41);
  Mat Jstd = Mat::Zero(4, 4);
  Jstd(1, 0) = 1.0;
  Jstd(0, 1) = -1.0;
  Jstd(3, 2) = 1.0;
  Jstd(2, 3) = -1.0;
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    for (int t = 0; t < 3; ++t) {
      const AlmostHermitianStructure S = random_structure(p.algebra, p.J, rng);
      CHECK(max_abs(Mat(S.frame.transpose() * S.g * S.frame - Mat::Identity(4, 4))) <= 1e-12);
      CHECK(max_abs(Mat(S.frame_inv * S.J * S.frame - Jstd)) <= 1e-12);
    }
  }
}

TEST_CASE("dF expectations per preset") {
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    const AlmostHermitianStructure S = build_preset(p);
    INFO(name);
    const NdArray dF = exterior_derivative(S.algebra, to_nd(S.F));
    CHECK((dF - p.expected.dF).max_abs() <= 1e-12);
  }
}
