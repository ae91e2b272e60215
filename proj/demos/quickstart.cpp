// Build a structure by hand, inspect its curvature, and run the identity
// suite. Mirrors what `hermlie report` and `hermlie verify` do internally.

#include <hermlie/hermlie.hpp>

#include <iostream>

int main() {
  using namespace hermlie;

  // [e1,e3] = -e2, [e2,e3] = e1, with the compatible pair that makes the
  // structure second-Chern-Einstein.
  const double s5 = std::sqrt(5.0);
  const LieAlgebraStructure L =
      LieAlgebraStructure::from_brackets(4, {{1, 3, {{2, -1.0}}}, {2, 3, {{1, 1.0}}}});
  Vec d(4);
  d << s5 - 1.0, 1.0, s5 - 1.0, 1.0;
  Mat J = Mat::Zero(4, 4);
  J(2, 0) = 1.0;
  J(0, 2) = -1.0;
  J(3, 1) = 1.0;
  J(1, 3) = -1.0;

  const AlmostHermitianStructure S = build_structure(L, Mat(d.asDiagonal()), J);
  const GeometryContext C = make_context(S);

  std::cout << "theta = " << C.theta.transpose() << "\n";
  std::cout << "s_H = " << C.s_H << " (expected 1/(sqrt(5)-1) = " << 1.0 / (s5 - 1.0) << ")\n";

  const EinsteinReport e = einstein_residuals(C);
  std::cout << "second-Chern-Einstein residual: " << e.second_chern_residual << "\n";

  int failed = 0;
  for (const auto& row : run_identity_suite(C))
    if (!row.skipped && row.residual > 1e-8) ++failed;
  std::cout << "identity suite: " << (failed == 0 ? "clean" : "FAILED") << "\n";

  std::cout << dump_json(report_document("quickstart", S)) << "\n";
  return failed == 0 ? 0 : 1;
}
