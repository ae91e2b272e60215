#include <hermlie/cli.hpp>
#include <hermlie/presets.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace hermlie;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string error_type(const CliResult& r) {
  return ordered_json::parse(r.err).at("error").at("type").get<std::string>();
}

std::filesystem::path temp_file(const char* name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("writer output is byte-stable under parse and re-dump") {
  const AlmostHermitianStructure S = build_preset("a36_a1");
  const std::vector<ordered_json> docs = {
      report_document("a36_a1", S),
      verify_document("a36_a1", S, {}, 1e-8),
      families_to_json(solve_bismut_unimodular_dim4()),
      families_to_json(solve_second_chern_parallel_lee_dim4()),
      structure_to_json(S),
  };
  for (const auto& doc : docs) {
    const std::string s1 = dump_json(doc);
    const std::string s2 = dump_json(ordered_json::parse(s1));
    CHECK(s1 == s2);
  }
}

TEST_CASE("number formatting: negative zero, full precision, non-finite") {
  CHECK(detail::format_number(-0.0) == "0");
  CHECK(detail::format_number(0.0) == "0");
  CHECK(detail::format_number(0.5) == "0.5");

  // 17 significant digits survive a round-trip
  for (double v : {0.1 + 0.2, 1.0 / 3.0, 1.0 / (std::sqrt(5.0) - 1.0), -0.070194101601103759}) {
    const ordered_json parsed = ordered_json::parse(detail::format_number(v));
    CHECK(parsed.get<double>() == v);
  }

  CHECK_THROWS_AS(detail::format_number(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(detail::format_number(INFINITY), std::invalid_argument);
}

TEST_CASE("algebra documents round-trip across the catalog") {
  for (const auto& entry : algebra_catalog()) {
    const LieAlgebraStructure back = algebra_from_json(algebra_to_json(entry.algebra));
    INFO(entry.name);
    CHECK(back.dim == entry.algebra.dim);
    CHECK((back.c - entry.algebra.c).max_abs() == 0.0);
  }
}

TEST_CASE("two-form documents carry all six coefficients") {
  Mat m = Mat::Zero(4, 4);
  m(0, 2) = 0.25;
  m(2, 0) = -0.25;
  const ordered_json o = two_form_to_json(m);
  for (const char* k : {"e12", "e13", "e14", "e23", "e24", "e34"}) CHECK(o.contains(k));
  CHECK(o.at("e13").get<double>() == 0.25);
  CHECK(max_abs(Mat(two_form_from_json(o) - m)) == 0.0);
  CHECK_THROWS_AS(two_form_from_json(ordered_json::array()), std::invalid_argument);
  CHECK_THROWS_AS(two_form_to_json(Mat(Mat::Zero(3, 3))), std::invalid_argument);
}

TEST_CASE("document validation rejects malformed input") {
  CHECK_THROWS_AS(algebra_from_json(ordered_json::object()), std::invalid_argument);
  CHECK_THROWS_AS(algebra_from_json(ordered_json::parse(R"({"dim": 0})")), std::invalid_argument);
  CHECK_THROWS_AS(algebra_from_json(ordered_json::parse(R"({"dim": 40})")), std::invalid_argument);
  // repeated index in a bracket pair
  CHECK_THROWS_AS(algebra_from_json(ordered_json::parse(
                      R"({"dim": 4, "brackets": [{"i": 2, "j": 2, "out": {"1": 1.0}}]})")),
                  std::invalid_argument);
  // output index out of range
  CHECK_THROWS_AS(algebra_from_json(ordered_json::parse(
                      R"({"dim": 4, "brackets": [{"i": 1, "j": 2, "out": {"9": 1.0}}]})")),
                  std::invalid_argument);
  // output key that is not an index
  CHECK_THROWS_AS(algebra_from_json(ordered_json::parse(
                      R"({"dim": 4, "brackets": [{"i": 1, "j": 2, "out": {"x": 1.0}}]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(algebra_from_json(ordered_json::parse(R"({"dim": 4, "brackets": 3})")),
                  std::invalid_argument);

  CHECK_THROWS_AS(structure_from_json(ordered_json::parse(R"({"dim": 4})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(ordered_json::parse("[[1, 2], [3]]"), "test"),
                  std::invalid_argument);
}

TEST_CASE("structure documents round-trip") {
  const AlmostHermitianStructure S = build_preset("a410");
  const StructureDocument sd = structure_from_json(structure_to_json(S));
  CHECK((sd.algebra.c - S.algebra.c).max_abs() == 0.0);
  CHECK(max_abs(Mat(sd.g - S.g)) == 0.0);
  CHECK(max_abs(Mat(sd.J - S.J)) == 0.0);
  const AlmostHermitianStructure back = build_structure(sd.algebra, sd.g, sd.J);
  CHECK(max_abs(Vec(back.lee.theta - S.lee.theta)) <= 1e-14);
}

TEST_CASE("cli verify: presets, selections, gating and tolerance") {
  const CliResult all = run({"verify", "--preset", "all"});
  CHECK(all.code == 0);
  const ordered_json doc = ordered_json::parse(all.out);
  CHECK(doc.at("structures").size() == 5);
  CHECK(doc.at("passed").get<bool>());

  const CliResult io = run({"verify", "--preset", "a36_a1", "--identities", "I-O"});
  CHECK(io.code == 0);
  const ordered_json io_doc = ordered_json::parse(io.out);
  const auto& io_row = io_doc.at("structures").at(0).at("identities").at(0);
  CHECK(io_row.at("id").get<std::string>() == "I-O");
  CHECK_FALSE(io_row.at("skipped").get<bool>());

  // hypotheses fail on this preset: the row is skipped, not silently passed
  const CliResult im = run({"verify", "--preset", "a41", "--identities", "I-M"});
  CHECK(im.code == 0);
  const ordered_json im_doc = ordered_json::parse(im.out);
  const auto& im_row = im_doc.at("structures").at(0).at("identities").at(0);
  CHECK(im_row.at("skipped").get<bool>());
  CHECK_FALSE(im_row.at("hypotheses").empty());

  const CliResult bad_id = run({"verify", "--preset", "a36_a1", "--identities", "I-Z"});
  CHECK(bad_id.code == 2);
  CHECK(error_type(bad_id) == "invalid_input");

  const CliResult strict = run({"verify", "--preset", "a36_a1", "--tolerance", "1e-30"});
  CHECK(strict.code == 1);
  CHECK_FALSE(ordered_json::parse(strict.out).at("passed").get<bool>());

  const CliResult text = run({"verify", "--preset", "a48", "--text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("passed") != std::string::npos);
}

TEST_CASE("cli verify: seeded perturbations are deterministic") {
  const CliResult r1 = run({"verify", "--preset", "a41", "--seed", "5"});
  const CliResult r2 = run({"verify", "--preset", "a41", "--seed", "5"});
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  const ordered_json doc = ordered_json::parse(r1.out);
  CHECK(doc.at("structures").size() == 6);  // preset + 5 perturbations
  CHECK(doc.at("structures").at(5).at("source").get<std::string>() == "a41/random-5");
}

TEST_CASE("cli report: presets, files and failure taxonomy") {
  const CliResult rep = run({"report", "--preset", "a36_a1"});
  CHECK(rep.code == 0);
  const ordered_json doc = ordered_json::parse(rep.out);
  CHECK(doc.at("theta").at(3).get<double>() ==
        Catch::Approx(1.0 / (std::sqrt(5.0) - 1.0)).epsilon(1e-12));
  CHECK(doc.at("flags").at("lee_parallel").at("holds").get<bool>());
  CHECK(doc.at("einstein").at("second_chern_residual").get<double>() <= 1e-9);

  CHECK(run({"report", "--preset", "a410", "--text"}).code == 0);

  const auto good = temp_file("hermlie_structure_ok.json",
                              dump_json(structure_to_json(build_preset("a48"))));
  const CliResult from_file = run({"report", "--file", good.string()});
  CHECK(from_file.code == 0);
  CHECK(ordered_json::parse(from_file.out).at("dim").get<int>() == 4);

  const auto broken = temp_file("hermlie_structure_broken.json", "{ not json");
  const CliResult parse_fail = run({"report", "--file", broken.string()});
  CHECK(parse_fail.code == 2);
  CHECK(error_type(parse_fail) == "parse");

  const CliResult missing = run({"report", "--file", "/nonexistent/nope.json"});
  CHECK(missing.code == 2);
  CHECK(error_type(missing) == "invalid_input");

  const CliResult unknown = run({"report", "--preset", "nope"});
  CHECK(unknown.code == 2);

  const CliResult neither = run({"report"});
  CHECK(neither.code == 2);
  CHECK(error_type(neither) == "usage");

  // --preset and --file are mutually exclusive
  CHECK(run({"report", "--preset", "a41", "--file", good.string()}).code == 2);
}

TEST_CASE("cli classify") {
  const CliResult a34 = run({"classify", "--A", "[[0,0,0],[0,1,0],[0,0,-1]]"});
  CHECK(a34.code == 0);
  CHECK(ordered_json::parse(a34.out).at("class").get<std::string>() == "A34_plus_A1");

  const CliResult text = run({"classify", "--A", "[[0,0,0],[0,0,1],[0,-1,0]]", "--text"});
  CHECK(text.code == 0);
  CHECK(text.out == "A36_plus_A1\n");

  const CliResult bad_json = run({"classify", "--A", "[[0,0"});
  CHECK(bad_json.code == 2);
  CHECK(error_type(bad_json) == "parse");

  const CliResult bad_shape = run({"classify", "--A", "[[1,0],[0,1]]"});
  CHECK(bad_shape.code == 2);
  CHECK(error_type(bad_shape) == "invalid_input");

  CHECK(run({"classify"}).code == 2);  // --A is required
}

TEST_CASE("cli solve") {
  const CliResult bis = run({"solve", "--problem", "bismut"});
  CHECK(bis.code == 0);
  const ordered_json bis_doc = ordered_json::parse(bis.out);
  REQUIRE(bis_doc.at("families").size() == 3);
  std::set<std::string> bis_classes;
  for (const auto& f : bis_doc.at("families")) {
    bis_classes.insert(f.at("class").get<std::string>());
    CHECK(f.at("einstein_residual").get<double>() <= 1e-12);
    CHECK(f.at("witness").contains("A"));
  }
  CHECK(bis_classes == std::set<std::string>{"A31_plus_A1", "A36_plus_A1"});

  const CliResult sce = run({"solve", "--problem", "second-chern", "--constraint", "parallel-lee"});
  CHECK(sce.code == 0);
  const ordered_json sce_doc = ordered_json::parse(sce.out);
  REQUIRE(sce_doc.at("families").size() == 2);
  std::set<std::string> sce_classes;
  for (const auto& f : sce_doc.at("families")) {
    sce_classes.insert(f.at("class").get<std::string>());
    CHECK_FALSE(f.at("flags").at("integrable").get<bool>());
    CHECK(f.at("flags").at("lee_nonzero").get<bool>());
  }
  CHECK(sce_classes == std::set<std::string>{"A34_plus_A1", "A36_plus_A1"});

  CHECK(run({"solve", "--problem", "second-chern", "--constraint", "parallel-lee", "--text"}).code ==
        0);

  const CliResult extra = run({"solve", "--problem", "bismut", "--constraint", "parallel-lee"});
  CHECK(extra.code == 2);
  CHECK(error_type(extra) == "usage");

  const CliResult none = run({"solve", "--problem", "second-chern"});
  CHECK(none.code == 2);
  CHECK(error_type(none) == "usage");

  CHECK(run({"solve", "--problem", "ricci-flow"}).code == 2);
}

TEST_CASE("cli catalog and top-level parsing") {
  const CliResult cat = run({"catalog"});
  CHECK(cat.code == 0);
  const ordered_json doc = ordered_json::parse(cat.out);
  CHECK(doc.at("presets").size() == 5);
  CHECK(doc.at("algebras").size() == 7);

  const CliResult text = run({"catalog", "--text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("a36_a1") != std::string::npos);

  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}
