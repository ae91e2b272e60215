#pragma once

#include "hermlie/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace hermlie {

namespace detail {

inline int emit_error(std::ostream& err, const std::string& type, const std::string& message) {
  ordered_json doc;
  ordered_json e;
  e["type"] = type;
  e["message"] = message;
  doc["error"] = e;
  err << dump_json(doc) << "\n";
  return 2;
}

inline std::string text_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v == 0.0 ? 0.0 : v);
  return std::string(buf);
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ordered_json::parse(buf.str());
}

inline AlmostHermitianStructure structure_from_file(const std::string& path) {
  const StructureDocument sd = structure_from_json(load_json_file(path));
  return build_structure(sd.algebra, sd.g, sd.J);
}

inline void print_report_text(std::ostream& out, const ordered_json& doc) {
  out << "source: " << doc.at("source").get<std::string>() << "\n";
  const auto& th = doc.at("theta");
  out << "theta = [";
  for (std::size_t i = 0; i < th.size(); ++i)
    out << (i ? ", " : "") << text_num(th.at(i).get<double>());
  out << "]\n";
  const auto& sc = doc.at("curvature").at("scalars");
  out << "scalars: s_H = " << text_num(sc.at("s_H").get<double>())
      << ", s_g = " << text_num(sc.at("s_g").get<double>())
      << ", s_W = " << text_num(sc.at("s_W").get<double>())
      << ", s_star = " << text_num(sc.at("s_star").get<double>()) << "\n";
  out << "flags:\n";
  for (auto it = doc.at("flags").begin(); it != doc.at("flags").end(); ++it)
    out << "  " << (it.value().at("holds").get<bool>() ? "[x] " : "[ ] ") << it.key()
        << " (residual " << text_num(it.value().at("residual").get<double>()) << ")\n";
  const auto& e = doc.at("einstein");
  out << "einstein: second_chern residual " << text_num(e.at("second_chern_residual").get<double>())
      << " (lambda " << text_num(e.at("lambda_second_chern").get<double>()) << "), bismut residual "
      << text_num(e.at("bismut_residual").get<double>()) << ", weyl residual "
      << text_num(e.at("weyl_residual").get<double>()) << "\n";
}

inline void print_verify_text(std::ostream& out, const ordered_json& doc) {
  for (const auto& sd : doc.at("structures")) {
    int failed = 0, skipped = 0, total = 0;
    for (const auto& row : sd.at("identities")) {
      ++total;
      if (row.at("skipped").get<bool>()) ++skipped;
    }
    failed = static_cast<int>(sd.at("failures").size());
    out << sd.at("source").get<std::string>() << ": "
        << (sd.at("passed").get<bool>() ? "pass" : "FAIL") << " (" << total << " identities, "
        << failed << " failed, " << skipped << " skipped)\n";
    for (const auto& row : sd.at("identities")) {
      const bool skip = row.at("skipped").get<bool>();
      const double res = row.at("residual").get<double>();
      const bool ok = res <= doc.at("tolerance").get<double>();
      if (skip)
        out << "  skip " << row.at("id").get<std::string>() << " residual " << text_num(res)
            << "\n";
      else if (!ok)
        out << "  FAIL " << row.at("id").get<std::string>() << " residual " << text_num(res)
            << "\n";
    }
  }
  out << (doc.at("passed").get<bool>() ? "passed" : "failed") << "\n";
}

}  // namespace detail

/// Command-line entry point. Returns 0 on success, 1 when a verification
/// fails, 2 on usage or input errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"invariant almost-Hermitian geometry on low-dimensional Lie algebras"};
  app.name("hermlie");
  app.require_subcommand(1);

  std::string rep_preset, rep_file;
  bool rep_text = false, rep_json = false;
  auto* rep = app.add_subcommand("report", "curvature, Lee form and flag report");
  auto* rep_p = rep->add_option("--preset", rep_preset, "preset structure name");
  auto* rep_f = rep->add_option("--file", rep_file, "structure document (JSON)");
  rep_f->excludes(rep_p);
  auto* rep_j = rep->add_flag("--json", rep_json, "JSON output (default)");
  rep->add_flag("--text", rep_text, "plain text output")->excludes(rep_j);

  std::string ver_preset, ver_file, ver_ids;
  double ver_tol = 1e-8;
  long long ver_seed = 0;
  bool ver_text = false, ver_json = false;
  auto* ver = app.add_subcommand("verify", "run the curvature identity suite");
  auto* ver_p = ver->add_option("--preset", ver_preset, "preset name, or \"all\"");
  auto* ver_f = ver->add_option("--file", ver_file, "structure document (JSON)");
  ver_f->excludes(ver_p);
  ver->add_option("--identities", ver_ids, "comma-separated identity ids (default: all)");
  ver->add_option("--tolerance", ver_tol, "relative residual tolerance")
      ->check(CLI::PositiveNumber);
  auto* ver_s = ver->add_option("--seed", ver_seed,
                                "also check 5 random metric/J perturbations per structure");
  auto* ver_j = ver->add_flag("--json", ver_json, "JSON output (default)");
  ver->add_flag("--text", ver_text, "plain text output")->excludes(ver_j);

  std::string cls_A;
  bool cls_text = false, cls_json = false;
  auto* cls = app.add_subcommand("classify", "classify a 4d almost-abelian algebra");
  cls->add_option("--A", cls_A, "3 x 3 ad-action matrix as a JSON array of rows")->required();
  auto* cls_j = cls->add_flag("--json", cls_json, "JSON output (default)");
  cls->add_flag("--text", cls_text, "plain text output")->excludes(cls_j);

  std::string sol_problem, sol_constraint;
  bool sol_text = false, sol_json = false;
  auto* sol = app.add_subcommand("solve", "enumerate Einstein-type solution families");
  sol->add_option("--problem", sol_problem, "bismut or second-chern")
      ->required()
      ->check(CLI::IsMember({"bismut", "second-chern"}));
  sol->add_option("--constraint", sol_constraint, "extra constraint (second-chern: parallel-lee)")
      ->check(CLI::IsMember({"parallel-lee"}));
  auto* sol_j = sol->add_flag("--json", sol_json, "JSON output (default)");
  sol->add_flag("--text", sol_text, "plain text output")->excludes(sol_j);

  bool cat_text = false, cat_json = false;
  auto* cat = app.add_subcommand("catalog", "list presets and algebra families");
  auto* cat_j = cat->add_flag("--json", cat_json, "JSON output (default)");
  cat->add_flag("--text", cat_text, "plain text output")->excludes(cat_j);

  std::vector<const char*> argv;
  argv.push_back("hermlie");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    // flag-level misuse gets the same machine-readable error document as
    // input errors, so stderr is always parseable
    return detail::emit_error(err, "usage", e.what());
  }

  try {
    if (app.got_subcommand(rep)) {
      if (rep_preset.empty() && rep_file.empty())
        return detail::emit_error(err, "usage", "report needs --preset or --file");
      const std::string source = rep_preset.empty() ? rep_file : rep_preset;
      const AlmostHermitianStructure S =
          rep_preset.empty() ? detail::structure_from_file(rep_file) : build_preset(rep_preset);
      const ordered_json doc = report_document(source, S);
      if (rep_text)
        detail::print_report_text(out, doc);
      else
        out << dump_json(doc) << "\n";
      return 0;
    }

    if (app.got_subcommand(ver)) {
      if (ver_preset.empty() && ver_file.empty())
        return detail::emit_error(err, "usage", "verify needs --preset or --file");
      std::vector<std::pair<std::string, AlmostHermitianStructure>> targets;
      if (!ver_preset.empty()) {
        const std::vector<std::string> names =
            ver_preset == "all" ? preset_names() : std::vector<std::string>{ver_preset};
        for (const auto& n : names) targets.emplace_back(n, build_preset(n));
      } else {
        targets.emplace_back(ver_file, detail::structure_from_file(ver_file));
      }
      if (ver_s->count() > 0) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(ver_seed));
        const std::size_t base = targets.size();
        for (std::size_t t = 0; t < base; ++t)
          for (int k = 1; k <= 5; ++k)
            targets.emplace_back(
                targets[t].first + "/random-" + std::to_string(k),
                random_structure(targets[t].second.algebra, targets[t].second.J, rng));
      }
      const std::vector<std::string> selection = detail::split_csv(ver_ids);
      ordered_json doc;
      doc["tolerance"] = ver_tol;
      ordered_json arr = ordered_json::array();
      bool all_passed = true;
      for (const auto& [label, S] : targets) {
        ordered_json vd = verify_document(label, S, selection, ver_tol);
        all_passed = all_passed && vd.at("passed").get<bool>();
        arr.push_back(std::move(vd));
      }
      doc["structures"] = arr;
      doc["passed"] = all_passed;
      if (ver_text)
        detail::print_verify_text(out, doc);
      else
        out << dump_json(doc) << "\n";
      return all_passed ? 0 : 1;
    }

    if (app.got_subcommand(cls)) {
      const Mat M = matrix_from_json(ordered_json::parse(cls_A), "--A");
      const ClassLabel label = classify_jordan(M);
      if (cls_text) {
        out << to_string(label) << "\n";
      } else {
        ordered_json doc;
        doc["A"] = matrix_to_json(M);
        doc["class"] = to_string(label);
        out << dump_json(doc) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(sol)) {
      std::vector<SolutionFamily> fams;
      if (sol_problem == "bismut") {
        if (!sol_constraint.empty())
          return detail::emit_error(err, "usage", "the bismut problem takes no --constraint");
        fams = solve_bismut_unimodular_dim4();
      } else {
        if (sol_constraint != "parallel-lee")
          return detail::emit_error(err, "usage",
                                    "the second-chern problem requires --constraint parallel-lee");
        fams = solve_second_chern_parallel_lee_dim4();
      }
      if (sol_text) {
        for (const auto& f : fams)
          out << to_string(f.class_label) << ": " << f.description << " (residual "
              << detail::text_num(f.einstein_residual) << ", lambda "
              << detail::text_num(f.lambda) << ")\n";
      } else {
        ordered_json doc;
        doc["problem"] = sol_problem;
        if (!sol_constraint.empty()) doc["constraint"] = sol_constraint;
        doc["families"] = families_to_json(fams);
        out << dump_json(doc) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(cat)) {
      if (cat_text) {
        out << "presets:\n";
        for (const auto& n : preset_names()) out << "  " << n << "\n";
        out << "algebras:\n";
        for (const auto& a : algebra_catalog()) out << "  " << a.name << ": " << a.brackets << "\n";
      } else {
        ordered_json doc;
        ordered_json ps = ordered_json::array();
        for (const auto& p : preset_catalog()) {
          ordered_json po;
          po["name"] = p.name;
          ordered_json notes;
          for (const auto& [k, v] : p.notes) notes[k] = v;
          po["notes"] = notes;
          ps.push_back(po);
        }
        doc["presets"] = ps;
        ordered_json as = ordered_json::array();
        for (const auto& a : algebra_catalog()) {
          ordered_json ao;
          ao["name"] = a.name;
          ao["brackets"] = a.brackets;
          as.push_back(ao);
        }
        doc["algebras"] = as;
        out << dump_json(doc) << "\n";
      }
      return 0;
    }
  } catch (const nlohmann::json::parse_error& e) {
    return detail::emit_error(err, "parse", e.what());
  } catch (const validation_error& e) {
    return detail::emit_error(err, "validation", e.what());
  } catch (const std::invalid_argument& e) {
    return detail::emit_error(err, "invalid_input", e.what());
  } catch (const std::exception& e) {
    return detail::emit_error(err, "error", e.what());
  }
  return 2;
}

}  // namespace hermlie
