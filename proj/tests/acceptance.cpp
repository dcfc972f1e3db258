// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: acceptance [--only C1,C2,...] [--json path]

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "soliton/report.hpp"
#include "soliton/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria C1-C10"};
  std::vector<std::string> only;
  std::string json_path;
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_option("--json", json_path, "Write the machine-readable verdict here");
  CLI11_PARSE(app, argc, argv);

  soliton::verify::Options opt;
  opt.only = only;
  std::vector<soliton::verify::CriterionResult> results;
  try {
    results = soliton::verify::verify_all(opt);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  bool all = true;
  for (const auto& r : results) {
    std::cout << soliton::verify::summary_line(r) << std::endl;
    all = all && r.passed();
  }
  if (!json_path.empty()) soliton::report::write_json(json_path, soliton::verify::to_json(results));
  return all ? 0 : 1;
}
