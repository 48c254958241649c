// fmquad: command-line front end.
//
//   fmquad form analyze FILE
//   fmquad field analyze D [--basis a1,a2,...]
//   fmquad oracle classgroup D
//   fmquad density bounds [--json]
//   fmquad density empirical --max-disc X [--n N] [--case-a]
//   fmquad survey --max-disc X [--n N] [--case-a] [--by-radicand] [--jobs J] [--out DIR]

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fmquad/fmquad.hpp"

namespace {

using fmquad::Json;

std::vector<fmquad::i128> parse_basis(const std::string& text) {
  std::vector<fmquad::i128> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(fmquad::parse_i128(item));
  return out;
}

void print_bounds_table() {
  const fmquad::DensityTable t = fmquad::density_table();
  std::cout << std::left << std::setw(12) << "quantity" << std::setw(8) << "r_max" << std::setw(16) << "bound"
            << "provenance\n";
  std::cout << std::setprecision(10);
  for (std::size_t i = 1; i <= 3; ++i) {
    std::cout << std::setw(12) << ("FM^[" + std::to_string(i) + "]") << std::setw(8) << 2 * i - 2 << std::setw(16)
              << fmquad::fm_bracket_bound(i) << "computed from limit densities\n";
  }
  for (const auto& [key, f] : t.fixtures) {
    std::cout << std::setw(12) << f.label << std::setw(8) << f.top << std::setw(16) << f.value
              << "published constant\n";
  }
}

Json empirical_report(const fmquad::SurveyOptions& opt) {
  const fmquad::SurveyAggregate agg = fmquad::run_survey(opt);
  const fmquad::DensityTable t = fmquad::density_table();
  const fmquad::FourRankCounts& counts = opt.case_a_only ? agg.case_a_by_n_r : agg.by_n_r;
  Json j;
  j["x_bound"] = opt.x;
  j["case_a_only"] = opt.case_a_only;
  j["by_radicand"] = opt.by_radicand;
  j["total"] = agg.total;
  Json rows = Json::object();
  for (const auto& [n, row] : counts.by_n_r) {
    std::uint64_t total = 0;
    for (const auto& [r, c] : row) total += c;
    Json entry;
    entry["fields"] = total;
    entry["counts"] = fmquad::detail::count_map(row);
    Json props = Json::object();
    for (const auto& [r, v] : fmquad::empirical_dnr(counts, n)) props[std::to_string(r)] = v;
    entry["d_hat"] = std::move(props);
    Json fixtures = Json::array();
    for (const auto& [key, f] : t.fixtures) {
      if (f.n != n) continue;
      std::uint64_t hit = 0;
      for (const auto& [r, c] : row)
        if (r <= f.top) hit += c;
      fixtures.push_back({{"label", f.label}, {"r_max", f.top},
                          {"empirical", static_cast<double>(hit) / static_cast<double>(total)}, {"fixture", f.value}});
    }
    entry["partial_sums"] = std::move(fixtures);
    rows[std::to_string(n)] = std::move(entry);
  }
  j["by_n"] = std::move(rows);
  Json lim = Json::object();
  for (const auto& [r, v] : t.d_inf)
    if (r <= 6) lim[std::to_string(r)] = v;
  j["limit"] = std::move(lim);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isotropy of the radical form of imaginary quadratic fields and uniform quotients of the 2-tower"};
  app.require_subcommand(1);

  auto* form = app.add_subcommand("form", "Bilinear forms over F2");
  form->require_subcommand(1);
  auto* form_analyze = form->add_subcommand("analyze", "Rank, symmetry and isotropy index of a Gram matrix file");
  std::string form_file;
  std::size_t form_max_exact = fmquad::kDefaultMaxExactDim;
  form_analyze->add_option("file", form_file, "Matrix text file (n, then n rows of 0/1)")->required();
  form_analyze->add_option("--max-exact", form_max_exact, "Largest n for the exact search");

  auto* field = app.add_subcommand("field", "Imaginary quadratic fields");
  field->require_subcommand(1);
  auto* field_analyze = field->add_subcommand("analyze", "Full field record as JSON");
  std::string field_d;
  std::string field_basis;
  field_analyze->add_option("d", field_d, "Negative squarefree radicand")->required();
  field_analyze->add_option("--basis", field_basis, "Comma-separated elements of the radical");

  auto* oracle = app.add_subcommand("oracle", "Brute-force checks");
  oracle->require_subcommand(1);
  auto* oracle_cg = oracle->add_subcommand("classgroup", "Class group structure from reduced forms");
  long long oracle_d = 0;
  oracle_cg->add_option("d", oracle_d, "Negative fundamental discriminant")->required();

  auto* density = app.add_subcommand("density", "Limit and empirical 4-rank densities");
  density->require_subcommand(1);
  auto* density_bounds = density->add_subcommand("bounds", "Lower bounds for the proportion of decided fields");
  bool bounds_json = false;
  density_bounds->add_flag("--json", bounds_json, "Print JSON instead of a table");
  auto* density_emp = density->add_subcommand("empirical", "Empirical 4-rank distribution");
  fmquad::SurveyOptions emp_opt;
  emp_opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::size_t> emp_n;
  density_emp->add_option("--max-disc", emp_opt.x, "Bound on |disc|")->required()->check(CLI::Range(3ULL, 1ULL << 40));
  density_emp->add_option("--n", emp_n, "Only fields with this 2-rank");
  density_emp->add_flag("--case-a", emp_opt.case_a_only, "Only d = 1 mod 4");
  density_emp->add_flag("--by-radicand", emp_opt.by_radicand, "Bound |d| instead of |disc|");
  density_emp->add_option("--jobs", emp_opt.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* survey = app.add_subcommand("survey", "Survey all fields up to a discriminant bound");
  fmquad::SurveyOptions sv_opt;
  sv_opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::size_t> sv_n;
  std::string out_dir = "survey_out";
  survey->add_option("--max-disc", sv_opt.x, "Bound on |disc|")->required()->check(CLI::Range(3ULL, 1ULL << 40));
  survey->add_option("--n", sv_n, "Only fields with this 2-rank");
  survey->add_flag("--case-a", sv_opt.case_a_only, "Only d = 1 mod 4");
  survey->add_flag("--by-radicand", sv_opt.by_radicand, "Bound |d| instead of |disc|");
  survey->add_option("--jobs", sv_opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  survey->add_option("--chunk", sv_opt.chunk_size, "Radicands per work unit")->check(CLI::PositiveNumber);
  survey->add_option("--out", out_dir, "Output directory for fields.csv and aggregate.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*form_analyze) {
      std::ifstream in(form_file);
      if (!in) throw fmquad::Error(fmquad::Errc::IoError, "cannot open " + form_file);
      const fmquad::BilinearForm f(fmquad::read_matrix(in));
      std::cout << fmquad::form_report(f, form_max_exact).dump(2) << '\n';
    } else if (*field_analyze) {
      const fmquad::FieldRecord rec = fmquad::build_field(fmquad::parse_i128(field_d));
      const auto basis = field_basis.empty() ? std::vector<fmquad::i128>{} : parse_basis(field_basis);
      std::cout << fmquad::field_report(rec, basis).dump(2) << '\n';
    } else if (*oracle_cg) {
      std::cout << fmquad::classgroup_report(oracle_d).dump(2) << '\n';
    } else if (*density_bounds) {
      if (bounds_json)
        std::cout << fmquad::density_bounds_report().dump(2) << '\n';
      else
        print_bounds_table();
    } else if (*density_emp) {
      emp_opt.only_n = emp_n;
      std::cout << empirical_report(emp_opt).dump(2) << '\n';
    } else if (*survey) {
      sv_opt.only_n = sv_n;
      const fmquad::SurveyAggregate agg = fmquad::emit_survey(sv_opt, out_dir);
      std::cerr << "surveyed " << agg.total << " fields; wrote " << out_dir << "/fields.csv and " << out_dir
                << "/aggregate.json\n";
    }
  } catch (const fmquad::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
