#pragma once

// JSON renderings shared by the command-line tool and the acceptance suite.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmquad/arith.hpp"
#include "fmquad/classgroup.hpp"
#include "fmquad/density.hpp"
#include "fmquad/forms.hpp"
#include "fmquad/quadfield.hpp"
#include "fmquad/survey.hpp"

namespace fmquad {

using Json = nlohmann::ordered_json;

/// Integers beyond 64 bits are rendered as decimal strings.
inline Json integer_json(i128 v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return to_string(v);
}

inline Json integer_json(u128 v) { return integer_json(static_cast<i128>(v)); }

inline Json matrix_json(const BitMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.get(i, j) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json form_report(const BilinearForm& f, std::size_t max_exact = kDefaultMaxExactDim) {
  const NuBounds b = nu_full(f, max_exact);
  Json j;
  j["n"] = f.dim();
  j["rank"] = rank(f.gram());
  j["rank_sym"] = rank(symmetrize(f).gram());
  j["symmetric"] = is_symmetric(f);
  j["alternating"] = is_alternating(f);
  j["right_radical_dim"] = right_radical_dim(f);
  j["nu_lower"] = b.lower;
  j["nu_upper"] = b.upper;
  if (b.exact) j["nu_exact"] = *b.exact;
  return j;
}

inline Json field_report(const FieldRecord& rec, const std::vector<i128>& user_basis = {}) {
  Json j;
  j["d"] = integer_json(rec.d);
  j["disc"] = integer_json(rec.disc);
  Json odd = Json::array();
  for (u128 p : rec.odd_ramified) odd.push_back(integer_json(p));
  j["odd_ramified"] = std::move(odd);
  j["p0_star"] = rec.p0_star;
  j["n"] = rec.n;
  Json rp = Json::array();
  for (u128 p : rec.redei_primes) rp.push_back(integer_json(p));
  j["redei_primes"] = std::move(rp);
  Json basis = Json::array();
  for (i128 b : rec.basis) basis.push_back(integer_json(b));
  j["basis"] = std::move(basis);
  j["gram"] = matrix_json(rec.gram.gram());
  j["rank_gram"] = rec.rank_gram;
  j["redei"] = matrix_json(rec.redei);
  j["rank_redei"] = rec.rank_redei;
  j["four_rank"] = rec.four_rank;
  j["nu"] = {{"lower", rec.nu.lower}, {"upper", rec.nu.upper}};
  j["nu"]["exact"] = rec.nu.exact ? Json(*rec.nu.exact) : Json(nullptr);
  j["symmetric"] = rec.symmetric;
  j["gram_is_symmetric"] = rec.gram.gram().is_symmetric();
  j["alternating"] = is_alternating(rec.gram);
  j["case_a"] = rec.case_a;
  j["cs_pair"] = rec.cs_pair ? Json::array({integer_json(rec.cs_pair->first), integer_json(rec.cs_pair->second)})
                             : Json(nullptr);
  j["verdict"] = {{"max_uniform_dim", rec.verdict.max_uniform_dim},
                  {"conjecture2_decided", rec.verdict.conjecture2_decided},
                  {"corollary_tags", rec.verdict.corollary_tags}};
  if (!user_basis.empty()) {
    Json ub = Json::array();
    for (i128 a : user_basis) ub.push_back(integer_json(a));
    j["user_basis"] = {{"elements", std::move(ub)}, {"gram", matrix_json(gram_in_basis(rec, user_basis).gram())}};
  }
  return j;
}

inline Json classgroup_report(std::int64_t disc) {
  const GroupStructure gs = group_structure(disc);
  Json j;
  j["disc"] = disc;
  j["h"] = gs.order;
  j["invariant_factors"] = gs.invariant_factors;
  j["two_rank"] = gs.two_rank();
  j["four_rank"] = gs.four_rank();
  return j;
}

inline Json density_bounds_report() {
  const DensityTable t = density_table();
  Json j;
  Json lim = Json::array();
  for (const auto& [r, v] : t.d_inf) lim.push_back({{"r", r}, {"d_inf", v}});
  j["gerth_limit"] = std::move(lim);
  Json br = Json::array();
  for (std::size_t i = 1; i <= 3; ++i)
    br.push_back({{"i", i}, {"bound", fm_bracket_bound(i)}, {"provenance", "computed from limit densities"}});
  j["fm_bracket"] = std::move(br);
  Json nd = Json::array();
  for (const auto& [key, f] : t.fixtures)
    nd.push_back({{"n", f.n}, {"d", f.d}, {"r_max", f.top}, {"bound", f.value}, {"label", f.label},
                  {"provenance", "published constant"}});
  j["fm_n_d"] = std::move(nd);
  return j;
}

namespace detail {

template <typename Map>
Json count_map(const Map& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

template <typename Map>
Json nested_count_map(const Map& m) {
  Json j = Json::object();
  for (const auto& [k, row] : m) j[std::to_string(k)] = count_map(row);
  return j;
}

inline double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

inline Json aggregate_report(const SurveyAggregate& agg) {
  Json j;
  j["x_bound"] = agg.x_bound;
  j["total"] = agg.total;
  j["by_n"] = detail::count_map(agg.by_n);
  j["by_n_r"] = detail::nested_count_map(agg.by_n_r.by_n_r);
  j["fm_n"] = detail::count_map(agg.fm_n);
  j["fm_n_d"] = detail::nested_count_map(agg.fm_n_d);
  j["fm_bracket"] = detail::count_map(agg.fm_bracket);
  j["case_a"] = agg.case_a;

  const DensityTable table = density_table();
  Json cmp;
  Json bracket = Json::object();
  for (const auto& [i, c] : agg.fm_bracket) {
    Json row = {{"empirical", detail::ratio(c, agg.total)}, {"limit_bound", fm_bracket_bound(i)}};
    if (agg.by_radicand) row["empirical_ceil_threshold"] = detail::ratio(agg.fm_bracket_ceil.at(i), agg.total);
    bracket[std::to_string(i)] = std::move(row);
  }
  cmp["fm_bracket"] = std::move(bracket);

  Json nd = Json::array();
  for (const auto& [key, f] : table.fixtures) {
    auto bn = agg.by_n.find(f.n);
    if (bn == agg.by_n.end()) continue;
    std::uint64_t hit = 0;
    if (auto row = agg.fm_n_d.find(f.n); row != agg.fm_n_d.end())
      if (auto c = row->second.find(f.d); c != row->second.end()) hit = c->second;
    nd.push_back({{"n", f.n}, {"d", f.d}, {"label", f.label}, {"empirical", detail::ratio(hit, bn->second)},
                  {"fixture", f.value}});
  }
  cmp["fm_n_d"] = std::move(nd);

  auto dnr = [&](const FourRankCounts& counts) {
    Json out = Json::object();
    for (const auto& [n, row] : counts.by_n_r) {
      Json props = Json::object();
      for (const auto& [r, v] : empirical_dnr(counts, n)) props[std::to_string(r)] = v;
      out[std::to_string(n)] = std::move(props);
    }
    return out;
  };
  cmp["four_rank_density"] = dnr(agg.by_n_r);
  cmp["four_rank_density_case_a"] = dnr(agg.case_a_by_n_r);
  Json lim = Json::object();
  for (const auto& [r, v] : table.d_inf)
    if (r <= 6) lim[std::to_string(r)] = v;
  cmp["four_rank_limit"] = std::move(lim);
  j["comparisons"] = std::move(cmp);
  return j;
}

/// Runs the survey and writes DIR/fields.csv and DIR/aggregate.json.
inline SurveyAggregate emit_survey(const SurveyOptions& opt, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  const auto csv_path = dir / "fields.csv";
  const auto json_path = dir / "aggregate.json";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw Error(Errc::IoError, "cannot open " + csv_path.string());
  const SurveyAggregate agg = run_survey(opt, [&](std::string_view text) { csv.write(text.data(), std::ssize(text)); });
  csv.close();
  if (!csv) throw Error(Errc::IoError, "write failed: " + csv_path.string());
  std::ofstream json(json_path, std::ios::binary);
  if (!json) throw Error(Errc::IoError, "cannot open " + json_path.string());
  json << aggregate_report(agg).dump(2) << '\n';
  json.close();
  if (!json) throw Error(Errc::IoError, "write failed: " + json_path.string());
  return agg;
}

}  // namespace fmquad
