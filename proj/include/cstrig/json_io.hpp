#pragma once

// JSON serialization of grid results and hypothesis reports. Grid JSON round
// trips exactly: doubles are emitted in shortest-round-trip form and cells
// keep their canonical order.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cstrig/grid.hpp"

namespace cstrig {

using json = nlohmann::json;

class JsonFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline json opt_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

inline std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

inline SharedType shared_type_from_string(const std::string& s) {
  if (s == "shared-l1") return SharedType::SharedL1;
  if (s == "shared-l2") return SharedType::SharedL2;
  if (s == "shared-other") return SharedType::SharedOther;
  if (s == "all-shared") return SharedType::AllShared;
  throw JsonFormatError("unknown shared type '" + s + "'");
}

inline Direction direction_from_string(const std::string& s) {
  if (s == "l1-to-l2") return Direction::L1ToL2;
  if (s == "l2-to-l1") return Direction::L2ToL1;
  if (s == "both") return Direction::Both;
  throw JsonFormatError("unknown direction '" + s + "'");
}

inline WindowMode mode_from_string(const std::string& s) {
  if (s == "precede") return WindowMode::Precede;
  if (s == "neighbor") return WindowMode::Neighbor;
  throw JsonFormatError("unknown window mode '" + s + "'");
}

inline InsertionalPolicy::Mode policy_mode_from_string(const std::string& s) {
  if (s == "exclude-return") return InsertionalPolicy::Mode::ExcludeReturn;
  if (s == "keep-all") return InsertionalPolicy::Mode::KeepAll;
  throw JsonFormatError("unknown insertional policy '" + s + "'");
}

}  // namespace detail

inline json to_json(const TestSpec& spec) {
  return json{{"shared_type", to_string(spec.shared_type)},
              {"direction", to_string(spec.direction)},
              {"mode", to_string(spec.mode)},
              {"distance", spec.distance},
              {"insertional_policy", to_string(spec.insertional_policy.mode)},
              {"insertional_skip_neutral", spec.insertional_policy.skip_neutral_in_match},
              {"skip_neutral_items", spec.skip_neutral_items}};
}

// Single-table record: the spec that produced the table plus its cells.
inline json table_record(const TestSpec& spec, const ContingencyTable& t) {
  return json{{"spec", to_json(spec)},
              {"a", t.a},
              {"b", t.b},
              {"c", t.c},
              {"d", t.d}};
}

inline json to_json(const TestResult& r) {
  return json{{"a", r.table.a},
              {"b", r.table.b},
              {"c", r.table.c},
              {"d", r.table.d},
              {"shared_rate", detail::opt_to_json(r.shared_rate)},
              {"nonshared_rate", detail::opt_to_json(r.nonshared_rate)},
              {"rsp", detail::opt_to_json(r.rsp)},
              {"p", r.p_value},
              {"log10_p", r.log10_p}};
}

inline json to_json(const GridResult& g) {
  json cells = json::array();
  for (const auto& c : g.cells) {
    json cell = to_json(c.result);
    cell["direction"] = to_string(c.direction);
    cell["mode"] = to_string(c.mode);
    cell["distance"] = c.distance;
    cell["significant"] = c.result.p_value < g.spec.alpha;
    cells.push_back(std::move(cell));
  }
  json modes = json::array(), directions = json::array();
  for (auto m : g.spec.modes) modes.push_back(to_string(m));
  for (auto d : g.spec.directions) directions.push_back(to_string(d));
  return json{{"corpus", g.corpus_label},
              {"pair", json{{"l1", g.pair.l1}, {"l2", g.pair.l2}, {"name", g.pair.name}}},
              {"shared_type", to_string(g.spec.shared_type)},
              {"insertional_policy", to_string(g.spec.insertional_policy.mode)},
              {"insertional_skip_neutral", g.spec.insertional_policy.skip_neutral_in_match},
              {"skip_neutral_items", g.spec.skip_neutral_items},
              {"alpha", g.spec.alpha},
              {"distances", g.spec.distances},
              {"modes", modes},
              {"directions", directions},
              {"degenerate", g.degenerate()},
              {"cells", std::move(cells)}};
}

inline GridResult grid_from_json(const json& j) {
  try {
    GridResult g;
    g.corpus_label = j.at("corpus").get<std::string>();
    g.pair.l1 = j.at("pair").at("l1").get<std::string>();
    g.pair.l2 = j.at("pair").at("l2").get<std::string>();
    g.pair.name = j.at("pair").at("name").get<std::string>();
    g.spec.shared_type =
        detail::shared_type_from_string(j.at("shared_type").get<std::string>());
    g.spec.insertional_policy.mode =
        detail::policy_mode_from_string(j.at("insertional_policy").get<std::string>());
    g.spec.insertional_policy.skip_neutral_in_match =
        j.at("insertional_skip_neutral").get<bool>();
    g.spec.skip_neutral_items = j.at("skip_neutral_items").get<bool>();
    g.spec.alpha = j.at("alpha").get<double>();
    g.spec.distances = j.at("distances").get<std::vector<int>>();
    g.spec.modes.clear();
    for (const auto& m : j.at("modes"))
      g.spec.modes.push_back(detail::mode_from_string(m.get<std::string>()));
    g.spec.directions.clear();
    for (const auto& d : j.at("directions"))
      g.spec.directions.push_back(detail::direction_from_string(d.get<std::string>()));
    for (const auto& cj : j.at("cells")) {
      GridCell cell;
      cell.direction = detail::direction_from_string(cj.at("direction").get<std::string>());
      cell.mode = detail::mode_from_string(cj.at("mode").get<std::string>());
      cell.distance = cj.at("distance").get<int>();
      cell.result.table.a = cj.at("a").get<std::uint64_t>();
      cell.result.table.b = cj.at("b").get<std::uint64_t>();
      cell.result.table.c = cj.at("c").get<std::uint64_t>();
      cell.result.table.d = cj.at("d").get<std::uint64_t>();
      cell.result.shared_rate = detail::opt_from_json(cj.at("shared_rate"));
      cell.result.nonshared_rate = detail::opt_from_json(cj.at("nonshared_rate"));
      cell.result.rsp = detail::opt_from_json(cj.at("rsp"));
      cell.result.p_value = cj.at("p").get<double>();
      cell.result.log10_p = cj.at("log10_p").get<double>();
      g.cells.push_back(std::move(cell));
    }
    return g;
  } catch (const json::exception& e) {
    throw JsonFormatError(std::string("grid result JSON: ") + e.what());
  }
}

inline GridResult grid_from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, true, /*ignore_comments=*/false);
  return grid_from_json(j);
}

inline json to_json(const HypothesisReport& rep) {
  json h1_cells = json::array();
  for (const auto& c : rep.h1.non_significant_cells)
    h1_cells.push_back(json{{"grid", c.grid_label},
                            {"shared_type", to_string(c.shared_type)},
                            {"direction", to_string(c.direction)},
                            {"mode", to_string(c.mode)},
                            {"distance", c.distance}});
  json h2_lines = json::array();
  for (const auto& l : rep.h2.lines)
    h2_lines.push_back(json{{"grid", l.grid_label},
                            {"shared_type", to_string(l.shared_type)},
                            {"direction", to_string(l.direction)},
                            {"mode", to_string(l.mode)},
                            {"non_increasing", l.non_increasing},
                            {"violating_distances", l.violating_distances},
                            {"undefined_distances", l.undefined_distances}});
  json h3_pairs = json::array();
  for (const auto& p : rep.h3.pairs)
    h3_pairs.push_back(json{{"grid", p.grid_label},
                            {"shared_type", to_string(p.shared_type)},
                            {"direction", to_string(p.direction)},
                            {"distance", p.distance},
                            {"precede_rsp", detail::opt_to_json(p.precede_rsp)},
                            {"neighbor_rsp", detail::opt_to_json(p.neighbor_rsp)},
                            {"skipped", p.skipped},
                            {"violation", p.violation}});
  json h4_rows = json::array();
  for (const auto& r : rep.h4.rows)
    h4_rows.push_back(json{{"grid", r.grid_label},
                           {"shared_type", to_string(r.shared_type)},
                           {"mode", to_string(r.mode)},
                           {"distance", r.distance},
                           {"rsp_to_origin", detail::opt_to_json(r.rsp_to_origin)},
                           {"rsp_from_origin", detail::opt_to_json(r.rsp_from_origin)}});
  return json{
      {"alpha", rep.alpha},
      {"h1",
       json{{"total_tests", rep.h1.total_tests},
            {"non_significant", rep.h1.non_significant},
            {"fraction", rep.h1.fraction},
            {"non_significant_cells", std::move(h1_cells)}}},
      {"h2",
       json{{"lines_total", rep.h2.lines_total},
            {"non_increasing", rep.h2.non_increasing},
            {"lines", std::move(h2_lines)}}},
      {"h3",
       json{{"pairs_total", rep.h3.pairs_total},
            {"points_total", rep.h3.points_total},
            {"violations", rep.h3.violations},
            {"skipped", rep.h3.skipped},
            {"pairs", std::move(h3_pairs)}}},
      {"h4", json{{"rows", std::move(h4_rows)}}}};
}

// Canonical dump: 2-space indent, sorted keys, trailing newline.
inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cstrig
