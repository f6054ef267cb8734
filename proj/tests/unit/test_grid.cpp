#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <optional>

#include "cstrig/grid.hpp"
#include "cstrig/json_io.hpp"
#include "cstrig/synthetic.hpp"

using namespace cstrig;

namespace {

const LanguagePair kEnEs{"en", "es", "EN-ES"};

// Hand-built grid: cell values supplied by a callback, margins faked so that
// rsp/p land exactly where the fixture wants them.
GridResult make_grid(
    const std::string& label, SharedType type,
    const std::function<std::pair<std::optional<double>, double>(
        Direction, WindowMode, int)>& cell_values) {
  GridResult g;
  g.corpus_label = label;
  g.pair = kEnEs;
  g.spec.shared_type = type;
  for (Direction d : g.spec.directions)
    for (WindowMode m : g.spec.modes)
      for (int dist : g.spec.distances) {
        GridCell cell;
        cell.direction = d;
        cell.mode = m;
        cell.distance = dist;
        auto [rsp, p] = cell_values(d, m, dist);
        cell.result.rsp = rsp;
        cell.result.p_value = p;
        cell.result.log10_p = p > 0 ? std::log10(p) : 0.0;
        cell.result.table = ContingencyTable{1, 1, 1, 1};
        g.cells.push_back(cell);
      }
  return g;
}

}  // namespace

TEST_CASE("run_grid fills every cell and matches the direct computation") {
  RandomCorpusParams params;
  params.utterances = 60;
  params.max_tokens = 30;
  const Corpus c = random_corpus(5, params);
  GridSpec spec;
  spec.shared_type = SharedType::AllShared;
  const GridResult g = run_grid(c, spec, "random");
  CHECK(g.cells.size() == 36);
  CHECK(g.corpus_label == "random");
  for (const auto& cell : g.cells) {
    TestSpec ts;
    ts.shared_type = spec.shared_type;
    ts.direction = cell.direction;
    ts.mode = cell.mode;
    ts.distance = cell.distance;
    const TestResult direct = evaluate_table(build_contingency(c, ts));
    CHECK(cell.result == direct);
  }
}

TEST_CASE("every line carries one value slot per distance") {
  RandomCorpusParams params;
  params.utterances = 20;
  const Corpus c = random_corpus(77, params);
  GridSpec spec;
  spec.distances = {1, 2, 4};
  const GridResult g = run_grid(c, spec);
  for (Direction d : g.spec.directions)
    for (WindowMode m : g.spec.modes)
      CHECK(g.rsp_line(d, m).size() == g.spec.distances.size());
}

TEST_CASE("grid runs are identical across job counts") {
  RandomCorpusParams params;
  params.utterances = 80;
  const Corpus c = random_corpus(9, params);
  GridSpec spec;
  const GridResult g1 = run_grid(c, spec, "r", 1);
  const GridResult g8 = run_grid(c, spec, "r", 8);
  CHECK(g1 == g8);
  CHECK(dump_json(to_json(g1)) == dump_json(to_json(g8)));
}

TEST_CASE("a grid over a corpus without the shared type is degenerate") {
  Corpus c;
  c.pair = kEnEs;
  Utterance u;
  u.id = "u0";
  for (int i = 0; i < 8; ++i)
    u.tokens.push_back(Token{"t" + std::to_string(i),
                             i % 3 == 0 ? Tag::lang("es") : Tag::lang("en")});
  c.utterances.push_back(u);
  GridSpec spec;
  spec.shared_type = SharedType::SharedOther;
  const GridResult g = run_grid(c, spec, "mono");
  CHECK(g.degenerate());
  for (const auto& cell : g.cells) {
    CHECK(cell.result.table.a == 0);
    CHECK(cell.result.table.c == 0);
    CHECK_FALSE(cell.result.rsp.has_value());
  }
}

TEST_CASE("shared margins are constant along every line") {
  RandomCorpusParams params;
  params.utterances = 50;
  const Corpus c = random_corpus(21, params);
  GridSpec spec;
  spec.shared_type = SharedType::SharedL2;
  const GridResult g = run_grid(c, spec);
  for (Direction d : spec.directions)
    for (WindowMode m : spec.modes) {
      std::optional<std::uint64_t> margin;
      for (int dist : spec.distances) {
        const GridCell* cell = g.find(d, m, dist);
        REQUIRE(cell != nullptr);
        const auto& t = cell->result.table;
        if (!margin) margin = t.a + t.c;
        CHECK(t.a + t.c == *margin);
      }
    }
}

TEST_CASE("distances are normalized to sorted unique values") {
  RandomCorpusParams params;
  params.utterances = 10;
  const Corpus c = random_corpus(2, params);
  GridSpec spec;
  spec.distances = {3, 1, 3, 2};
  const GridResult g = run_grid(c, spec);
  CHECK(g.spec.distances == std::vector<int>{1, 2, 3});
  CHECK(g.cells.size() == 3 * 2 * 3);
}

TEST_CASE("constant lines pass h2 and tied modes pass h3") {
  const GridResult g = make_grid("flat", SharedType::AllShared,
                                 [](Direction, WindowMode, int) {
                                   return std::pair<std::optional<double>, double>{
                                       1.5, 0.001};
                                 });
  const HypothesisReport rep = evaluate_hypotheses({g}, 0.05);
  CHECK(rep.h1.total_tests == 36);
  CHECK(rep.h1.non_significant == 0);
  CHECK(rep.h2.lines_total == 6);
  CHECK(rep.h2.non_increasing == 6);
  CHECK(rep.h3.pairs_total == 18);
  CHECK(rep.h3.points_total == 36);
  CHECK(rep.h3.violations == 0);
}

TEST_CASE("h1 counts non-significant cells across grids") {
  auto values = [](Direction d, WindowMode m, int dist) {
    const bool weak = d == Direction::Both && m == WindowMode::Neighbor && dist >= 5;
    return std::pair<std::optional<double>, double>{2.0, weak ? 0.2 : 0.001};
  };
  const GridResult g1 = make_grid("g1", SharedType::AllShared, values);
  const GridResult g2 = make_grid("g2", SharedType::SharedOther, values);
  const HypothesisReport rep = evaluate_hypotheses({g1, g2}, 0.05);
  CHECK(rep.h1.total_tests == 72);
  CHECK(rep.h1.non_significant == 4);  // distances 5 and 6, both grids
  CHECK_THAT(rep.h1.fraction, Catch::Matchers::WithinAbs(4.0 / 72.0, 1e-12));
  REQUIRE(rep.h1.non_significant_cells.size() == 4);
  CHECK(rep.h1.non_significant_cells[0].grid_label == "g1");
  CHECK(rep.h1.non_significant_cells[0].distance == 5);
  // boundary: p exactly at alpha counts as non-significant
  const GridResult g3 =
      make_grid("g3", SharedType::AllShared, [](Direction, WindowMode, int) {
        return std::pair<std::optional<double>, double>{1.0, 0.05};
      });
  CHECK(evaluate_hypotheses({g3}, 0.05).h1.non_significant == 36);
}

TEST_CASE("h2 flags exactly the inverted pair") {
  auto values = [](Direction d, WindowMode m, int dist) {
    double rsp = 3.0 - 0.3 * dist;
    if (d == Direction::Both && m == WindowMode::Precede && dist == 3)
      rsp = 5.0;  // spike: distance 3 violates against distance 2
    return std::pair<std::optional<double>, double>{rsp, 0.001};
  };
  const GridResult g = make_grid("spike", SharedType::AllShared, values);
  const HypothesisReport rep = evaluate_hypotheses({g}, 0.05);
  CHECK(rep.h2.non_increasing == 5);
  std::size_t flagged = 0;
  for (const auto& line : rep.h2.lines) {
    if (line.non_increasing) continue;
    ++flagged;
    CHECK(line.direction == Direction::Both);
    CHECK(line.mode == WindowMode::Precede);
    // the spike violates at distance 3, and the drop back at 4 is fine
    CHECK(line.violating_distances == std::vector<int>{3});
  }
  CHECK(flagged == 1);
}

TEST_CASE("undefined cells split lines into separately judged segments") {
  auto values = [](Direction d, WindowMode m,
                   int dist) -> std::pair<std::optional<double>, double> {
    if (d != Direction::L1ToL2 || m != WindowMode::Precede)
      return {2.0, 0.001};
    // line: 5, 4, gap, 3, 6, 2 -- rise inside the second segment only
    switch (dist) {
      case 1: return {5.0, 0.001};
      case 2: return {4.0, 0.001};
      case 3: return {std::nullopt, 0.001};
      case 4: return {3.0, 0.001};
      case 5: return {6.0, 0.001};
      default: return {2.0, 0.001};
    }
  };
  const GridResult g = make_grid("gaps", SharedType::AllShared, values);
  const HypothesisReport rep = evaluate_hypotheses({g}, 0.05);
  const H2Line* line = nullptr;
  for (const auto& l : rep.h2.lines)
    if (l.direction == Direction::L1ToL2 && l.mode == WindowMode::Precede) line = &l;
  REQUIRE(line != nullptr);
  CHECK(line->undefined_distances == std::vector<int>{3});
  CHECK(line->violating_distances == std::vector<int>{5});
  CHECK_FALSE(line->non_increasing);
  // 4 is not a violation against 2: the gap resets the comparison

  // h3 skips the pair with the undefined side and reports it
  CHECK(rep.h3.skipped == 1);
  CHECK(rep.h3.pairs_total == 17);
}

TEST_CASE("h3 counts point pairs where the dashed line crosses above") {
  auto values = [](Direction d, WindowMode m, int dist) {
    double rsp = 2.0;
    if (m == WindowMode::Neighbor) rsp = 1.5;           // normally below
    if (d == Direction::L2ToL1 && dist == 4 && m == WindowMode::Neighbor)
      rsp = 2.5;  // crosses above precede
    return std::pair<std::optional<double>, double>{rsp, 0.001};
  };
  const GridResult g = make_grid("cross", SharedType::AllShared, values);
  const HypothesisReport rep = evaluate_hypotheses({g}, 0.05);
  CHECK(rep.h3.pairs_total == 18);
  CHECK(rep.h3.violations == 1);
  std::size_t seen = 0;
  for (const auto& pr : rep.h3.pairs)
    if (pr.violation) {
      ++seen;
      CHECK(pr.direction == Direction::L2ToL1);
      CHECK(pr.distance == 4);
    }
  CHECK(seen == 1);
}

TEST_CASE("h4 tabulates directional propensities for language-specific types") {
  auto values = [](Direction d, WindowMode, int) {
    return std::pair<std::optional<double>, double>{
        d == Direction::L2ToL1 ? 3.0 : 2.0, 0.001};
  };
  const GridResult l1_grid = make_grid("g", SharedType::SharedL1, values);
  const GridResult other_grid = make_grid("g2", SharedType::SharedOther, values);
  const HypothesisReport rep = evaluate_hypotheses({l1_grid, other_grid}, 0.05);
  // only the shared-l1 grid contributes: 2 modes x 6 distances
  REQUIRE(rep.h4.rows.size() == 12);
  for (const auto& row : rep.h4.rows) {
    CHECK(row.shared_type == SharedType::SharedL1);
    // shared-l1 originates in l1, so "to origin" is l2 -> l1
    CHECK(row.rsp_to_origin == std::optional<double>{3.0});
    CHECK(row.rsp_from_origin == std::optional<double>{2.0});
  }
}

TEST_CASE("grid JSON round trips") {
  RandomCorpusParams params;
  params.utterances = 25;
  const Corpus c = random_corpus(31, params);
  GridSpec spec;
  spec.shared_type = SharedType::SharedL1;
  const GridResult g = run_grid(c, spec, "roundtrip");
  const std::string text = dump_json(to_json(g));
  const GridResult back = grid_from_json_text(text);
  CHECK(back == g);
  CHECK(dump_json(to_json(back)) == text);
}
