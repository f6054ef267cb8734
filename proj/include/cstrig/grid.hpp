#pragma once

// Multi-test grids: one contingency table + exact test per
// (direction, mode, distance) cell, and the aggregate hypothesis checks over
// a collection of grids.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cstrig/association.hpp"
#include "cstrig/exact_stats.hpp"

namespace cstrig {

struct GridSpec {
  SharedType shared_type = SharedType::AllShared;
  std::vector<int> distances = {1, 2, 3, 4, 5, 6};
  std::vector<WindowMode> modes = {WindowMode::Precede, WindowMode::Neighbor};
  std::vector<Direction> directions = {Direction::L1ToL2, Direction::L2ToL1,
                                       Direction::Both};
  InsertionalPolicy insertional_policy{};
  bool skip_neutral_items = false;
  double alpha = 0.05;

  std::size_t cell_count() const {
    return distances.size() * modes.size() * directions.size();
  }
  bool operator==(const GridSpec&) const = default;
};

struct GridCell {
  Direction direction = Direction::Both;
  WindowMode mode = WindowMode::Precede;
  int distance = 1;
  TestResult result;

  bool operator==(const GridCell&) const = default;
};

struct GridResult {
  std::string corpus_label;
  LanguagePair pair;
  GridSpec spec;
  // direction-major, then mode, then ascending distance
  std::vector<GridCell> cells;

  const GridCell* find(Direction d, WindowMode m, int distance) const {
    for (const auto& c : cells)
      if (c.direction == d && c.mode == m && c.distance == distance) return &c;
    return nullptr;
  }

  // RSP series over the spec's distances; nullopt marks undefined cells.
  std::vector<std::optional<double>> rsp_line(Direction d, WindowMode m) const {
    std::vector<std::optional<double>> line;
    for (int dist : spec.distances) {
      const GridCell* c = find(d, m, dist);
      line.push_back(c ? c->result.rsp : std::nullopt);
    }
    return line;
  }

  // no shared occurrences of the grid's type anywhere
  bool degenerate() const {
    for (const auto& c : cells)
      if (c.result.table.a + c.result.table.c > 0) return false;
    return true;
  }

  bool operator==(const GridResult&) const = default;
};

// Runs every cell of the grid over one shared corpus index. Cells are
// independent; `jobs` > 1 fans them out over threads and the gathered result
// is identical regardless of scheduling.
inline GridResult run_grid(const Corpus& corpus, const GridSpec& spec,
                           std::string corpus_label = "", int jobs = 1) {
  GridSpec normalized = spec;
  std::sort(normalized.distances.begin(), normalized.distances.end());
  normalized.distances.erase(
      std::unique(normalized.distances.begin(), normalized.distances.end()),
      normalized.distances.end());

  GridResult grid;
  grid.corpus_label =
      corpus_label.empty() ? corpus.source_label : std::move(corpus_label);
  grid.pair = corpus.pair;
  grid.spec = normalized;

  const CorpusIndex index =
      index_corpus(corpus, normalized.insertional_policy, normalized.skip_neutral_items);

  std::vector<GridCell> cells;
  for (Direction d : normalized.directions)
    for (WindowMode m : normalized.modes)
      for (int dist : normalized.distances)
        cells.push_back(GridCell{d, m, dist, {}});

  // the Fisher cache is sized once here and shared read-only by all workers
  LogFactorialCache cache;
  cache.ensure(index.total_occurrences);

  auto run_cell = [&](GridCell& cell) {
    TestSpec ts;
    ts.shared_type = normalized.shared_type;
    ts.direction = cell.direction;
    ts.mode = cell.mode;
    ts.distance = cell.distance;
    ts.insertional_policy = normalized.insertional_policy;
    ts.skip_neutral_items = normalized.skip_neutral_items;
    cell.result = evaluate_table(build_contingency(index, ts), cache);
  };

  if (jobs <= 1 || cells.size() <= 1) {
    for (auto& cell : cells) run_cell(cell);
  } else {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), cells.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < cells.size(); i += workers) run_cell(cells[i]);
      });
    for (auto& th : pool) th.join();
  }
  grid.cells = std::move(cells);
  return grid;
}

// ---------------------------------------------------------------------------
// Aggregate hypothesis checks

struct CellRef {
  std::string grid_label;
  SharedType shared_type = SharedType::AllShared;
  Direction direction = Direction::Both;
  WindowMode mode = WindowMode::Precede;
  int distance = 1;
};

// H1: every test should be significant. Counts cells with p >= alpha.
struct H1Report {
  std::size_t total_tests = 0;
  std::size_t non_significant = 0;
  double fraction = 0.0;
  std::vector<CellRef> non_significant_cells;
};

// H2: each (direction, mode) line should be non-increasing with distance.
struct H2Line {
  std::string grid_label;
  SharedType shared_type = SharedType::AllShared;
  Direction direction = Direction::Both;
  WindowMode mode = WindowMode::Precede;
  bool non_increasing = true;
  std::vector<int> violating_distances;  // distance where RSP rose
  std::vector<int> undefined_distances;  // gaps: line is judged per segment
};

struct H2Report {
  std::size_t lines_total = 0;
  std::size_t non_increasing = 0;
  std::vector<H2Line> lines;
};

// H3: precede should dominate neighbor at the same (direction, distance).
struct H3Pair {
  std::string grid_label;
  SharedType shared_type = SharedType::AllShared;
  Direction direction = Direction::Both;
  int distance = 1;
  std::optional<double> precede_rsp;
  std::optional<double> neighbor_rsp;
  bool skipped = false;  // one side undefined
  bool violation = false;
};

struct H3Report {
  std::size_t pairs_total = 0;   // evaluated precede/neighbor pairs
  std::size_t points_total = 0;  // raw per-side count (2 per pair)
  std::size_t violations = 0;
  std::size_t skipped = 0;
  std::vector<H3Pair> pairs;
};

// H4: descriptive only. For language-specific shared types, RSP toward the
// item's origin language vs away from it, per (mode, distance).
struct H4Row {
  std::string grid_label;
  SharedType shared_type = SharedType::SharedL1;
  WindowMode mode = WindowMode::Precede;
  int distance = 1;
  std::optional<double> rsp_to_origin;
  std::optional<double> rsp_from_origin;
};

struct H4Report {
  std::vector<H4Row> rows;
};

struct HypothesisReport {
  double alpha = 0.05;
  H1Report h1;
  H2Report h2;
  H3Report h3;
  H4Report h4;
};

// Tolerance for H2 monotonicity: next <= prev * (1 + tau). Ties comply, for
// both H2 and H3.
inline constexpr double kMonotoneSlack = 1e-9;

inline HypothesisReport evaluate_hypotheses(const std::vector<GridResult>& grids,
                                            double alpha = 0.05) {
  HypothesisReport rep;
  rep.alpha = alpha;

  for (const auto& g : grids) {
    const std::string& label = g.corpus_label;
    const SharedType st = g.spec.shared_type;

    for (const auto& cell : g.cells) {
      ++rep.h1.total_tests;
      if (cell.result.p_value >= alpha) {
        ++rep.h1.non_significant;
        rep.h1.non_significant_cells.push_back(
            CellRef{label, st, cell.direction, cell.mode, cell.distance});
      }
    }

    for (Direction d : g.spec.directions) {
      for (WindowMode m : g.spec.modes) {
        H2Line line{label, st, d, m, true, {}, {}};
        std::optional<double> prev;
        for (int dist : g.spec.distances) {
          const GridCell* cell = g.find(d, m, dist);
          const auto rsp = cell ? cell->result.rsp : std::nullopt;
          if (!rsp) {
            line.undefined_distances.push_back(dist);
            prev.reset();  // segment break
            continue;
          }
          if (prev && *rsp > *prev * (1.0 + kMonotoneSlack))
            line.violating_distances.push_back(dist);
          prev = rsp;
        }
        line.non_increasing = line.violating_distances.empty();
        ++rep.h2.lines_total;
        if (line.non_increasing) ++rep.h2.non_increasing;
        rep.h2.lines.push_back(std::move(line));
      }

      const bool has_both_modes =
          std::find(g.spec.modes.begin(), g.spec.modes.end(), WindowMode::Precede) !=
              g.spec.modes.end() &&
          std::find(g.spec.modes.begin(), g.spec.modes.end(), WindowMode::Neighbor) !=
              g.spec.modes.end();
      if (has_both_modes) {
        for (int dist : g.spec.distances) {
          H3Pair pair{label, st, d, dist, {}, {}, false, false};
          const GridCell* pc = g.find(d, WindowMode::Precede, dist);
          const GridCell* nc = g.find(d, WindowMode::Neighbor, dist);
          pair.precede_rsp = pc ? pc->result.rsp : std::nullopt;
          pair.neighbor_rsp = nc ? nc->result.rsp : std::nullopt;
          if (!pair.precede_rsp || !pair.neighbor_rsp) {
            pair.skipped = true;
            ++rep.h3.skipped;
          } else {
            ++rep.h3.pairs_total;
            rep.h3.points_total += 2;
            pair.violation = *pair.precede_rsp < *pair.neighbor_rsp;
            if (pair.violation) ++rep.h3.violations;
          }
          rep.h3.pairs.push_back(std::move(pair));
        }
      }
    }

    if (st == SharedType::SharedL1 || st == SharedType::SharedL2) {
      // shared-L1 items originate in l1: "to origin" is l2 -> l1
      const Direction to_origin =
          st == SharedType::SharedL1 ? Direction::L2ToL1 : Direction::L1ToL2;
      const Direction from_origin =
          st == SharedType::SharedL1 ? Direction::L1ToL2 : Direction::L2ToL1;
      const bool has_dirs =
          std::find(g.spec.directions.begin(), g.spec.directions.end(), to_origin) !=
              g.spec.directions.end() &&
          std::find(g.spec.directions.begin(), g.spec.directions.end(), from_origin) !=
              g.spec.directions.end();
      if (has_dirs) {
        for (WindowMode m : g.spec.modes) {
          for (int dist : g.spec.distances) {
            H4Row row{label, st, m, dist, {}, {}};
            const GridCell* tc = g.find(to_origin, m, dist);
            const GridCell* fc = g.find(from_origin, m, dist);
            row.rsp_to_origin = tc ? tc->result.rsp : std::nullopt;
            row.rsp_from_origin = fc ? fc->result.rsp : std::nullopt;
            rep.h4.rows.push_back(std::move(row));
          }
        }
      }
    }
  }

  rep.h1.fraction = rep.h1.total_tests == 0
                        ? 0.0
                        : static_cast<double>(rep.h1.non_significant) /
                              static_cast<double>(rep.h1.total_tests);
  return rep;
}

}  // namespace cstrig
