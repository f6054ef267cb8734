// End-to-end walkthrough of the library API: build a tiny corpus, detect its
// switch points, run one grid, and print the CSV alongside a rendered plot.
//
//   ./build/samples/demo_analysis > grid.csv
//   (the SVG is written next to the working directory as demo_grid.svg)

#include <fstream>
#include <iostream>

#include "cstrig/corpus.hpp"
#include "cstrig/corpus_stats.hpp"
#include "cstrig/csv_io.hpp"
#include "cstrig/grid.hpp"
#include "cstrig/svg_plot.hpp"
#include "cstrig/switch_points.hpp"
#include "cstrig/synthetic.hpp"

int main() {
  using namespace cstrig;

  // a handful of utterances, written inline in the canonical format
  const std::string text =
      "# pair = en-es\n"
      "# source = demo\n"
      "# id = d0\n"
      "you\tlang:en\n"
      "know\tlang:en\n"
      "taco\tshared:es\n"
      "es\tlang:es\n"
      "bueno\tlang:es\n"
      "\n"
      "# id = d1\n"
      "pero\tlang:es\n"
      "twitter\tshared:en\n"
      "is\tlang:en\n"
      "down\tlang:en\n"
      "otra\tlang:es\n"
      "vez\tlang:es\n"
      "\n";
  std::istringstream in(text);
  const Corpus small = parse_corpus_auto(in);

  std::cerr << "-- corpus stats --\n" << write_stats(corpus_stats(small), small);
  for (const auto& u : small.utterances)
    for (const auto& p : switch_points(u, small.pair))
      std::cerr << "switch in " << p.utterance_id << " at " << p.position << ": "
                << p.from_lang << "->" << p.to_lang << " (gap " << p.gap << ")\n";

  // a larger synthetic corpus gives the grid something to measure
  PlantedTriggerParams params;
  params.utterances = 20000;
  const Corpus big = planted_trigger_corpus(7, params);
  GridSpec spec;
  spec.shared_type = SharedType::AllShared;
  const GridResult grid = run_grid(big, spec, "demo-synthetic", 4);

  write_grid_csv(grid, std::cout);

  std::ofstream svg("demo_grid.svg", std::ios::binary);
  svg << render_multitest_svg(grid);
  std::cerr << "wrote demo_grid.svg\n";
  return 0;
}
