// cstrig: code-switching trigger analysis over token-tagged bilingual
// corpora. Subcommands: validate, stats, switches, analyze, plot, hypotheses.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cstrig/corpus.hpp"
#include "cstrig/corpus_stats.hpp"
#include "cstrig/csv_io.hpp"
#include "cstrig/grid.hpp"
#include "cstrig/json_io.hpp"
#include "cstrig/svg_plot.hpp"
#include "cstrig/switch_points.hpp"

namespace {

using namespace cstrig;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FileError("cannot read file: " + path);
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write file: " + path);
  out << content;
  if (!out) throw FileError("cannot write file: " + path);
}

struct CorpusOptions {
  std::string path;
  std::string pair;
  std::string mapping;
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& opts) {
  cmd->add_option("corpus", opts.path, "canonical corpus file")->required();
  cmd->add_option("--pair", opts.pair,
                  "language pair `l1-l2`; overrides the file header");
  cmd->add_option("--mapping", opts.mapping,
                  "tag mapping file (`raw<TAB>tag` lines); default: tags are "
                  "already canonical");
}

Corpus load_corpus(const CorpusOptions& opts) {
  std::optional<LanguagePair> pair;
  if (!opts.pair.empty()) {
    pair = parse_language_pair(opts.pair);
    if (!pair) throw SchemaError("invalid --pair value '" + opts.pair + "'");
  }
  TagMapping mapping = TagMapping::canonical();
  if (!opts.mapping.empty()) {
    std::ifstream min(opts.mapping, std::ios::binary);
    if (!min) throw FileError("cannot read file: " + opts.mapping);
    mapping = TagMapping::parse(min);
  }
  std::istringstream in(read_file(opts.path));
  return parse_corpus_auto(in, mapping, pair);
}

std::string label_for(const std::string& explicit_label, const Corpus& corpus,
                      const std::string& path) {
  if (!explicit_label.empty()) return explicit_label;
  if (!corpus.source_label.empty()) return corpus.source_label;
  auto slash = path.find_last_of('/');
  std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = stem.find_last_of('.');
  if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return stem;
}

int default_jobs() {
  if (const char* env = std::getenv("CSTRIG_JOBS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

struct GridFlags {
  std::string shared_type = "all-shared";
  std::vector<std::string> directions;
  std::vector<std::string> modes;
  std::vector<int> distances;
  std::string policy = "exclude-return";
  bool insertional_skip_neutral = false;
  bool skip_neutral_items = false;
  double alpha = 0.05;
};

GridSpec grid_spec_from_flags(const GridFlags& f) {
  GridSpec spec;
  spec.shared_type = [&] {
    if (f.shared_type == "shared-l1") return SharedType::SharedL1;
    if (f.shared_type == "shared-l2") return SharedType::SharedL2;
    if (f.shared_type == "shared-other") return SharedType::SharedOther;
    if (f.shared_type == "all-shared") return SharedType::AllShared;
    throw CLI::ValidationError("--shared-type",
                               "expected shared-l1|shared-l2|shared-other|all-shared");
  }();
  if (!f.directions.empty()) {
    spec.directions.clear();
    for (const auto& d : f.directions) {
      if (d == "l1-to-l2") spec.directions.push_back(Direction::L1ToL2);
      else if (d == "l2-to-l1") spec.directions.push_back(Direction::L2ToL1);
      else if (d == "both") spec.directions.push_back(Direction::Both);
      else throw CLI::ValidationError("--directions",
                                      "expected l1-to-l2|l2-to-l1|both");
    }
  }
  if (!f.modes.empty()) {
    spec.modes.clear();
    for (const auto& m : f.modes) {
      if (m == "precede") spec.modes.push_back(WindowMode::Precede);
      else if (m == "neighbor") spec.modes.push_back(WindowMode::Neighbor);
      else throw CLI::ValidationError("--modes", "expected precede|neighbor");
    }
  }
  if (!f.distances.empty()) {
    for (int d : f.distances)
      if (d < 1) throw CLI::ValidationError("--distances", "distances start at 1");
    spec.distances = f.distances;
  }
  if (f.policy == "exclude-return")
    spec.insertional_policy.mode = InsertionalPolicy::Mode::ExcludeReturn;
  else if (f.policy == "keep-all")
    spec.insertional_policy.mode = InsertionalPolicy::Mode::KeepAll;
  else
    throw CLI::ValidationError("--policy", "expected exclude-return|keep-all");
  spec.insertional_policy.skip_neutral_in_match = f.insertional_skip_neutral;
  spec.skip_neutral_items = f.skip_neutral_items;
  spec.alpha = f.alpha;
  return spec;
}

int run(int argc, char** argv) {
  CLI::App app{"code-switching trigger analysis"};
  app.require_subcommand(1);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "check corpus invariants");
  CorpusOptions validate_opts;
  add_corpus_options(validate_cmd, validate_opts);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics table");
  CorpusOptions stats_opts;
  add_corpus_options(stats_cmd, stats_opts);
  std::string stats_policy = "exclude-return";
  stats_cmd->add_option("--policy", stats_policy,
                        "insertional policy: exclude-return|keep-all");

  // switches
  auto* switches_cmd = app.add_subcommand("switches", "dump switch points");
  CorpusOptions switches_opts;
  add_corpus_options(switches_cmd, switches_opts);
  bool switches_skip_neutral = false;
  switches_cmd->add_flag("--insertional-skip-neutral", switches_skip_neutral,
                         "skip neutral tokens when matching insertion triples");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "run the multi-test grid");
  CorpusOptions analyze_opts;
  add_corpus_options(analyze_cmd, analyze_opts);
  GridFlags flags;
  analyze_cmd->add_option("--shared-type", flags.shared_type,
                          "shared-l1|shared-l2|shared-other|all-shared")
      ->required();
  analyze_cmd->add_option("--directions", flags.directions,
                          "comma-separated: l1-to-l2,l2-to-l1,both")
      ->delimiter(',');
  analyze_cmd->add_option("--modes", flags.modes, "comma-separated: precede,neighbor")
      ->delimiter(',');
  analyze_cmd->add_option("--distances", flags.distances,
                          "comma-separated window distances (default 1,2,3,4,5,6)")
      ->delimiter(',');
  analyze_cmd->add_option("--policy", flags.policy,
                          "insertional policy: exclude-return|keep-all");
  analyze_cmd->add_flag("--insertional-skip-neutral", flags.insertional_skip_neutral,
                        "skip neutral tokens when matching insertion triples");
  analyze_cmd->add_flag("--skip-neutral-items", flags.skip_neutral_items,
                        "do not count neutral tokens as non-shared items");
  analyze_cmd->add_option("--alpha", flags.alpha, "significance threshold");
  int jobs = default_jobs();
  analyze_cmd->add_option("--jobs", jobs, "parallel workers (env CSTRIG_JOBS)");
  std::string analyze_label, analyze_json, analyze_csv;
  analyze_cmd->add_option("--label", analyze_label, "corpus label in the output");
  analyze_cmd->add_option("--json", analyze_json, "grid JSON output file ('-' = stdout)");
  analyze_cmd->add_option("--csv", analyze_csv, "grid CSV output file ('-' = stdout)");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "render a grid result as SVG");
  std::string plot_input, plot_output;
  PlotStyle style;
  plot_cmd->add_option("gridresult", plot_input, "grid result JSON file")->required();
  plot_cmd->add_option("-o,--output", plot_output, "SVG output file ('-' = stdout)");
  plot_cmd->add_flag("--log-y", style.log_y, "logarithmic Y axis");
  plot_cmd->add_option("--alpha", style.alpha, "significance threshold for markers");
  plot_cmd->add_option("--color-l1-to-l2", style.color_l1_to_l2, "series color");
  plot_cmd->add_option("--color-l2-to-l1", style.color_l2_to_l1, "series color");
  plot_cmd->add_option("--color-both", style.color_both, "series color");

  // hypotheses
  auto* hyp_cmd = app.add_subcommand("hypotheses", "aggregate hypothesis report");
  std::vector<std::string> hyp_inputs;
  std::string hyp_output;
  double hyp_alpha = 0.05;
  hyp_cmd->add_option("gridresults", hyp_inputs, "grid result JSON files")
      ->required()
      ->expected(-1);
  hyp_cmd->add_option("-o,--output", hyp_output, "report output file ('-' = stdout)");
  hyp_cmd->add_option("--alpha", hyp_alpha, "significance threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*validate_cmd) {
      const Corpus corpus = load_corpus(validate_opts);
      const ValidationReport report = validate_corpus(corpus);
      std::cout << "utterances\t" << corpus.utterances.size() << "\n";
      std::cout << "issues\t" << report.issues.size() << "\n";
      for (const auto& issue : report.issues)
        std::cout << "issue\t" << issue.code << "\t" << issue.utterance_id << "\t"
                  << issue.detail << "\n";
      return report.ok() ? 0 : 1;
    }

    if (*stats_cmd) {
      const Corpus corpus = load_corpus(stats_opts);
      InsertionalPolicy policy;
      if (stats_policy == "keep-all")
        policy.mode = InsertionalPolicy::Mode::KeepAll;
      else if (stats_policy != "exclude-return") {
        std::cerr << "error: --policy expects exclude-return|keep-all\n";
        return 2;
      }
      write_stats(corpus_stats(corpus, policy), corpus, std::cout);
      return 0;
    }

    if (*switches_cmd) {
      const Corpus corpus = load_corpus(switches_opts);
      InsertionalPolicy policy;
      policy.skip_neutral_in_match = switches_skip_neutral;
      for (const auto& u : corpus.utterances) {
        auto points =
            mark_insertional_returns(detect_switch_points(u, corpus.pair), u, policy);
        for (const auto& p : points)
          std::cout << p.utterance_id << "\t" << p.position << "\t" << p.from_lang
                    << "\t" << p.to_lang << "\t" << p.gap << "\t"
                    << (p.insertional_return ? "true" : "false") << "\n";
      }
      return 0;
    }

    if (*analyze_cmd) {
      const Corpus corpus = load_corpus(analyze_opts);
      const GridSpec spec = grid_spec_from_flags(flags);
      const std::string label = label_for(analyze_label, corpus, analyze_opts.path);
      const GridResult grid = run_grid(corpus, spec, label, jobs);
      if (!analyze_csv.empty()) write_output(analyze_csv, write_grid_csv(grid));
      if (!analyze_json.empty())
        write_output(analyze_json, dump_json(to_json(grid)));
      else if (analyze_csv.empty())
        write_output("-", dump_json(to_json(grid)));
      return 0;
    }

    if (*plot_cmd) {
      const GridResult grid = grid_from_json_text(read_file(plot_input));
      write_output(plot_output, render_multitest_svg(grid, style));
      return 0;
    }

    if (*hyp_cmd) {
      std::vector<GridResult> grids;
      for (const auto& path : hyp_inputs)
        grids.push_back(grid_from_json_text(read_file(path)));
      const HypothesisReport report = evaluate_hypotheses(grids, hyp_alpha);
      write_output(hyp_output, dump_json(to_json(report)));
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid grid result JSON: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
