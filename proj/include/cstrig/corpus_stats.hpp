#pragma once

// Corpus-level statistics: token counts per language, shared-item counts per
// subclass (a multi-word item counts once), and switch totals per direction
// after insertional filtering.

#include <cstddef>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cstrig/corpus.hpp"
#include "cstrig/format.hpp"
#include "cstrig/switch_points.hpp"

namespace cstrig {

struct StatsTable {
  std::size_t utterances = 0;
  std::size_t tokens_total = 0;
  // l1 and l2 first, then any third language, code-sorted
  std::vector<std::pair<std::string, std::size_t>> lang_tokens;
  std::size_t shared_tokens_l1 = 0;
  std::size_t shared_tokens_l2 = 0;
  std::size_t shared_tokens_other = 0;
  std::size_t shared_items_l1 = 0;
  std::size_t shared_items_l2 = 0;
  std::size_t shared_items_other = 0;
  std::size_t mix_tokens = 0;
  std::size_t neutral_tokens = 0;
  std::size_t cs_l1_to_l2 = 0;
  std::size_t cs_l2_to_l1 = 0;

  std::size_t cs_total() const { return cs_l1_to_l2 + cs_l2_to_l1; }
  std::size_t shared_tokens_total() const {
    return shared_tokens_l1 + shared_tokens_l2 + shared_tokens_other;
  }
};

inline StatsTable corpus_stats(const Corpus& c, const InsertionalPolicy& policy = {}) {
  StatsTable s;
  s.utterances = c.utterances.size();
  std::map<std::string, std::size_t> langs;
  langs[c.pair.l1] = 0;
  langs[c.pair.l2] = 0;
  for (const auto& u : c.utterances) {
    s.tokens_total += u.tokens.size();
    for (const auto& t : u.tokens) {
      switch (t.tag.kind) {
        case TagKind::Lang: ++langs[t.tag.code]; break;
        case TagKind::Shared:
          ++(t.tag.code == c.pair.l1 ? s.shared_tokens_l1 : s.shared_tokens_l2);
          break;
        case TagKind::SharedOther: ++s.shared_tokens_other; break;
        case TagKind::Mix: ++s.mix_tokens; break;
        case TagKind::Neutral: ++s.neutral_tokens; break;
      }
    }
    for (const auto& item : group_shared_items(u)) {
      switch (shared_class(item, c.pair)) {
        case SharedClass::L1: ++s.shared_items_l1; break;
        case SharedClass::L2: ++s.shared_items_l2; break;
        case SharedClass::Other: ++s.shared_items_other; break;
      }
    }
    for (const auto& p : switch_points(u, c.pair, policy))
      ++(p.to_lang == c.pair.l2 ? s.cs_l1_to_l2 : s.cs_l2_to_l1);
  }
  s.lang_tokens.emplace_back(c.pair.l1, langs.at(c.pair.l1));
  s.lang_tokens.emplace_back(c.pair.l2, langs.at(c.pair.l2));
  for (const auto& [code, n] : langs)
    if (code != c.pair.l1 && code != c.pair.l2) s.lang_tokens.emplace_back(code, n);
  return s;
}

namespace detail {

inline std::string upper(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace detail

// Text report: one `name<TAB>count[<TAB>percent]` row per statistic.
// Language and shared rows carry percentages of the token total, direction
// rows of the switch total.
inline void write_stats(const StatsTable& s, const Corpus& c, std::ostream& out) {
  auto pct = [](std::size_t part, std::size_t whole) {
    return whole == 0 ? std::string() : "\t" + fmt_fixed(100.0 * part / whole, 1);
  };
  if (!c.source_label.empty()) out << "# source = " << c.source_label << "\n";
  out << "# pair = " << c.pair.l1 << "-" << c.pair.l2 << "\n";
  out << "Utterances\t" << s.utterances << "\n";
  out << "Tokens (total)\t" << s.tokens_total << "\n";
  for (const auto& [code, n] : s.lang_tokens)
    out << detail::upper(code) << "\t" << n << pct(n, s.tokens_total) << "\n";
  out << "Shared-" << detail::upper(c.pair.l1) << "\t" << s.shared_items_l1
      << pct(s.shared_items_l1, s.tokens_total) << "\n";
  out << "Shared-" << detail::upper(c.pair.l2) << "\t" << s.shared_items_l2
      << pct(s.shared_items_l2, s.tokens_total) << "\n";
  out << "Shared-Other\t" << s.shared_items_other
      << pct(s.shared_items_other, s.tokens_total) << "\n";
  out << "MIX\t" << s.mix_tokens << pct(s.mix_tokens, s.tokens_total) << "\n";
  out << "Neutral\t" << s.neutral_tokens << pct(s.neutral_tokens, s.tokens_total)
      << "\n";
  out << "CS (total)\t" << s.cs_total() << "\n";
  out << detail::upper(c.pair.l1) << "->" << detail::upper(c.pair.l2) << "\t"
      << s.cs_l1_to_l2 << pct(s.cs_l1_to_l2, s.cs_total()) << "\n";
  out << detail::upper(c.pair.l2) << "->" << detail::upper(c.pair.l1) << "\t"
      << s.cs_l2_to_l1 << pct(s.cs_l2_to_l1, s.cs_total()) << "\n";
}

inline std::string write_stats(const StatsTable& s, const Corpus& c) {
  std::ostringstream out;
  write_stats(s, c, out);
  return out.str();
}

}  // namespace cstrig
