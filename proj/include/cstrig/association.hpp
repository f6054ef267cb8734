#pragma once

// Windowed co-occurrence counting between item occurrences and switch
// points, producing the 2x2 contingency table for one test specification.
//
// Occurrences are grouped shared items (counted once regardless of width)
// plus every remaining token as its own non-shared occurrence; anything
// overlapping the first or last position of its utterance is dropped. The
// window looks `distance` tokens past the item's end, and in neighbor mode
// also `distance` tokens before its start. An adjacent switch has distance 1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cstrig/corpus.hpp"
#include "cstrig/switch_points.hpp"

namespace cstrig {

enum class SharedType { SharedL1, SharedL2, SharedOther, AllShared };
enum class Direction { L1ToL2, L2ToL1, Both };
enum class WindowMode { Precede, Neighbor };

inline bool matches(SharedType type, SharedClass cls) {
  switch (type) {
    case SharedType::SharedL1: return cls == SharedClass::L1;
    case SharedType::SharedL2: return cls == SharedClass::L2;
    case SharedType::SharedOther: return cls == SharedClass::Other;
    case SharedType::AllShared: return true;
  }
  return false;
}

struct TestSpec {
  SharedType shared_type = SharedType::AllShared;
  Direction direction = Direction::Both;
  WindowMode mode = WindowMode::Precede;
  int distance = 1;
  InsertionalPolicy insertional_policy{};
  // Sensitivity option: neutral tokens stay in the window arithmetic but are
  // not emitted as non-shared occurrences.
  bool skip_neutral_items = false;

  bool operator==(const TestSpec&) const = default;
};

struct ItemOccurrence {
  std::string utterance_id;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool is_shared = false;

  bool operator==(const ItemOccurrence&) const = default;
};

struct ContingencyTable {
  std::uint64_t a = 0;  // shared, near CS
  std::uint64_t b = 0;  // non-shared, near CS
  std::uint64_t c = 0;  // shared, no near CS
  std::uint64_t d = 0;  // non-shared, no near CS

  std::uint64_t n() const { return a + b + c + d; }
  bool operator==(const ContingencyTable&) const = default;
};

namespace detail {

struct CompactPoint {
  std::uint32_t position;
  bool to_l2;
};

enum class OccClass : std::uint8_t { NonShared, SharedL1, SharedL2, SharedOther };

struct OccRecord {
  std::uint32_t begin;
  std::uint32_t end;
  OccClass cls;
};

inline std::vector<OccRecord> enumerate_occurrences(const Utterance& u,
                                                    const LanguagePair& pair,
                                                    bool skip_neutral_items) {
  std::vector<OccRecord> occs;
  if (u.tokens.size() < 3) return occs;  // every token is first or last
  const std::size_t last = u.tokens.size() - 1;
  const auto items = group_shared_items(u);
  std::vector<bool> covered(u.tokens.size(), false);
  for (const auto& it : items)
    for (std::size_t p = it.begin; p <= it.end; ++p) covered[p] = true;

  std::size_t next_item = 0;
  for (std::size_t p = 0; p < u.tokens.size(); ++p) {
    if (next_item < items.size() && items[next_item].begin == p) {
      const auto& it = items[next_item++];
      if (it.begin > 0 && it.end < last) {
        OccClass cls;
        switch (shared_class(it, pair)) {
          case SharedClass::L1: cls = OccClass::SharedL1; break;
          case SharedClass::L2: cls = OccClass::SharedL2; break;
          default: cls = OccClass::SharedOther; break;
        }
        occs.push_back({static_cast<std::uint32_t>(it.begin),
                        static_cast<std::uint32_t>(it.end), cls});
      }
      continue;
    }
    if (covered[p] || p == 0 || p == last) continue;
    if (skip_neutral_items && u.tokens[p].tag.kind == TagKind::Neutral) continue;
    occs.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(p),
                    OccClass::NonShared});
  }
  return occs;
}

}  // namespace detail

inline bool matches(SharedType type, detail::OccClass cls) {
  switch (cls) {
    case detail::OccClass::NonShared: return false;
    case detail::OccClass::SharedL1: return matches(type, SharedClass::L1);
    case detail::OccClass::SharedL2: return matches(type, SharedClass::L2);
    case detail::OccClass::SharedOther: return matches(type, SharedClass::Other);
  }
  return false;
}

// One occurrence per grouped shared item, one per remaining token, in
// position order; anything overlapping position 0 or the last position is
// omitted. Items of a non-matching shared subclass are emitted as non-shared
// occurrences.
inline std::vector<ItemOccurrence> enumerate_items(const Utterance& u,
                                                   const TestSpec& spec,
                                                   const LanguagePair& pair) {
  std::vector<ItemOccurrence> occs;
  for (const auto& rec :
       detail::enumerate_occurrences(u, pair, spec.skip_neutral_items))
    occs.push_back(
        ItemOccurrence{u.id, rec.begin, rec.end, matches(spec.shared_type, rec.cls)});
  return occs;
}

namespace detail {

inline bool direction_admits(Direction d, bool to_l2) {
  return d == Direction::Both || (d == Direction::L1ToL2) == to_l2;
}

inline bool window_hit(std::size_t begin, std::size_t end,
                       std::span<const CompactPoint> points, Direction direction,
                       WindowMode mode, int distance) {
  for (const auto& pt : points) {
    if (!direction_admits(direction, pt.to_l2)) continue;
    const std::size_t p = pt.position;
    if (p > end && p - end <= static_cast<std::size_t>(distance)) return true;
    if (mode == WindowMode::Neighbor && p < begin &&
        begin - p <= static_cast<std::size_t>(distance))
      return true;
  }
  return false;
}

}  // namespace detail

// True iff some switch point of the matching direction lies within
// `spec.distance` past the item's end, or (neighbor mode) within
// `spec.distance` before its start. `points` must be the filtered points of
// the item's utterance.
inline bool near_switch(const ItemOccurrence& item,
                        const std::vector<SwitchPoint>& points, const TestSpec& spec,
                        const LanguagePair& pair) {
  std::vector<detail::CompactPoint> compact;
  compact.reserve(points.size());
  for (const auto& p : points)
    compact.push_back({static_cast<std::uint32_t>(p.position), p.to_lang == pair.l2});
  return detail::window_hit(item.begin, item.end, compact, spec.direction, spec.mode,
                            spec.distance);
}

// Per-utterance occurrence/point index, reusable across the cells of a test
// grid (everything here depends only on the insertional policy and the
// neutral-item option, not on shared type, direction, mode or distance).
struct UtteranceIndex {
  std::vector<detail::OccRecord> occurrences;
  std::vector<detail::CompactPoint> points;
};

struct CorpusIndex {
  InsertionalPolicy policy;
  bool skip_neutral_items = false;
  std::vector<UtteranceIndex> utterances;
  std::uint64_t total_occurrences = 0;
};

inline CorpusIndex index_corpus(const Corpus& corpus, const InsertionalPolicy& policy,
                                bool skip_neutral_items = false) {
  CorpusIndex idx;
  idx.policy = policy;
  idx.skip_neutral_items = skip_neutral_items;
  idx.utterances.reserve(corpus.utterances.size());
  for (const auto& u : corpus.utterances) {
    UtteranceIndex ui;
    ui.occurrences = detail::enumerate_occurrences(u, corpus.pair, skip_neutral_items);
    for (const auto& p : switch_points(u, corpus.pair, policy))
      ui.points.push_back(
          {static_cast<std::uint32_t>(p.position), p.to_lang == corpus.pair.l2});
    idx.total_occurrences += ui.occurrences.size();
    idx.utterances.push_back(std::move(ui));
  }
  return idx;
}

// Counts one cell of the grid from a prebuilt index. The index must have been
// built with the spec's insertional policy and neutral-item option.
inline ContingencyTable build_contingency(const CorpusIndex& idx, const TestSpec& spec) {
  ContingencyTable t;
  for (const auto& ui : idx.utterances) {
    for (const auto& occ : ui.occurrences) {
      const bool shared = matches(spec.shared_type, occ.cls);
      const bool near = detail::window_hit(occ.begin, occ.end, ui.points,
                                           spec.direction, spec.mode, spec.distance);
      if (shared)
        ++(near ? t.a : t.c);
      else
        ++(near ? t.b : t.d);
    }
  }
  return t;
}

inline ContingencyTable build_contingency(const Corpus& corpus, const TestSpec& spec) {
  return build_contingency(
      index_corpus(corpus, spec.insertional_policy, spec.skip_neutral_items), spec);
}

// Tab-separated cell dump: `a<TAB>b<TAB>c<TAB>d`.
inline std::string to_string(const ContingencyTable& t) {
  return std::to_string(t.a) + "\t" + std::to_string(t.b) + "\t" +
         std::to_string(t.c) + "\t" + std::to_string(t.d);
}

inline std::string to_string(SharedType t) {
  switch (t) {
    case SharedType::SharedL1: return "shared-l1";
    case SharedType::SharedL2: return "shared-l2";
    case SharedType::SharedOther: return "shared-other";
    case SharedType::AllShared: return "all-shared";
  }
  return "all-shared";
}

inline std::string to_string(Direction d) {
  switch (d) {
    case Direction::L1ToL2: return "l1-to-l2";
    case Direction::L2ToL1: return "l2-to-l1";
    case Direction::Both: return "both";
  }
  return "both";
}

inline std::string to_string(WindowMode m) {
  return m == WindowMode::Precede ? "precede" : "neighbor";
}

inline std::string to_string(InsertionalPolicy::Mode m) {
  return m == InsertionalPolicy::Mode::ExcludeReturn ? "exclude-return" : "keep-all";
}

}  // namespace cstrig
