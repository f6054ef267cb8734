#pragma once

// Code-switch point detection over tagged utterances.
//
// A token at position p is a switch point from A to B when it is tagged
// lang(B), the nearest preceding pair-language token in the same utterance is
// tagged lang(A), and {A, B} is the corpus language pair. Everything between
// the two (shared items, mix, neutral and third-language tokens) forms the
// gap. Detection never crosses utterance boundaries.
//
// The return leg of a one-token insertion (a literal lang(A) lang(B) lang(A)
// token triple) is excluded under the default policy.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cstrig/corpus.hpp"

namespace cstrig {

// A maximal grouped run of shared-tagged tokens. `origin` is the language
// code the item originates in; nullopt for shared-other items.
struct SharedItem {
  std::string utterance_id;
  std::size_t begin = 0;  // token index, inclusive
  std::size_t end = 0;    // token index, inclusive
  std::optional<std::string> origin;

  std::size_t width() const { return end - begin + 1; }
  bool operator==(const SharedItem&) const = default;
};

enum class SharedClass { L1, L2, Other };

inline SharedClass shared_class(const SharedItem& item, const LanguagePair& pair) {
  if (!item.origin) return SharedClass::Other;
  return *item.origin == pair.l1 ? SharedClass::L1 : SharedClass::L2;
}

struct SwitchPoint {
  std::string utterance_id;
  std::size_t position = 0;
  std::string from_lang;
  std::string to_lang;
  std::size_t gap = 0;  // intervening non-pair tokens
  bool insertional_return = false;

  bool operator==(const SwitchPoint&) const = default;
};

struct InsertionalPolicy {
  enum class Mode { ExcludeReturn, KeepAll };
  Mode mode = Mode::ExcludeReturn;
  // Match the insertion triple on the utterance with neutral tokens removed
  // instead of on literally adjacent tokens. Off by default.
  bool skip_neutral_in_match = false;

  bool operator==(const InsertionalPolicy&) const = default;
};

// Groups consecutive shared-tagged tokens into maximal items. A run merges
// while it contains at most one language-specific origin; shared-other
// tokens join the current item and inherit its origin. A second distinct
// origin starts a new item, so a run like shared-es shared-en splits into
// two single-token items while shared-ar shared:other stays one shared-ar
// item.
inline std::vector<SharedItem> group_shared_items(const Utterance& u) {
  std::vector<SharedItem> items;
  bool open = false;
  SharedItem cur;
  auto close = [&]() {
    if (open) items.push_back(cur);
    open = false;
  };
  for (std::size_t p = 0; p < u.tokens.size(); ++p) {
    const Tag& tag = u.tokens[p].tag;
    if (!tag.is_shared_kind()) {
      close();
      continue;
    }
    std::optional<std::string> origin;
    if (tag.kind == TagKind::Shared) origin = tag.code;
    if (open && (!origin || !cur.origin || *origin == *cur.origin)) {
      cur.end = p;
      if (!cur.origin) cur.origin = origin;
    } else {
      close();
      cur = SharedItem{u.id, p, p, origin};
      open = true;
    }
  }
  close();
  return items;
}

// All switch points of one utterance, in position order.
inline std::vector<SwitchPoint> detect_switch_points(const Utterance& u,
                                                     const LanguagePair& pair) {
  std::vector<SwitchPoint> points;
  std::optional<std::size_t> last_pair_pos;
  for (std::size_t p = 0; p < u.tokens.size(); ++p) {
    const Tag& tag = u.tokens[p].tag;
    if (!tag.is_pair_lang(pair)) continue;
    if (last_pair_pos) {
      const std::string& prev = u.tokens[*last_pair_pos].tag.code;
      if (prev != tag.code)
        points.push_back(SwitchPoint{u.id, p, prev, tag.code,
                                     p - *last_pair_pos - 1, false});
    }
    last_pair_pos = p;
  }
  return points;
}

namespace detail {

// Positions whose tags participate in insertion-triple matching.
inline std::vector<std::size_t> match_positions(const Utterance& u,
                                                bool skip_neutral) {
  std::vector<std::size_t> pos;
  pos.reserve(u.tokens.size());
  for (std::size_t p = 0; p < u.tokens.size(); ++p) {
    if (skip_neutral && u.tokens[p].tag.kind == TagKind::Neutral) continue;
    pos.push_back(p);
  }
  return pos;
}

}  // namespace detail

// Sets `insertional_return` on the w3 point of each lang(A) lang(B) lang(A)
// triple. Matching is on literally adjacent tokens unless the policy skips
// neutral ones. The w2 of a triple is itself a switch point; a removal is
// licensed only by a w2 point that survives, so removals never chain and at
// most every other point is excluded.
inline std::vector<SwitchPoint> mark_insertional_returns(
    std::vector<SwitchPoint> points, const Utterance& u,
    const InsertionalPolicy& policy = {}) {
  const auto pos = detail::match_positions(u, policy.skip_neutral_in_match);
  // index of each position within the match sequence
  std::vector<std::size_t> index(u.tokens.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < pos.size(); ++i) index[pos[i]] = i;
  for (std::size_t n = 0; n < points.size(); ++n) {
    auto& pt = points[n];
    std::size_t i = index[pt.position];
    if (i == static_cast<std::size_t>(-1) || i < 2) continue;
    const Tag& w1 = u.tokens[pos[i - 2]].tag;
    const Tag& w2 = u.tokens[pos[i - 1]].tag;
    const Tag& w3 = u.tokens[pt.position].tag;
    if (!(w1.kind == TagKind::Lang && w2.kind == TagKind::Lang && w1 == w3 &&
          w2.code != w1.code))
      continue;
    if (n > 0 && points[n - 1].position == pos[i - 1] &&
        !points[n - 1].insertional_return)
      pt.insertional_return = true;
  }
  return points;
}

// Applies the insertional policy to detected points. Under exclude-return the
// w3 of each insertion triple is dropped; under keep-all the list is returned
// unchanged.
inline std::vector<SwitchPoint> filter_insertional(
    std::vector<SwitchPoint> points, const Utterance& u,
    const InsertionalPolicy& policy = {}) {
  if (policy.mode == InsertionalPolicy::Mode::KeepAll) return points;
  points = mark_insertional_returns(std::move(points), u, policy);
  std::erase_if(points, [](const SwitchPoint& p) { return p.insertional_return; });
  return points;
}

// Convenience: detect + filter in one call.
inline std::vector<SwitchPoint> switch_points(const Utterance& u,
                                              const LanguagePair& pair,
                                              const InsertionalPolicy& policy = {}) {
  return filter_insertional(detect_switch_points(u, pair), u, policy);
}

}  // namespace cstrig
