#pragma once

// Independent reference implementations used as test oracles. Everything here
// restates the definitions literally (quadratic scans, exact integer
// arithmetic) and deliberately shares no code with the library's
// implementation paths.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cstrig/association.hpp"
#include "cstrig/corpus.hpp"
#include "cstrig/switch_points.hpp"

namespace oracles {

using cstrig::ContingencyTable;
using cstrig::Corpus;
using cstrig::Direction;
using cstrig::InsertionalPolicy;
using cstrig::LanguagePair;
using cstrig::SharedType;
using cstrig::Tag;
using cstrig::TagKind;
using cstrig::TestSpec;
using cstrig::Utterance;
using cstrig::WindowMode;

struct OraclePoint {
  std::size_t position;
  std::string from;
  std::string to;
  std::size_t gap;
};

// Literal reading of the switch-point definition: for each token labeled with
// a pair language, scan backwards over tokens labeled with neither pair
// language; the token before that run must carry the other pair language.
inline std::vector<OraclePoint> detect_points(const Utterance& u,
                                              const LanguagePair& pair) {
  std::vector<OraclePoint> out;
  for (std::size_t p = 0; p < u.tokens.size(); ++p) {
    const Tag& tw = u.tokens[p].tag;
    if (tw.kind != TagKind::Lang || (tw.code != pair.l1 && tw.code != pair.l2))
      continue;
    std::size_t gap = 0;
    for (std::size_t q = p; q-- > 0;) {
      const Tag& tq = u.tokens[q].tag;
      const bool is_pair =
          tq.kind == TagKind::Lang && (tq.code == pair.l1 || tq.code == pair.l2);
      if (!is_pair) {
        ++gap;
        continue;
      }
      if (tq.code != tw.code) out.push_back({p, tq.code, tw.code, gap});
      break;
    }
  }
  return out;
}

// Insertional-return filter, restated: a point is dropped when its token is
// the third element of a (lang A, lang B, lang A) triple in the match
// sequence and the switch point on that triple's middle token survived.
inline std::vector<OraclePoint> filter_points(std::vector<OraclePoint> points,
                                              const Utterance& u,
                                              const InsertionalPolicy& policy) {
  if (policy.mode == InsertionalPolicy::Mode::KeepAll) return points;
  std::vector<std::size_t> seq;
  for (std::size_t p = 0; p < u.tokens.size(); ++p)
    if (!policy.skip_neutral_in_match || u.tokens[p].tag.kind != TagKind::Neutral)
      seq.push_back(p);
  std::vector<bool> dropped_at(u.tokens.size(), false);
  std::vector<OraclePoint> kept;
  for (const auto& pt : points) {
    std::size_t si = 0;
    while (seq[si] != pt.position) ++si;
    bool is_return = false;
    if (si >= 2) {
      const Tag& t1 = u.tokens[seq[si - 2]].tag;
      const Tag& t2 = u.tokens[seq[si - 1]].tag;
      is_return = t1.kind == TagKind::Lang && t2.kind == TagKind::Lang &&
                  t1.code == pt.to && t2.code == pt.from &&
                  !dropped_at[seq[si - 1]];
    }
    if (is_return)
      dropped_at[pt.position] = true;
    else
      kept.push_back(pt);
  }
  return kept;
}

struct OracleItem {
  std::size_t begin;
  std::size_t end;
  std::optional<std::string> origin;  // nullopt = shared-other
};

// Shared-item grouping, restated: split each maximal shared run at every
// change of language-specific origin; shared-other tokens stay with the
// segment they are in.
inline std::vector<OracleItem> group_items(const Utterance& u) {
  std::vector<OracleItem> items;
  std::size_t p = 0;
  const std::size_t n = u.tokens.size();
  while (p < n) {
    if (!u.tokens[p].tag.is_shared_kind()) {
      ++p;
      continue;
    }
    std::size_t run_end = p;
    while (run_end + 1 < n && u.tokens[run_end + 1].tag.is_shared_kind()) ++run_end;
    // split the run [p, run_end]
    std::size_t seg_start = p;
    std::optional<std::string> seg_origin;
    for (std::size_t q = p; q <= run_end; ++q) {
      const Tag& t = u.tokens[q].tag;
      if (t.kind != TagKind::Shared) continue;
      if (!seg_origin) {
        seg_origin = t.code;
      } else if (*seg_origin != t.code) {
        items.push_back({seg_start, q - 1, seg_origin});
        seg_start = q;
        seg_origin = t.code;
      }
    }
    items.push_back({seg_start, run_end, seg_origin});
    p = run_end + 1;
  }
  return items;
}

struct OracleOccurrence {
  std::size_t begin;
  std::size_t end;
  bool is_shared;
};

inline bool type_matches(SharedType type, const std::optional<std::string>& origin,
                         const LanguagePair& pair) {
  switch (type) {
    case SharedType::AllShared: return true;
    case SharedType::SharedOther: return !origin;
    case SharedType::SharedL1: return origin && *origin == pair.l1;
    case SharedType::SharedL2: return origin && *origin == pair.l2;
  }
  return false;
}

inline std::vector<OracleOccurrence> occurrences(const Utterance& u,
                                                 const TestSpec& spec,
                                                 const LanguagePair& pair) {
  std::vector<OracleOccurrence> out;
  const std::size_t n = u.tokens.size();
  if (n == 0) return out;
  std::vector<bool> in_item(n, false);
  const auto items = group_items(u);
  for (const auto& it : items)
    for (std::size_t q = it.begin; q <= it.end; ++q) in_item[q] = true;
  for (const auto& it : items)
    if (it.begin >= 1 && it.end <= n - 2)
      out.push_back({it.begin, it.end, type_matches(spec.shared_type, it.origin, pair)});
  for (std::size_t q = 1; q + 1 < n; ++q) {
    if (in_item[q]) continue;
    if (spec.skip_neutral_items && u.tokens[q].tag.kind == TagKind::Neutral) continue;
    out.push_back({q, q, false});
  }
  return out;
}

inline bool direction_ok(Direction d, const OraclePoint& pt, const LanguagePair& pair) {
  switch (d) {
    case Direction::Both: return true;
    case Direction::L1ToL2: return pt.from == pair.l1 && pt.to == pair.l2;
    case Direction::L2ToL1: return pt.from == pair.l2 && pt.to == pair.l1;
  }
  return false;
}

// Every (occurrence, point) pair tested independently.
inline ContingencyTable contingency(const Corpus& corpus, const TestSpec& spec) {
  ContingencyTable t;
  for (const auto& u : corpus.utterances) {
    const auto points =
        filter_points(detect_points(u, corpus.pair), u, spec.insertional_policy);
    for (const auto& occ : occurrences(u, spec, corpus.pair)) {
      bool near = false;
      for (const auto& pt : points) {
        if (!direction_ok(spec.direction, pt, corpus.pair)) continue;
        const auto dist = static_cast<std::size_t>(spec.distance);
        if (pt.position > occ.end && pt.position - occ.end <= dist) near = true;
        if (spec.mode == WindowMode::Neighbor && pt.position < occ.begin &&
            occ.begin - pt.position <= dist)
          near = true;
      }
      if (occ.is_shared)
        ++(near ? t.a : t.c);
      else
        ++(near ? t.b : t.d);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Exact small-table Fisher oracle: integer binomial weights, so "no more
// probable than observed" is an exact integer comparison. Usable to N ~ 60.

class BinomialTable {
public:
  explicit BinomialTable(std::size_t n) : n_(n), c_((n + 1) * (n + 1), 0) {
    for (std::size_t i = 0; i <= n; ++i) {
      at(i, 0) = 1;
      for (std::size_t j = 1; j <= i; ++j)
        at(i, j) = at(i - 1, j - 1) + (j <= i - 1 ? at(i - 1, j) : 0);
    }
  }
  std::uint64_t operator()(std::size_t i, std::size_t j) const {
    if (j > i) return 0;
    return c_[i * (n_ + 1) + j];
  }

private:
  std::uint64_t& at(std::size_t i, std::size_t j) { return c_[i * (n_ + 1) + j]; }
  std::size_t n_;
  std::vector<std::uint64_t> c_;
};

inline long double fisher_two_sided(const ContingencyTable& t) {
  const std::uint64_t row1 = t.a + t.b, col1 = t.a + t.c, n = t.n();
  const std::uint64_t row2 = t.c + t.d, col2 = t.b + t.d;
  if (n == 0 || row1 == 0 || col1 == 0 || row2 == 0 || col2 == 0) return 1.0L;
  if (n > 80) throw std::logic_error("fisher oracle is for small tables only");
  const BinomialTable C(n);
  auto weight = [&](std::uint64_t k) {
    return static_cast<unsigned __int128>(C(col1, k)) * C(col2, row1 - k);
  };
  const std::uint64_t lo = row1 + col1 > n ? row1 + col1 - n : 0;
  const std::uint64_t hi = row1 < col1 ? row1 : col1;
  const unsigned __int128 observed = weight(t.a);
  unsigned __int128 qualifying = 0, total = 0;
  for (std::uint64_t k = lo; k <= hi; ++k) {
    const unsigned __int128 w = weight(k);
    total += w;
    if (w <= observed) qualifying += w;
  }
  return static_cast<long double>(qualifying) / static_cast<long double>(total);
}

}  // namespace oracles
