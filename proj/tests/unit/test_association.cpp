#include <catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <optional>

#include "cstrig/association.hpp"
#include "cstrig/synthetic.hpp"
#include "oracles/oracles.hpp"

using namespace cstrig;

namespace {

const LanguagePair kEnAr{"en", "ar", "EN-AR"};

Utterance make_utterance(const std::vector<Tag>& tags, const std::string& id = "u0") {
  Utterance u;
  u.id = id;
  for (std::size_t i = 0; i < tags.size(); ++i)
    u.tokens.push_back(Token{"t" + std::to_string(i), tags[i]});
  return u;
}

std::vector<Tag> ex5_tags() {
  std::vector<Tag> tags(5, Tag::lang("en"));
  tags.push_back(Tag::shared("ar"));
  for (int i = 0; i < 4; ++i) tags.push_back(Tag::lang("en"));
  for (int i = 0; i < 3; ++i) tags.push_back(Tag::lang("ar"));
  tags.push_back(Tag::neutral(NeutralKind::Other));
  return tags;
}

std::vector<TestSpec> default_grid_specs(SharedType type) {
  std::vector<TestSpec> specs;
  for (Direction d : {Direction::L1ToL2, Direction::L2ToL1, Direction::Both})
    for (WindowMode m : {WindowMode::Precede, WindowMode::Neighbor})
      for (int dist = 1; dist <= 6; ++dist) {
        TestSpec s;
        s.shared_type = type;
        s.direction = d;
        s.mode = m;
        s.distance = dist;
        specs.push_back(s);
      }
  return specs;
}

}  // namespace

TEST_CASE("occurrence enumeration on the goosebumps utterance") {
  const Utterance u = make_utterance(ex5_tags(), "ex5");
  TestSpec spec;
  spec.shared_type = SharedType::SharedL2;  // shared-ar under (en, ar)
  const auto occs = enumerate_items(u, spec, kEnAr);
  REQUIRE(occs.size() == 12);
  std::size_t shared_count = 0;
  for (const auto& o : occs) {
    CHECK(o.begin >= 1);
    CHECK(o.end <= 12);
    if (o.is_shared) {
      ++shared_count;
      CHECK(o.begin == 5);
      CHECK(o.end == 5);
    }
  }
  CHECK(shared_count == 1);

  // same occurrences under a non-matching type, the item flips to non-shared
  spec.shared_type = SharedType::SharedL1;
  const auto occs_l1 = enumerate_items(u, spec, kEnAr);
  REQUIRE(occs_l1.size() == 12);
  for (const auto& o : occs_l1) CHECK_FALSE(o.is_shared);
}

TEST_CASE("two-token utterances have no occurrences") {
  const Utterance u = make_utterance({Tag::lang("en"), Tag::lang("ar")});
  TestSpec spec;
  CHECK(enumerate_items(u, spec, kEnAr).empty());
}

TEST_CASE("items touching the first or last position are dropped entirely") {
  const Utterance u = make_utterance(
      {Tag::shared("ar"), Tag::shared("ar"), Tag::lang("en"), Tag::shared("en")});
  TestSpec spec;
  spec.shared_type = SharedType::AllShared;
  const auto occs = enumerate_items(u, spec, kEnAr);
  // the [0,1] item overlaps position 0; the [3,3] item overlaps the last
  REQUIRE(occs.size() == 1);
  CHECK(occs[0].begin == 2);
  CHECK_FALSE(occs[0].is_shared);
}

TEST_CASE("near_switch window arithmetic") {
  const std::vector<SwitchPoint> points{{"ex5", 10, "en", "ar", 0, false}};
  ItemOccurrence item{"ex5", 5, 5, true};
  TestSpec spec;
  spec.direction = Direction::L1ToL2;
  spec.mode = WindowMode::Precede;
  spec.distance = 5;
  CHECK(near_switch(item, points, spec, kEnAr));
  spec.distance = 4;
  CHECK_FALSE(near_switch(item, points, spec, kEnAr));

  // direction mismatch
  spec.distance = 5;
  spec.direction = Direction::L2ToL1;
  CHECK_FALSE(near_switch(item, points, spec, kEnAr));
  spec.direction = Direction::Both;
  CHECK(near_switch(item, points, spec, kEnAr));
}

TEST_CASE("near_switch with an empty point list is false") {
  TestSpec spec;
  spec.mode = WindowMode::Neighbor;
  spec.distance = 6;
  CHECK_FALSE(near_switch(ItemOccurrence{"u", 3, 3, true}, {}, spec, kEnAr));
}

TEST_CASE("neighbor mode sees preceding switches, precede mode does not") {
  const std::vector<SwitchPoint> points{{"u", 2, "en", "ar", 0, false}};
  ItemOccurrence item{"u", 4, 4, true};
  TestSpec spec;
  spec.direction = Direction::Both;
  spec.distance = 2;
  spec.mode = WindowMode::Neighbor;
  CHECK(near_switch(item, points, spec, kEnAr));
  spec.mode = WindowMode::Precede;
  CHECK_FALSE(near_switch(item, points, spec, kEnAr));
}

TEST_CASE("empty corpus gives a zero table") {
  Corpus c;
  c.pair = kEnAr;
  TestSpec spec;
  CHECK(build_contingency(c, spec) == ContingencyTable{0, 0, 0, 0});
}

TEST_CASE("contingency counting matches the quadratic oracle") {
  RandomCorpusParams params;
  params.utterances = 30;
  params.max_tokens = 40;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Corpus c = random_corpus(seed, params);
    for (SharedType type : {SharedType::SharedL1, SharedType::SharedL2,
                            SharedType::SharedOther, SharedType::AllShared}) {
      for (auto& spec : default_grid_specs(type)) {
        CAPTURE(seed, static_cast<int>(type), static_cast<int>(spec.direction),
                static_cast<int>(spec.mode), spec.distance);
        CHECK(build_contingency(c, spec) == oracles::contingency(c, spec));
      }
    }
  }
}

TEST_CASE("oracle agreement holds under keep-all and skip-neutral variants") {
  RandomCorpusParams params;
  params.utterances = 25;
  params.max_tokens = 35;
  for (std::uint64_t seed = 50; seed < 56; ++seed) {
    const Corpus c = random_corpus(seed, params);
    TestSpec spec;
    spec.shared_type = SharedType::AllShared;
    spec.mode = WindowMode::Neighbor;
    spec.distance = 3;
    spec.insertional_policy.mode = InsertionalPolicy::Mode::KeepAll;
    CHECK(build_contingency(c, spec) == oracles::contingency(c, spec));
    spec.insertional_policy.mode = InsertionalPolicy::Mode::ExcludeReturn;
    spec.skip_neutral_items = true;
    CHECK(build_contingency(c, spec) == oracles::contingency(c, spec));
  }
}

TEST_CASE("margins are stable and windows nest across a spec family") {
  RandomCorpusParams params;
  params.utterances = 40;
  params.max_tokens = 40;
  const Corpus c = random_corpus(7, params);
  for (SharedType type : {SharedType::SharedL1, SharedType::SharedOther,
                          SharedType::AllShared}) {
    std::optional<std::uint64_t> shared_total, nonshared_total;
    for (const auto& spec : default_grid_specs(type)) {
      const ContingencyTable t = build_contingency(c, spec);
      if (!shared_total) {
        shared_total = t.a + t.c;
        nonshared_total = t.b + t.d;
      }
      CHECK(t.a + t.c == *shared_total);
      CHECK(t.b + t.d == *nonshared_total);
    }

    // monotone in distance: a never drops as the window grows
    for (Direction d : {Direction::L1ToL2, Direction::Both}) {
      for (WindowMode m : {WindowMode::Precede, WindowMode::Neighbor}) {
        std::uint64_t prev_a = 0;
        std::uint64_t prev_c = std::numeric_limits<std::uint64_t>::max();
        for (int dist = 1; dist <= 6; ++dist) {
          TestSpec spec;
          spec.shared_type = type;
          spec.direction = d;
          spec.mode = m;
          spec.distance = dist;
          const ContingencyTable t = build_contingency(c, spec);
          CHECK(t.a >= prev_a);
          CHECK(t.c <= prev_c);
          prev_a = t.a;
          prev_c = t.c;
        }
      }
    }

    // neighbor windows are supersets of precede windows
    for (int dist = 1; dist <= 6; ++dist) {
      TestSpec precede;
      precede.shared_type = type;
      precede.direction = Direction::Both;
      precede.mode = WindowMode::Precede;
      precede.distance = dist;
      TestSpec neighbor = precede;
      neighbor.mode = WindowMode::Neighbor;
      CHECK(build_contingency(c, neighbor).a >= build_contingency(c, precede).a);
    }

    // direction inequality: both <= l1->l2 + l2->l1, cell-wise on a
    for (int dist : {1, 3, 6}) {
      TestSpec spec;
      spec.shared_type = type;
      spec.mode = WindowMode::Neighbor;
      spec.distance = dist;
      spec.direction = Direction::Both;
      const auto both = build_contingency(c, spec);
      spec.direction = Direction::L1ToL2;
      const auto fwd = build_contingency(c, spec);
      spec.direction = Direction::L2ToL1;
      const auto back = build_contingency(c, spec);
      CHECK(both.a <= fwd.a + back.a);
      CHECK(both.a >= std::max(fwd.a, back.a));
    }
  }
}
