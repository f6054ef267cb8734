#pragma once

// Seeded synthetic corpora: a full-alphabet random corpus for property
// testing, and a planted-trigger corpus where shared items raise the switch
// probability of the following tokens by a factor that decays with distance.
//
// Randomness comes from raw mt19937_64 output through local helpers, so a
// given seed produces the same corpus on every platform and standard library.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cstrig/corpus.hpp"

namespace cstrig {

namespace rnd {

inline std::uint64_t next(std::mt19937_64& g) { return g(); }

// uniform in [0, n)
inline std::uint64_t below(std::mt19937_64& g, std::uint64_t n) {
  // multiply-shift; bias is < 2^-64 * n, irrelevant at our sizes
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(g()) * n) >> 64);
}

inline double unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline bool chance(std::mt19937_64& g, double p) { return unit(g) < p; }

}  // namespace rnd

struct RandomCorpusParams {
  LanguagePair pair{"en", "es", "EN-ES"};
  std::string third_language = "fr";
  std::size_t utterances = 30;
  std::size_t min_tokens = 1;
  std::size_t max_tokens = 40;
  // weights over the full tag alphabet: l1, l2, third, shared-l1, shared-l2,
  // shared-other, mix, other, punct, emoji, hashtag
  std::vector<double> weights = {30, 30, 3, 6, 6, 6, 2, 6, 6, 2, 3};
};

// Random corpus over the full tag alphabet; token text encodes its position.
inline Corpus random_corpus(std::uint64_t seed, const RandomCorpusParams& params) {
  std::mt19937_64 gen(seed);
  double total_weight = 0;
  for (double w : params.weights) total_weight += w;

  Corpus c;
  c.pair = params.pair;
  c.source_label = "synthetic";
  for (std::size_t ui = 0; ui < params.utterances; ++ui) {
    Utterance u;
    u.id = "u" + std::to_string(ui);
    const std::size_t len =
        params.min_tokens + rnd::below(gen, params.max_tokens - params.min_tokens + 1);
    for (std::size_t ti = 0; ti < len; ++ti) {
      double pick = rnd::unit(gen) * total_weight;
      std::size_t choice = 0;
      for (; choice + 1 < params.weights.size(); ++choice) {
        if (pick < params.weights[choice]) break;
        pick -= params.weights[choice];
      }
      Tag tag;
      switch (choice) {
        case 0: tag = Tag::lang(params.pair.l1); break;
        case 1: tag = Tag::lang(params.pair.l2); break;
        case 2: tag = Tag::lang(params.third_language); break;
        case 3: tag = Tag::shared(params.pair.l1); break;
        case 4: tag = Tag::shared(params.pair.l2); break;
        case 5: tag = Tag::shared_other(); break;
        case 6: tag = Tag::mix(); break;
        case 7: tag = Tag::neutral(NeutralKind::Other); break;
        case 8: tag = Tag::neutral(NeutralKind::Punct); break;
        case 9: tag = Tag::neutral(NeutralKind::Emoji); break;
        default: tag = Tag::neutral(NeutralKind::Hashtag); break;
      }
      u.tokens.push_back(Token{"t" + std::to_string(ti), tag});
    }
    c.utterances.push_back(std::move(u));
  }
  return c;
}

struct PlantedTriggerParams {
  LanguagePair pair{"en", "es", "EN-ES"};
  std::size_t utterances = 100000;
  std::size_t min_tokens = 8;
  std::size_t max_tokens = 24;
  double baseline_switch_prob = 0.1;
  double factor_at_distance_1 = 2.0;
  int decay_reach = 6;  // factor falls linearly to 1.0 at this distance
  double shared_prob = 0.005;
};

// Two-language corpus where each shared item multiplies the switch
// probability of the next `decay_reach` tokens by a factor interpolating
// from `factor_at_distance_1` down to 1. Shared items never change the
// current language; only pair-language tokens and shared items are emitted,
// so token offsets equal window distances.
inline Corpus planted_trigger_corpus(std::uint64_t seed,
                                     const PlantedTriggerParams& params) {
  std::mt19937_64 gen(seed);
  Corpus c;
  c.pair = params.pair;
  c.source_label = "planted-trigger";
  auto factor_at = [&](std::size_t dist) {
    if (dist < 1 || dist > static_cast<std::size_t>(params.decay_reach)) return 1.0;
    if (params.decay_reach == 1) return params.factor_at_distance_1;
    const double span = params.factor_at_distance_1 - 1.0;
    return params.factor_at_distance_1 -
           span * static_cast<double>(dist - 1) / (params.decay_reach - 1);
  };
  for (std::size_t ui = 0; ui < params.utterances; ++ui) {
    Utterance u;
    u.id = "u" + std::to_string(ui);
    const std::size_t len =
        params.min_tokens + rnd::below(gen, params.max_tokens - params.min_tokens + 1);
    bool in_l2 = rnd::chance(gen, 0.5);
    std::size_t last_item_end = static_cast<std::size_t>(-1);
    for (std::size_t p = 0; p < len; ++p) {
      if (rnd::chance(gen, params.shared_prob)) {
        std::size_t which = rnd::below(gen, 3);
        Tag tag = which == 0   ? Tag::shared(params.pair.l1)
                  : which == 1 ? Tag::shared(params.pair.l2)
                               : Tag::shared_other();
        u.tokens.push_back(Token{"s" + std::to_string(p), tag});
        last_item_end = p;
        continue;
      }
      double q = params.baseline_switch_prob;
      if (last_item_end != static_cast<std::size_t>(-1))
        q *= factor_at(p - last_item_end);
      if (rnd::chance(gen, q)) in_l2 = !in_l2;
      u.tokens.push_back(
          Token{"w" + std::to_string(p),
                Tag::lang(in_l2 ? params.pair.l2 : params.pair.l1)});
    }
    c.utterances.push_back(std::move(u));
  }
  return c;
}

}  // namespace cstrig
