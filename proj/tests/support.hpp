#pragma once

#include "pql/random.hpp"
#include "pql/words.hpp"

#include <vector>

namespace pql::test {

/// Random (not necessarily reduced) letter sequence over `rank` generators.
inline std::vector<Letter> random_letters(Rng& rng, int rank, int max_len) {
  std::vector<Letter> out(static_cast<std::size_t>(rng.integer(0, max_len)));
  for (auto& l : out) l = {static_cast<int>(rng.integer(0, rank - 1)), rng.uniform() < 0.5 ? 1 : -1};
  return out;
}

inline Word random_word(Rng& rng, int rank, int max_len) { return reduce(rank, random_letters(rng, rank, max_len)); }

}  // namespace pql::test
