#include "pql/words.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pql;

namespace {

constexpr Letter a{0, 1}, A{0, -1}, b{1, 1}, B{1, -1};

Word w2(std::initializer_list<Letter> l) { return reduce(2, l); }

}  // namespace

TEST(Reduce, CancelsAdjacentInversePair) { EXPECT_TRUE(w2({a, A}).empty()); }

TEST(Reduce, InnerCancellationCascades) { EXPECT_EQ(w2({a, b, B, a}), w2({a, a})); }

TEST(Reduce, CascadeAcrossSeveralLevels) { EXPECT_TRUE(w2({a, b, a, A, B, A}).empty()); }

TEST(Reduce, ReducedInputUnchanged) {
  const std::vector<Letter> raw{a, b, A, B, a};
  const Word w = reduce(2, raw);
  ASSERT_EQ(w.size(), raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_EQ(w[i], raw[i]);
}

TEST(Reduce, RejectsLetterOutsideAlphabet) {
  EXPECT_THROW(reduce(2, {Letter{2, 1}}), std::out_of_range);
  EXPECT_THROW(reduce(2, {Letter{0, 0}}), std::out_of_range);
}

TEST(Reduce, IdempotentOnRandomInputs) {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const auto raw = test::random_letters(rng, 3, 30);
    const Word once = reduce(3, raw);
    EXPECT_EQ(reduce(3, once.letters()), once);
    for (std::size_t i = 1; i < once.size(); ++i) EXPECT_FALSE(once[i - 1].cancels(once[i]));
  }
}

TEST(Multiply, CancelsAtSeam) { EXPECT_EQ(w2({a, b}) * w2({B, a}), w2({a, a})); }

TEST(Multiply, EmptyIsIdentityAndInverseCancels) {
  const Word w = w2({a, b, A});
  EXPECT_EQ(w * Word(2), w);
  EXPECT_EQ(Word(2) * w, w);
  EXPECT_TRUE((w * invert(w)).empty());
}

TEST(Multiply, RankMismatchThrows) { EXPECT_THROW(Word(2) * Word(3), std::invalid_argument); }

TEST(Multiply, AssociativeOnRandomTriples) {
  Rng rng(12);
  for (int t = 0; t < 10000; ++t) {
    const Word x = test::random_word(rng, 3, 12), y = test::random_word(rng, 3, 12), z = test::random_word(rng, 3, 12);
    ASSERT_EQ((x * y) * z, x * (y * z));
  }
}

TEST(Invert, ReversesAndFlips) {
  EXPECT_EQ(invert(w2({a, b})), w2({B, A}));
  EXPECT_TRUE(invert(Word(2)).empty());
  Rng rng(13);
  for (int t = 0; t < 500; ++t) {
    const Word w = test::random_word(rng, 4, 20);
    EXPECT_EQ(invert(invert(w)), w);
  }
}

TEST(Power, NegativeAndZeroExponents) {
  const Word w = w2({a, b});
  EXPECT_TRUE(power(w, 0).empty());
  EXPECT_EQ(power(w, 3).size(), 6u);
  EXPECT_EQ(power(w, -2), invert(power(w, 2)));
}

TEST(Commutator, Examples) {
  const Word x = generator_word(2, 0), y = generator_word(2, 1);
  EXPECT_TRUE(commutator(x, x).empty());
  EXPECT_EQ(commutator(x, y), w2({a, b, A, B}));
  EXPECT_TRUE(commutator(x, Word(2)).empty());
}

TEST(Conjugacy, Examples) {
  EXPECT_TRUE(conjugacy_equal(w2({a, b}), w2({b, a})));
  EXPECT_FALSE(conjugacy_equal(generator_word(2, 0), generator_word(2, 1)));
  EXPECT_TRUE(conjugacy_equal(Word(2), Word(2)));
  EXPECT_FALSE(conjugacy_equal(Word(2), generator_word(2, 0)));
}

TEST(Conjugacy, ConjugationPreservesClass) {
  Rng rng(14);
  const Word r = parse_word("a1 b1 A1 B1 a2 b2 A2 B2", 4);
  for (int t = 0; t < 500; ++t) {
    const Word g = test::random_word(rng, 4, 10);
    EXPECT_TRUE(conjugacy_equal(conjugate(g, r), r));
    const Word w = test::random_word(rng, 4, 10);
    EXPECT_TRUE(conjugacy_equal(conjugate(g, w), w));
  }
}

TEST(Conjugacy, EquivalenceRelationOnSamples) {
  Rng rng(15);
  std::vector<Word> ws;
  for (int i = 0; i < 40; ++i) {
    const Word base = test::random_word(rng, 2, 4);
    ws.push_back(base);
    ws.push_back(conjugate(test::random_word(rng, 2, 4), base));
  }
  for (const Word& x : ws) {
    EXPECT_TRUE(conjugacy_equal(x, x));
    for (const Word& y : ws) {
      const bool xy = conjugacy_equal(x, y);
      EXPECT_EQ(xy, conjugacy_equal(y, x));
      if (!xy) continue;
      for (const Word& z : ws)
        if (conjugacy_equal(y, z)) EXPECT_TRUE(conjugacy_equal(x, z));
    }
  }
}

TEST(CyclicReduce, StripsConjugatingShell) {
  const Word w = w2({a, b, b, A});
  EXPECT_EQ(cyclic_reduce(w), w2({b, b}));
  EXPECT_TRUE(is_cyclically_reduced(cyclic_reduce(w)));
  EXPECT_FALSE(is_cyclically_reduced(w));
}

TEST(Format, RoundTripsSurfaceAndFreePairNames) {
  const Word r = parse_word("a1 b1 A1 B1 a2 b2 A2 B2", 4);
  EXPECT_EQ(r.size(), 8u);
  EXPECT_EQ(to_string(r), "a1 b1 A1 B1 a2 b2 A2 B2");
  EXPECT_EQ(to_string(w2({a, B}), Naming::FreePair), "a B");
  EXPECT_EQ(parse_word("a B", 2, Naming::FreePair), w2({a, B}));
  EXPECT_THROW(parse_word("a3", 4), std::out_of_range);
  EXPECT_THROW(parse_word("q1", 4), std::invalid_argument);
}
