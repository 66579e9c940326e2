#include "pql/surface.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pql;

TEST(Presentation, RelatorShape) {
  const auto p2 = standard_presentation(2);
  EXPECT_EQ(to_string(p2.relator), "a1 b1 A1 B1 a2 b2 A2 B2");
  EXPECT_EQ(p2.relator.size(), 8u);
  EXPECT_EQ(standard_presentation(3).relator.size(), 12u);
  EXPECT_THROW(standard_presentation(1), std::invalid_argument);
}

TEST(SccWord, Representatives) {
  EXPECT_EQ(to_string(scc_word(2, SccSpec::nonseparating())), "a1");
  const Word sep = scc_word(3, SccSpec::separating(2));
  EXPECT_EQ(to_string(sep), "a1 b1 A1 B1 a2 b2 A2 B2");
  EXPECT_EQ(sep.size(), 8u);
  EXPECT_THROW(scc_word(2, SccSpec::separating(2)), std::invalid_argument);
  EXPECT_THROW(scc_word(3, SccSpec::separating(0)), std::invalid_argument);
}

TEST(SccSpecText, RoundTrip) {
  for (int g = 2; g <= 4; ++g)
    for (const auto& s : all_scc_specs(g)) EXPECT_EQ(parse_scc_spec(to_string(s)), s);
  EXPECT_EQ(all_scc_specs(4).size(), 4u);
  EXPECT_THROW(parse_scc_spec("sep:"), std::invalid_argument);
  EXPECT_THROW(parse_scc_spec("separating"), std::invalid_argument);
}

TEST(FHom, ValidatesAndKillsRelator) {
  for (int g = 2; g <= 6; ++g) {
    const auto f = f_hom(g);
    EXPECT_TRUE(hom_validate(standard_presentation(g), f));
    EXPECT_TRUE(hom_apply(f, standard_presentation(g).relator).empty());
  }
}

TEST(FHom, SeparatingCurveMapsToCommutator) {
  const Word img = hom_apply(f_hom(2), scc_word(2, SccSpec::separating(1)));
  EXPECT_EQ(img, commutator(generator_word(2, 0), generator_word(2, 1)));
  EXPECT_TRUE(hom_apply(f_hom(2), Word(4)).empty());
  // intermediate commutators die for g = 3, i = 2
  const Word img3 = hom_apply(f_hom(3), scc_word(3, SccSpec::separating(2)));
  EXPECT_EQ(img3, commutator(generator_word(2, 0), generator_word(2, 1)));
}

TEST(HomValidate, NegativeCase) {
  const Word a = generator_word(2, 0), b = generator_word(2, 1);
  Homomorphism<FreeGroupTarget> h{4, FreeGroupTarget{2}, {a, b, a, b}};
  EXPECT_FALSE(hom_validate(standard_presentation(2), h));
  Homomorphism<FreeGroupTarget> h2{4, FreeGroupTarget{2}, {a, Word(2), b, Word(2)}};
  EXPECT_TRUE(hom_validate(standard_presentation(2), h2));
  EXPECT_THROW(hom_validate(standard_presentation(3), h), std::invalid_argument);
}

TEST(HomApply, AlphabetMismatchThrows) { EXPECT_THROW(hom_apply(f_hom(2), Word(6)), std::invalid_argument); }

TEST(QnWitness, FirstGeneratorMapsToA) {
  const auto w = qn_witness(2, 5);
  EXPECT_EQ(hom_apply(w, generator_word(4, a_gen(1))), qn_generators(5).a);
}

TEST(HomApply, MultiplicativeForEveryTarget) {
  Rng rng(41);
  const int g = 3;
  const auto f = f_hom(g);
  const auto q = qn_witness(g, 7);
  const auto h = h1_hom(g, 5);
  for (int t = 0; t < 1000; ++t) {
    const Word x = test::random_word(rng, 2 * g, 15), y = test::random_word(rng, 2 * g, 15);
    ASSERT_EQ(hom_apply(f, x * y), hom_apply(f, x) * hom_apply(f, y));
    ASSERT_EQ(hom_apply(q, x * y), hom_apply(q, x) * hom_apply(q, y));
    ASSERT_EQ(hom_apply(h, x * y), h.target.multiply(hom_apply(h, x), hom_apply(h, y)));
  }
}

TEST(SccOrder, Examples) {
  EXPECT_EQ(scc_witness_order(2, 5, SccSpec::nonseparating()), 5);
  EXPECT_EQ(scc_witness_order(2, 6, SccSpec::separating(1)), 6);
  EXPECT_EQ(scc_witness_order(3, 7, SccSpec::separating(2)), 7);
}

TEST(SccOrder, ExactlyNOverAllCells) {
  for (int g = 2; g <= 4; ++g)
    for (std::int64_t n = 3; n <= 12; ++n)
      for (const auto& s : all_scc_specs(g)) {
        EXPECT_EQ(scc_witness_order(g, n, s), n);
        EXPECT_FALSE(scc_first_trivial_power(g, n, s).has_value());
      }
}

TEST(SccOrder, RejectsSmallN) { EXPECT_THROW(scc_witness_order(2, 2, SccSpec::nonseparating()), std::invalid_argument); }

TEST(H1Image, Examples) {
  EXPECT_TRUE(h1_image(3, 4, scc_word(3, SccSpec::separating(2))).is_zero());
  EXPECT_EQ(h1_image(2, 3, generator_word(4, a_gen(1))).entries, (std::vector<std::int64_t>{1, 0, 0, 0}));
  EXPECT_TRUE(h1_image(2, 3, standard_presentation(2).relator).is_zero());
  EXPECT_THROW(h1_hom(2, 1), std::invalid_argument);
}

TEST(H1Image, FactorsThroughFreeReduction) {
  Rng rng(42);
  for (int t = 0; t < 1000; ++t) {
    const auto raw = test::random_letters(rng, 6, 25);
    EXPECT_EQ(h1_image(3, 6, raw), h1_image(3, 6, reduce(6, raw)));
  }
}
