#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "glucoge/mapper.hpp"
#include "support/fixtures.hpp"

namespace glucoge {
namespace {

Chromosome chrom(std::vector<int> v) { return Chromosome::from_values(v); }

TEST(Mapper, WorkedExample) {
  auto g = bundled_grammar("FIG1");
  auto out = map_genotype(g, chrom({12, 55, 23, 47, 38, 254, 2}), 3, true);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(phenotype_text(out), "Abs(X) * X");
  EXPECT_EQ(out.wraps_used, 1u);
  EXPECT_EQ(out.codons_consumed, 8u);
  ASSERT_EQ(out.trace.size(), 8u);
  EXPECT_EQ(out.trace[7].codon_index, 0u);
  EXPECT_EQ(out.trace[7].non_terminal, "var");
  EXPECT_EQ(out.trace[2].non_terminal, "pre_op");
  EXPECT_EQ(out.trace[2].chosen, 2u);
}

TEST(Mapper, WorkedExampleFailsWithoutWrapping) {
  auto g = bundled_grammar("FIG1");
  auto out = map_genotype(g, chrom({12, 55, 23, 47, 38, 254, 2}), 0);
  EXPECT_FALSE(out.ok());
  EXPECT_EQ(out.failure, MappingFailure::wrapped_out);
  EXPECT_THROW(phenotype_text(out), NotMapped);
}

TEST(Mapper, SingleChoiceConsumesACodon) {
  auto g = parse_grammar("<s> ::= a");
  auto out = map_genotype(g, chrom({0}), 0);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(phenotype_text(out), "a");
  EXPECT_EQ(out.codons_consumed, 1u);
  EXPECT_EQ(out.wraps_used, 0u);

  auto two = parse_grammar("<s> ::= <t> <t>\n<t> ::= a | b\n");
  auto o2 = map_genotype(two, chrom({7, 1}), 1);
  ASSERT_TRUE(o2.ok());
  // 7 goes to <s> even though it has one choice; <t> then reads 1 and wraps to 7.
  EXPECT_EQ(phenotype_text(o2), "bb");
  EXPECT_EQ(o2.codons_consumed, 3u);
  EXPECT_EQ(o2.wraps_used, 1u);
}

TEST(Mapper, AllZeroG11WrapsOut) {
  // Choice 0 of <exprch> is `<exprch> <op> <exprch>`, so the leftmost
  // derivation never terminates and every codon of every pass is used.
  auto g = bundled_grammar("G11");
  auto out = map_genotype(g, Chromosome(std::vector<Codon>(100, 0)), 3);
  EXPECT_FALSE(out.ok());
  EXPECT_EQ(out.failure, MappingFailure::wrapped_out);
  EXPECT_EQ(out.codons_consumed, 400u);
  EXPECT_EQ(out.wraps_used, 3u);
}

TEST(Mapper, ConstantDigits) {
  auto g = bundled_grammar("G10");
  // func, exprgluc=(cte op gluc), cte, 4 digits, op=+, gluc=K, exprch->varch->K, exprins->varins->K
  auto out = map_genotype(g, chrom({0, 1, 0, 5, 0, 2, 5, 0, 1, 2, 1, 2, 2}), 0);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(phenotype_text(out), "(50.25 + K) + K - K");
  EXPECT_EQ(out.codons_consumed, 13u);
}

TEST(Mapper, EmbeddedIndexIsExpanded) {
  auto g = bundled_grammar("G10");
  // gluc=GL[k_<idx>], idx, dgt 0, dgt 7
  auto out = map_genotype(g, chrom({0, 2, 0, 0, 0, 7, 2, 1, 2, 2}), 0);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(phenotype_text(out), "GL[k_07] + K - K");
}

TEST(Mapper, HandDerivedG11Model) {
  auto g = bundled_grammar("G11");
  std::vector<int> codons(std::begin(test::kJoyWilsonChoices), std::end(test::kJoyWilsonChoices));
  codons.resize(100, 0);
  auto out = map_genotype(g, Chromosome::from_values(codons), 3);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(phenotype_text(out), test::kJoyWilsonBestModel);
  EXPECT_EQ(out.codons_consumed, std::size(test::kJoyWilsonChoices));
}

TEST(Mapper, ChromosomeRange) {
  EXPECT_THROW(chrom({0, 256}), std::out_of_range);
  EXPECT_THROW(chrom({-1}), std::out_of_range);
  EXPECT_NO_THROW(chrom({0, 255}));
  EXPECT_THROW(map_genotype(parse_grammar("<s> ::= a"), Chromosome{}, 3), std::invalid_argument);
}

TEST(Mapper, TraceFormat) {
  auto g = bundled_grammar("FIG1");
  auto out = map_genotype(g, chrom({12, 55, 23, 47, 38, 254, 2}), 3, true);
  auto text = format_trace(out.trace);
  EXPECT_EQ(text.substr(0, text.find('\n')), "step,codon_index,codon_value,non_terminal,n_choices,chosen");
  EXPECT_NE(text.find("\n1,0,12,expr,3,0\n"), std::string::npos);
  EXPECT_NE(text.find("\n8,0,12,var,2,0\n"), std::string::npos);
}

class MapperProperty : public ::testing::TestWithParam<const char*> {};

Chromosome random_chrom(std::mt19937& gen, std::size_t len) {
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<Codon> c(len);
  for (auto& x : c) x = static_cast<Codon>(d(gen));
  return Chromosome(std::move(c));
}

TEST_P(MapperProperty, Determinism) {
  auto g = bundled_grammar(GetParam());
  std::mt19937 gen(11);
  for (int i = 0; i < 200; ++i) {
    auto c = random_chrom(gen, 100);
    auto a = map_genotype(g, c, 3);
    auto b = map_genotype(g, c, 3);
    ASSERT_EQ(a.ok(), b.ok());
    EXPECT_EQ(a.codons_consumed, b.codons_consumed);
    if (a.ok()) EXPECT_EQ(phenotype_text(a), phenotype_text(b));
  }
}

TEST_P(MapperProperty, CodonReuseEquivalence) {
  auto g = bundled_grammar(GetParam());
  std::mt19937 gen(12);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    auto c = random_chrom(gen, 30);
    auto a = map_genotype(g, c, 3);
    if (!a.ok() || a.wraps_used > 1) continue;
    Chromosome doubled = c;
    doubled.codons.insert(doubled.codons.end(), c.codons.begin(), c.codons.end());
    auto b = map_genotype(g, doubled, 3);
    ASSERT_TRUE(b.ok());
    EXPECT_EQ(phenotype_text(a), phenotype_text(b));
    EXPECT_EQ(b.wraps_used, 0u);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST_P(MapperProperty, TraceReproducesChoices) {
  auto g = bundled_grammar(GetParam());
  std::mt19937 gen(13);
  for (int i = 0; i < 200; ++i) {
    auto c = random_chrom(gen, 100);
    auto out = map_genotype(g, c, 3, true);
    EXPECT_EQ(out.trace.size(), out.codons_consumed);
    EXPECT_LE(out.wraps_used, 3u);
    for (const auto& s : out.trace) {
      EXPECT_EQ(s.codon_index, (s.step - 1) % c.size());
      EXPECT_EQ(s.codon_value, c[s.codon_index]);
      EXPECT_EQ(s.n_choices, choice_count(g, s.non_terminal));
      EXPECT_EQ(s.chosen, s.codon_value % s.n_choices);
    }
    if (!out.ok()) continue;
    for (const auto& node : out.tree->nodes()) {
      if (node.symbol.kind == SymbolKind::non_terminal) {
        ASSERT_GE(node.choice, 0);
        EXPECT_LT(static_cast<std::size_t>(node.choice), choice_count(g, node.symbol.text));
      }
    }
    for (const auto& leaf : out.tree->leaves()) {
      EXPECT_EQ(leaf.find('<'), std::string::npos) << leaf;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Bundled, MapperProperty, ::testing::Values("FIG1", "G10", "G11", "G12", "G13"));

}  // namespace
}  // namespace glucoge
