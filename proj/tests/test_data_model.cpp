#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "roughkm/data_model.hpp"

using namespace roughkm;

namespace {

ExpressionMatrix column(std::vector<double> v) {
  std::vector<std::string> genes;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    genes.push_back("g" + std::to_string(i));
    rows.push_back({v[i]});
  }
  return ExpressionMatrix::from_rows(genes, {"t1"}, rows);
}

ExpressionMatrix row(std::vector<double> v) {
  std::vector<std::string> conds;
  for (std::size_t i = 0; i < v.size(); ++i) conds.push_back("t" + std::to_string(i));
  return ExpressionMatrix::from_rows({"g"}, conds, {v});
}

ExpressionMatrix random_matrix(std::mt19937_64& rng, std::size_t genes, std::size_t conds, bool integers = false) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> ui(-3, 3);
  std::vector<std::string> g(genes), c(conds);
  for (std::size_t i = 0; i < genes; ++i) g[i] = "g" + std::to_string(i);
  for (std::size_t j = 0; j < conds; ++j) c[j] = "t" + std::to_string(j);
  std::vector<std::optional<double>> v(genes * conds);
  for (auto& x : v) x = integers ? static_cast<double>(ui(rng)) : u(rng);
  return {g, c, v};
}

}  // namespace

TEST(ParseMatrix, TsvShapeAndValues) {
  const auto m = parse_matrix("gene\tt1\tt2\ng1\t1.5\t2\ng2\t-3\t4e-1\ng3\t0\t7\n", Orientation::genes_as_rows);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_TRUE(m.is_complete());
  EXPECT_DOUBLE_EQ(m.value(1, 1), 0.4);
  EXPECT_EQ(m.gene_ids(), (std::vector<std::string>{"g1", "g2", "g3"}));
  EXPECT_EQ(m.condition_ids(), (std::vector<std::string>{"t1", "t2"}));
}

TEST(ParseMatrix, MissingTokens) {
  const auto m = parse_matrix("gene\tt1\tt2\ng1\t1\tNA\ng2\t2\t3\ng3\t4\t5\n", Orientation::genes_as_rows);
  EXPECT_EQ(m.missing_count(), 1u);
  EXPECT_FALSE(m.at(0, 1).has_value());

  const auto all = parse_matrix("id,a,b,c,d\nx,,na,NaN,nan\n", Orientation::genes_as_rows, ',');
  EXPECT_EQ(all.missing_count(), 4u);
}

TEST(ParseMatrix, GenesAsColumnsIsTransposed) {
  // 17 conditions as rows, 517 genes as columns.
  std::string text = "condition";
  for (int g = 0; g < 517; ++g) text += "\tgene" + std::to_string(g);
  text += '\n';
  for (int t = 0; t < 17; ++t) {
    text += "t" + std::to_string(t);
    for (int g = 0; g < 517; ++g) text += '\t' + std::to_string(g * 100 + t);
    text += '\n';
  }
  const auto m = parse_matrix(text, Orientation::genes_as_columns);
  EXPECT_EQ(m.rows(), 517u);
  EXPECT_EQ(m.cols(), 17u);
  EXPECT_EQ(m.gene_ids()[5], "gene5");
  EXPECT_EQ(m.condition_ids()[3], "t3");
  EXPECT_DOUBLE_EQ(m.value(5, 3), 503.0);
}

TEST(ParseMatrix, RaggedRowReportsLine) {
  try {
    parse_matrix("gene\tt1\tt2\ng1\t1\t2\ng2\t3\n", Orientation::genes_as_rows);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseMatrix, NonNumericReportsCoordinates) {
  try {
    parse_matrix("gene\tt1\tt2\ng1\t1\t2\ng2\t3\tabc\n", Orientation::genes_as_rows);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(ParseMatrix, DuplicateLabelsAreValidationErrors) {
  EXPECT_THROW(parse_matrix("gene\tt1\ng1\t1\ng1\t2\n", Orientation::genes_as_rows), ValidationError);
  EXPECT_THROW(parse_matrix("gene\tt1\tt1\ng1\t1\t2\n", Orientation::genes_as_rows), ValidationError);
}

TEST(ParseMatrix, CrlfAndTrailingBlankLines) {
  const auto m = parse_matrix("gene,t1\r\ng1,1\r\ng2,2\r\n\r\n", Orientation::genes_as_rows, ',');
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_DOUBLE_EQ(m.value(1, 0), 2.0);
}

TEST(DelimiterForPath, Extension) {
  EXPECT_EQ(delimiter_for_path("a/b.CSV"), ',');
  EXPECT_EQ(delimiter_for_path("a/b.tsv"), '\t');
  EXPECT_EQ(delimiter_for_path("noext"), '\t');
}

TEST(WriteMatrix, RoundTripsExactly) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix(rng, 5, 4);
    auto values = m.values();
    values[3].reset();
    ExpressionMatrix with_missing(m.gene_ids(), m.condition_ids(), values);
    for (char delim : {'\t', ','}) {
      EXPECT_EQ(parse_matrix(write_matrix(with_missing, delim), Orientation::genes_as_rows, delim), with_missing);
    }
  }
}

TEST(DropIncompleteGenes, IdentityWhenComplete) {
  const auto m = parse_matrix("gene\tt1\tt2\ng1\t1\t2\ng2\t3\t4\n", Orientation::genes_as_rows);
  EXPECT_EQ(drop_incomplete_genes(m), m);
}

TEST(DropIncompleteGenes, KeepsOrder) {
  const auto m = parse_matrix("gene\tt1\tt2\ng1\t1\t2\ng2\tNA\t4\ng3\t5\t6\n", Orientation::genes_as_rows);
  const auto out = drop_incomplete_genes(m);
  EXPECT_EQ(out.gene_ids(), (std::vector<std::string>{"g1", "g3"}));
  EXPECT_EQ(out.condition_ids(), m.condition_ids());
}

TEST(DropIncompleteGenes, LargeMatrix) {
  std::vector<std::string> genes(2884), conds(17);
  for (std::size_t i = 0; i < genes.size(); ++i) genes[i] = "y" + std::to_string(i);
  for (std::size_t j = 0; j < conds.size(); ++j) conds[j] = "t" + std::to_string(j);
  std::vector<std::optional<double>> v(2884 * 17, 1.0);
  v[100 * 17 + 3].reset();
  v[2000 * 17 + 0].reset();
  v[2000 * 17 + 16].reset();
  const auto out = drop_incomplete_genes(ExpressionMatrix(genes, conds, v));
  EXPECT_EQ(out.rows(), 2882u);
  EXPECT_EQ(out.cols(), 17u);
}

TEST(DropIncompleteGenes, AllRemovedIsAnError) {
  const auto m = parse_matrix("gene\tt1\tt2\ng1\tNA\t2\ng2\t3\tNA\n", Orientation::genes_as_rows);
  EXPECT_THROW(drop_incomplete_genes(m), EmptyResultError);
}

TEST(DropIncompleteGenes, Idempotent) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution miss(0.1);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix(rng, 12, 5);
    auto v = m.values();
    for (auto& x : v) {
      if (miss(rng)) x.reset();
    }
    ExpressionMatrix holes(m.gene_ids(), m.condition_ids(), v);
    try {
      const auto once = drop_incomplete_genes(holes);
      EXPECT_EQ(drop_incomplete_genes(once), once);
    } catch (const EmptyResultError&) {
    }
  }
}

TEST(MinMaxNormalize, WorkedColumn) {
  const auto out = min_max_normalize(column({2, 4, 6}), {0.0, 1.0});
  EXPECT_EQ(out.value(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out.value(1, 0), 0.5);
  EXPECT_EQ(out.value(2, 0), 1.0);
}

TEST(MinMaxNormalize, ConstantColumnMapsToNewMinWithWarning) {
  std::vector<std::string> warnings;
  const auto out = min_max_normalize(column({5, 5, 5}), {-1.0, 3.0}, &warnings);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(out.value(r, 0), -1.0);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("t1"), std::string::npos);
}

TEST(MinMaxNormalize, Preconditions) {
  EXPECT_THROW(min_max_normalize(column({1, 2}), {1.0, 1.0}), ConfigError);
  const auto holes = parse_matrix("gene\tt1\ng1\tNA\ng2\t1\n", Orientation::genes_as_rows);
  EXPECT_THROW(min_max_normalize(holes, {}), ValidationError);
}

TEST(MinMaxNormalize, MatchesFormulaAndHitsEndpoints) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> bound(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(rng, 9, 4);
    double lo = bound(rng), hi = bound(rng);
    if (lo > hi) std::swap(lo, hi);
    if (lo == hi) continue;
    const auto out = min_max_normalize(m, {lo, hi});
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double mn = m.value(0, c), mx = mn;
      for (std::size_t r = 0; r < m.rows(); ++r) {
        mn = std::min(mn, m.value(r, c));
        mx = std::max(mx, m.value(r, c));
      }
      double out_min = out.value(0, c), out_max = out_min;
      for (std::size_t r = 0; r < m.rows(); ++r) {
        const double expected = (m.value(r, c) - mn) / (mx - mn) * (hi - lo) + lo;
        EXPECT_NEAR(out.value(r, c), expected, 1e-12);
        EXPECT_GE(out.value(r, c), lo);
        EXPECT_LE(out.value(r, c), hi);
        out_min = std::min(out_min, out.value(r, c));
        out_max = std::max(out_max, out.value(r, c));
        for (std::size_t q = 0; q < m.rows(); ++q) {
          if (m.value(r, c) <= m.value(q, c)) {
            EXPECT_LE(out.value(r, c), out.value(q, c));
          }
        }
      }
      EXPECT_EQ(out_min, lo);
      EXPECT_EQ(out_max, hi);
    }
  }
}

TEST(Discretize, WorkedRows) {
  EXPECT_EQ(discretize(row({0.5, 0.3, 0.3, 0.8})).values(), (std::vector<std::int8_t>{1, -1, 0, 1}));
  EXPECT_EQ(discretize(row({0, -2})).values(), (std::vector<std::int8_t>{0, -1}));
  EXPECT_EQ(discretize(row({2.5, 2.5, 2.5})).values(), (std::vector<std::int8_t>{1, 0, 0}));
  EXPECT_EQ(discretize(row({-0.1})).values(), (std::vector<std::int8_t>{-1}));
}

TEST(Discretize, ShapeAndRange) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_matrix(rng, 7, 6, true);
    const auto d = discretize(m);
    EXPECT_EQ(d.rows(), m.rows());
    EXPECT_EQ(d.cols(), m.cols());
    for (auto v : d.values()) EXPECT_TRUE(v == -1 || v == 0 || v == 1);
  }
}

TEST(Discretize, LaterPositionsIgnoreRowOffset) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> offset(-5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = random_matrix(rng, 4, 6, true);
    auto v = m.values();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const double k = offset(rng);
      for (std::size_t c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = *v[r * m.cols() + c] + k;
    }
    const auto a = discretize(m);
    const auto b = discretize(ExpressionMatrix(m.gene_ids(), m.condition_ids(), v));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 1; c < m.cols(); ++c) EXPECT_EQ(a.at(r, c), b.at(r, c));
  }
}

TEST(Discretize, TextRoundTripIsBitExact) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = discretize(random_matrix(rng, 6, 5, true));
    const auto text = write_discretized(d);
    const auto back = parse_discretized(text);
    EXPECT_EQ(back, d);
    EXPECT_EQ(write_discretized(back), text);
  }
  EXPECT_THROW(parse_discretized("gene\tt1\ng\t2\n"), ParseError);
}
