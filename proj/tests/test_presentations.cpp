#include <gtest/gtest.h>

#include "opf/expansion.hpp"
#include "opf/presentation.hpp"

using namespace opf;

namespace {

std::size_t rank_of(const std::vector<SparseVec>& vs, std::size_t dim) {
  Echelon e(dim);
  for (const auto& v : vs) e.insert(v);
  return e.rank();
}

// Rank of the relations after projecting onto trees with the given vertex
// counts.
std::size_t block_rank(const Presentation& p, const std::map<std::string, int>& counts) {
  auto shapes = enumerate_shapes(3, false, p.generators);
  std::vector<SparseVec> proj;
  for (const auto& v : relation_vectors(p)) {
    SparseVec w;
    for (const auto& [i, c] : v)
      if (vertex_counts(shapes[i]) == counts) w.emplace_back(i, c);
    proj.push_back(w);
  }
  return rank_of(proj, shapes.size());
}

}  // namespace

TEST(Presentations, BuiltinRelationRanks) {
  EXPECT_EQ(relation_rank(builtin("com")), 2u);
  EXPECT_EQ(relation_rank(builtin("lie")), 1u);
  EXPECT_EQ(relation_rank(builtin("ass")), 6u);
  EXPECT_EQ(block_rank(builtin("poiss"), {{"c", 1}, {"l", 1}}), 3u);
  EXPECT_EQ(block_rank(builtin("poiss"), {{"c", 2}}), 2u);
  EXPECT_EQ(block_rank(builtin("poiss"), {{"l", 2}}), 1u);
  EXPECT_THROW(builtin("pre-lie"), std::invalid_argument);
  EXPECT_EQ(builtin_names(), (std::vector<std::string>{"ass", "com", "lie", "poiss"}));
}

TEST(Presentations, PairingSigns) {
  EXPECT_EQ(pairing_sign(parse_term("(c (c 1 2) 3)")), 1);
  EXPECT_EQ(pairing_sign(parse_term("(c (c 2 1) 3)")), -1);
  EXPECT_EQ(pairing_sign(parse_term("(c 1 (c 2 3))")), -1);
  EXPECT_EQ(pairing_sign(parse_term("(c 1 @)")), 1);
  EXPECT_EQ(pairing_sign(parse_term("(c @ 1)")), -1);
}

TEST(Presentations, DualityAtArityThree) {
  EXPECT_TRUE(isomorphic(quadratic_dual(builtin("com")), builtin("lie")));
  EXPECT_TRUE(isomorphic(quadratic_dual(builtin("lie")), builtin("com")));
  EXPECT_TRUE(isomorphic(quadratic_dual(builtin("ass")), builtin("ass")));
  EXPECT_TRUE(isomorphic(quadratic_dual(builtin("poiss")), builtin("poiss")));
  EXPECT_FALSE(isomorphic(builtin("com"), builtin("lie")));
  EXPECT_FALSE(isomorphic(builtin("ass"), builtin("poiss")));
  // Free(E_Ass)(3) is 12-dimensional and Ann(R_Ass) is 6-dimensional.
  EXPECT_EQ(enumerate_shapes(3, false, builtin("ass").generators).size(), 12u);
  EXPECT_EQ(relation_rank(quadratic_dual(builtin("ass"))), 6u);
  // Involution: P^!! has the same relations as P.
  for (const auto& name : builtin_names())
    EXPECT_TRUE(isomorphic(quadratic_dual(quadratic_dual(builtin(name))), builtin(name))) << name;
}

TEST(Presentations, WheeledDuals) {
  Presentation pd = wheeled_dual(builtin("poiss"));
  // Both one-vertex wheels are relations.
  std::vector<SparseVec> w = wheeled_relation_vectors(pd);
  EXPECT_EQ(rank_of(w, enumerate_shapes(1, true, pd.generators).size()), 2u);
  OperadModel d(pd);
  EXPECT_EQ(d.dim(1, true), 0u);
  OperadModel com_dual(wheeled_dual(builtin("com")));
  OperadModel lie(builtin("lie"));
  EXPECT_EQ(com_dual.dim(1, true), 0u);
  for (int n = 2; n <= 3; ++n) EXPECT_EQ(com_dual.dim(n, true), lie.dim(n, true));
  OperadModel lie_dual(wheeled_dual(builtin("lie")));
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(lie_dual.dim(n, true), 0u);
}

TEST(Presentations, TextRoundTrip) {
  for (const auto& name : builtin_names()) {
    std::string text = presentation_to_text(builtin(name));
    Presentation p = parse_presentation(text);
    EXPECT_EQ(presentation_to_text(p), text);
    EXPECT_TRUE(isomorphic(p, builtin(name)));
  }
}

TEST(Presentations, ConfigFiles) {
  const std::string text =
      "# commutative, written by hand\n"
      "name = mycom\n"
      "[generators]\n"
      "c 1\n"
      "[relations3]\n"
      "(c (c 1 2) 3) - (c 1 (c 2 3))\n"
      "(c (c 1 3) 2) - (c 1 (c 2 3))\n";
  Presentation p = parse_presentation(text);
  EXPECT_EQ(p.name, "mycom");
  EXPECT_TRUE(isomorphic(p, builtin("com")));
  // A relation whose S3-orbit leaves the span.
  const std::string unstable =
      "[generators]\n"
      "c 1\n"
      "[relations3]\n"
      "(c (c 1 2) 3) - (c 1 (c 2 3))\n";
  EXPECT_THROW(parse_presentation(unstable), std::invalid_argument);
  EXPECT_THROW(parse_presentation("[generators]\nc 2\n"), std::invalid_argument);
  EXPECT_THROW(parse_presentation("[generators]\nc 1\n[relations3]\n(x 1 (c 2 3))\n"), std::invalid_argument);
  EXPECT_THROW(parse_presentation("[bogus]\n"), std::invalid_argument);
  EXPECT_THROW(load_presentation("/nonexistent/file.txt"), std::runtime_error);
}
