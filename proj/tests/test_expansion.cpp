#include <gtest/gtest.h>

#include <functional>

#include "opf/expansion.hpp"
#include "support.hpp"

using namespace opf;
using namespace opf::testing;

namespace {

const OperadModel& model(const std::string& name) {
  static std::map<std::string, std::unique_ptr<OperadModel>> cache;
  auto& m = cache[name];
  if (!m) m = std::make_unique<OperadModel>(builtin(name), Guards{});
  return *m;
}

Term substitute(const Term& t, const std::vector<Term>& xs) {
  if (t.is_leaf()) return xs[t.label - 1];
  if (t.is_wheel()) return t;
  Term out = t;
  for (auto& c : out.children) c = substitute(c, xs);
  return out;
}

// Brute-force ideal: in every tree (and every rotation of its wheel), swap
// each two-vertex piece for every relabeled relation.  Wheeled trees are
// stored unrotated, so the cyclic identity t - rotate(t) joins the ideal.
std::vector<SparseVec> brute_ideal(const Presentation& p, int n, bool wheeled) {
  auto shapes = enumerate_shapes(n, wheeled, p.generators);
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < shapes.size(); ++i) idx[canonical_string(shapes[i])] = i;
  std::vector<SparseVec> out;

  auto emit = [&](const std::function<Term(const Term&)>& ctx, const std::vector<Term>& xs) {
    for (const auto& r : p.relations3)
      for (const Perm& s : all_perms(3)) {
        std::vector<Term> ys{xs[s[0] - 1], xs[s[1] - 1], xs[s[2] - 1]};
        std::map<std::size_t, Rational> acc;
        for (const auto& [key, c] : r.terms()) {
          SignedTerm st = canonicalize(ctx(substitute(parse_term(key), ys)), p.generators);
          acc[idx.at(canonical_string(st.term))] += c * st.coeff;
        }
        SparseVec v;
        for (const auto& [i, c] : acc)
          if (c != 0) v.emplace_back(i, c);
        out.push_back(v);
      }
  };
  std::function<void(const Term&, const std::function<Term(const Term&)>&)> visit =
      [&](const Term& t, const std::function<Term(const Term&)>& ctx) {
        if (!t.is_node()) return;
        for (int k = 0; k < 2; ++k) {
          const Term& q = t.children[k];
          if (!q.is_node()) continue;
          std::vector<Term> xs = k == 0 ? std::vector<Term>{q.children[0], q.children[1], t.children[1]}
                                        : std::vector<Term>{t.children[0], q.children[0], q.children[1]};
          emit(ctx, xs);
        }
        for (int k = 0; k < 2; ++k)
          visit(t.children[k], [&, k](const Term& sub) {
            Term u = t;
            u.children[k] = sub;
            return ctx(u);
          });
      };
  for (const Term& t : shapes) {
    if (wheeled) {
      SignedTerm rot = canonicalize(rotate_wheel(t), p.generators);
      std::map<std::size_t, Rational> acc;
      acc[idx.at(canonical_string(t))] += 1;
      acc[idx.at(canonical_string(rot.term))] -= rot.coeff;
      SparseVec v;
      for (const auto& [i, c] : acc)
        if (c != 0) v.emplace_back(i, c);
      out.push_back(v);
    }
    Term cur = t;
    for (int r = 0; r <= n; ++r) {
      visit(cur, [](const Term& x) { return x; });
      if (!wheeled) break;
      cur = rotate_wheel(cur);
    }
  }
  return out;
}

std::size_t rank_of(const std::vector<SparseVec>& vs, std::size_t dim) {
  Echelon e(dim);
  for (const auto& v : vs) e.insert(v);
  return e.rank();
}

}  // namespace

TEST(Expansion, PlainDimensionTables) {
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(model("ass").dim(n, false), static_cast<std::size_t>(factorial(n))) << n;
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(model("com").dim(n, false), 1u) << n;
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(model("lie").dim(n, false), static_cast<std::size_t>(factorial(n - 1))) << n;
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(model("poiss").dim(n, false), static_cast<std::size_t>(factorial(n))) << n;
}

TEST(Expansion, WheeledDimensionTables) {
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(model("com").dim(n, true), 1u) << n;
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(model("lie").dim(n, true), static_cast<std::size_t>(factorial(n - 1))) << n;
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(model("ass").dim(n, true), static_cast<std::size_t>(ass_wheeled_dim(n))) << n;
  EXPECT_EQ(ass_wheeled_dim(1), 2);
  EXPECT_EQ(ass_wheeled_dim(4), 34);
  const std::vector<std::size_t> poiss{2, 4, 10}, poiss_dual{0, 2, 7};
  OperadModel dual(wheeled_dual(builtin("poiss")), Guards{});
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(model("poiss").dim(n, true), poiss[n - 1]) << n;
    EXPECT_EQ(dual.dim(n, true), poiss_dual[n - 1]) << n;
  }
}

TEST(Expansion, WheeledComFiveNeedsRaisedGuard) {
  EXPECT_THROW(model("com").dim(5, true), GuardError);
  OperadModel big(builtin("com"), Guards{6, 5});
  EXPECT_EQ(big.dim(5, true), 1u);
}

TEST(Expansion, IdealMatchesBruteForce) {
  for (const auto& name : builtin_names())
    for (int n = 3; n <= 4; ++n) {
      const Presentation p = builtin(name);
      const std::size_t size = enumerate_shapes(n, false, p.generators).size();
      auto brute = brute_ideal(p, n, false);
      auto fast = ideal_subspace(p, n, false);
      const std::size_t r = rank_of(brute, size);
      EXPECT_EQ(r, rank_of(fast, size)) << name << " " << n;
      auto both = brute;
      both.insert(both.end(), fast.begin(), fast.end());
      EXPECT_EQ(r, rank_of(both, size)) << name << " " << n;
      ArityBasis b = operad_basis(p, n, false);
      EXPECT_EQ(r, b.echelon->rank());
      EXPECT_EQ(r + b.dim(), size);
    }
  for (const auto& name : builtin_names())
    for (int n = 1; n <= 3; ++n) {
      if (name == "poiss" && n == 3) continue;  // covered by the dimension table
      const Presentation p = builtin(name);
      const std::size_t size = enumerate_shapes(n, true, p.generators).size();
      auto brute = brute_ideal(p, n, true);
      auto fast = ideal_subspace(p, n, true);
      const std::size_t r = rank_of(brute, size);
      EXPECT_EQ(r, rank_of(fast, size)) << name << " wheeled " << n;
      auto both = brute;
      both.insert(both.end(), fast.begin(), fast.end());
      EXPECT_EQ(r, rank_of(both, size)) << name << " wheeled " << n;
    }
}

TEST(Expansion, Guards) {
  EXPECT_THROW(operad_basis(builtin("com"), 7, false), GuardError);
  EXPECT_THROW(operad_basis(builtin("com"), 5, true), GuardError);
  Guards small{3, 2};
  EXPECT_THROW(operad_basis(builtin("lie"), 4, false, small), GuardError);
  EXPECT_THROW(operad_basis(builtin("lie"), 3, true, small), GuardError);
  EXPECT_NO_THROW(operad_basis(builtin("lie"), 3, false, small));
  EXPECT_THROW(operad_basis(builtin("lie"), 0, false), std::invalid_argument);
}

TEST(Expansion, ReduceExamples) {
  const OperadModel& lie = model("lie");
  EXPECT_TRUE(lie.reduce(LinComb::parse("(l 1 (l 2 3)) + (l 2 (l 3 1)) + (l 3 (l 1 2))")).empty());
  const OperadModel& com = model("com");
  EXPECT_EQ(com.reduce(parse_term("(c (c 3 1) 2)")), (SparseVec{{0, 1}}));
  // A com wheel whose other input is a lie vertex vanishes.
  const OperadModel& poiss = model("poiss");
  EXPECT_TRUE(poiss.reduce(parse_term("(c (l 1 2) @)")).empty());
  EXPECT_TRUE(poiss.reduce(parse_term("(c (l 1 2) (c 3 @))")).empty());
  EXPECT_TRUE(poiss.reduce(parse_term("(c @ (l 1 (c 2 3)))")).empty());
  // The Leibniz rule moves the wheel onto the lie vertices.
  EXPECT_EQ(poiss.to_lincomb(poiss.reduce(parse_term("(l (c 1 2) @)")), 2, true).to_string(),
            "1*(c (l 1 @) 2) + 1*(c 1 (l 2 @))");
  // Representatives reduce to unit vectors.
  for (std::size_t i = 0; i < poiss.dim(3, true); ++i)
    EXPECT_EQ(poiss.reduce(poiss.basis(3, true).rep(i)), (SparseVec{{i, 1}}));
  EXPECT_THROW(poiss.reduce(parse_term("(x 1 2)")), std::invalid_argument);
}

TEST(Expansion, CompositionAndContraction) {
  const OperadModel& com = model("com");
  EXPECT_EQ(com.compose(2, 0, 1, 2, 0), (SparseVec{{0, 1}}));
  EXPECT_EQ(com.contract(2, 0, 2), (SparseVec{{0, 1}}));
  const OperadModel& lie = model("lie");
  // [[x1,x2],x3] through the composition map and through reduction.
  SparseVec a = lie.compose(2, 0, 1, 2, 0);
  SparseVec b = lie.reduce(parse_term("(l (l 1 2) 3)"));
  EXPECT_EQ(a, b);
  // Cyclic identity: the trace of nu(mu(1, 2), 3) through slot 2 equals
  // its rotation mu(1, nu(@, 2)), and the composite of the model maps
  // agrees with reducing the explicit tree.
  for (const auto& name : builtin_names()) {
    const OperadModel& m = model(name);
    for (std::size_t nu = 0; nu < m.dim(2, false); ++nu)
      for (std::size_t mu = 0; mu < m.dim(2, false); ++mu) {
        Term lhs = contract_wheel(graft(m.basis(2, false).rep(nu), 1, m.basis(2, false).rep(mu)), 2);
        EXPECT_EQ(m.reduce(lhs), m.reduce(rotate_wheel(lhs))) << name;
        std::map<std::size_t, Rational> acc;
        for (const auto& [i, c] : m.compose(2, nu, 1, 2, mu))
          for (const auto& [j, d] : m.contract(3, i, 2)) acc[j] += c * d;
        SparseVec via_maps;
        for (const auto& [j, c] : acc)
          if (c != 0) via_maps.emplace_back(j, c);
        EXPECT_EQ(via_maps, m.reduce(lhs)) << name;
      }
  }
}

TEST(Expansion, ActionOnBasis) {
  const OperadModel& lie = model("lie");
  EXPECT_EQ(lie.act(2, false, 0, {2, 1}, false), (SparseVec{{0, -1}}));
  EXPECT_EQ(lie.act(2, false, 0, {2, 1}, true), (SparseVec{{0, 1}}));
  const OperadModel& ass = model("ass");
  for (std::size_t a = 0; a < ass.dim(3, false); ++a) {
    std::set<std::size_t> images;
    for (const Perm& s : all_perms(3)) {
      SparseVec v = ass.act(3, false, a, s, false);
      ASSERT_EQ(v.size(), 1u);
      images.insert(v[0].first);
    }
    EXPECT_EQ(images.size(), 6u);  // Ass(3) is the regular representation
  }
}

TEST(Expansion, BasisDumps) {
  const OperadModel& com = model("com");
  EXPECT_NE(com.basis_dump(3, false).find("(c (c 1 2) 3)"), std::string::npos);
  EXPECT_NE(com.basis_dump_json(2, true).find("\"dim\""), std::string::npos);
}
