#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "opf/bubble.hpp"
#include "opf/homology.hpp"
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

// The (1 com, 2 lie) component of the wheeled cobar of Poiss in arity 3.
const ChainComplex& obstruction_component() {
  static const ChainComplex c = component(build_cobar(model("poiss"), 3, true, false), {1, 2});
  return c;
}

// Dual dims from the classical formulas: Com^! = Lie, Lie^! = Com,
// Ass^! = Ass, Poiss^! = Poiss.
std::size_t plain_dual_dim(const std::string& name, int n) {
  if (name == "com") return static_cast<std::size_t>(factorial(n - 1));
  if (name == "lie") return 1;
  return static_cast<std::size_t>(factorial(n));
}

LinComb fixture() { return canonicalize_bubbles(obstruction_cycle(), model("poiss"), BubbleMode::Cobar, false); }

}  // namespace

TEST(Homology, PlainOperadsAreKoszul) {
  for (const auto& name : builtin_names()) {
    const int max_n = name == "poiss" ? 3 : 4;
    for (int n = 2; n <= max_n; ++n) {
      HomologyReport h = homology_dims(build_cobar(model(name), n, false, false));
      EXPECT_TRUE(h.euler_ok());
      for (const auto& d : h.degrees) {
        const std::size_t expected = d.degree == n - 1 ? plain_dual_dim(name, n) : 0;
        EXPECT_EQ(d.dim(), expected) << name << " n=" << n << " degree " << d.degree;
      }
    }
    KoszulReport r = koszul_report(builtin(name), 2, max_n, false, false, Guards{});
    EXPECT_TRUE(r.pass()) << name;
  }
}

TEST(Homology, WheeledCompletionsOfClassicalOperads) {
  for (const std::string name : {"ass", "com", "lie"}) {
    KoszulReport r = koszul_report(builtin(name), 1, 3, true, false, Guards{});
    EXPECT_TRUE(r.pass()) << name << "\n" << to_text(r);
    for (const auto& a : r.arities) EXPECT_FALSE(a.witness.has_value());
  }
  // Top-degree homology equals the wheeled dual: Ass^! gives 0, 2, 6.
  KoszulReport ass = koszul_report(builtin("ass"), 1, 3, true, false, Guards{});
  for (const auto& a : ass.arities)
    EXPECT_EQ(a.expected, static_cast<std::size_t>(ass_wheeled_dual_dim(a.arity))) << a.arity;
}

TEST(Homology, WheeledPoissonPassesInArityTwoAndFailsInArityThree) {
  KoszulReport r = koszul_report(builtin("poiss"), 2, 3, true, false, Guards{});
  ASSERT_EQ(r.arities.size(), 2u);
  EXPECT_TRUE(r.arities[0].pass);
  EXPECT_FALSE(r.arities[1].pass);
  EXPECT_FALSE(r.pass());
  const ArityVerdict& v = r.arities[1];
  EXPECT_EQ(v.top_degree, 3);
  EXPECT_EQ(v.expected, 7u);
  EXPECT_EQ(v.homology.dim(2), 1u);
  EXPECT_EQ(v.homology.dim(3), 7u);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->degree, 2);
  EXPECT_EQ(v.witness->component, (std::vector<int>{1, 2}));
  EXPECT_TRUE(certify_cycle(obstruction_component(), v.witness->cycle, 2).is_cycle);
  EXPECT_FALSE(certify_cycle(obstruction_component(), v.witness->cycle, 2).is_boundary);
  // Every other component passes.
  for (const auto& c : v.components) EXPECT_EQ(c.pass, (c.types != std::vector<int>{1, 2}));
}

TEST(Homology, ObstructionComponent) {
  const ChainComplex& c = obstruction_component();
  HomologyReport h = homology_dims(c);
  EXPECT_EQ(h.dim(0), 0u);
  EXPECT_EQ(h.dim(1), 0u);
  EXPECT_EQ(h.dim(2), 1u);
  EXPECT_EQ(h.dim(3), 2u);
  EXPECT_TRUE(h.euler_ok());
  // The dual has two elements with one com and two lie vertices.
  auto dual = dual_components(OperadModel(wheeled_dual(builtin("poiss")), Guards{}), 3, true, {"c", "l"});
  std::size_t expected = 0;
  for (const auto& [types, dim] : dual)
    if (types == std::vector<int>{1, 2}) expected = dim;
  EXPECT_EQ(expected, 2u);
}

TEST(Homology, CertifyFixtureCycle) {
  // The written terms are not canonical: keys are rewritten with signs.
  EXPECT_THROW(certify_cycle(obstruction_component(), obstruction_cycle(), 2), std::invalid_argument);
  const LinComb x = fixture();
  EXPECT_EQ(x.size(), 6u);
  bool mixed = false;
  for (const auto& [key, v] : x.terms()) mixed |= v != x.terms().begin()->second;
  EXPECT_TRUE(mixed);
  const ChainComplex whole = build_cobar(model("poiss"), 3, true, false);
  for (const ChainComplex* c : {&obstruction_component(), &whole}) {
    CycleCheck chk = certify_cycle(*c, x, 2);
    EXPECT_TRUE(chk.is_cycle);
    EXPECT_FALSE(chk.is_boundary);
  }
  // Degree 2 is below the top degree 3.
  EXPECT_EQ(obstruction_component().max_degree(), 3);
}

TEST(Homology, CertifyZeroAndBoundaries) {
  const ChainComplex& c = obstruction_component();
  CycleCheck zero = certify_cycle(c, LinComb(), 2);
  EXPECT_TRUE(zero.is_cycle);
  EXPECT_TRUE(zero.is_boundary);
  // The image of a degree-3 basis element is a boundary.
  SparseMatrix d3 = c.d(3);
  for (std::size_t j = 0; j < c.size(3); ++j) {
    LinComb y;
    for (const auto& [i, v] : d3.column(j)) y.add(c.part(2)->basis[i], v);
    CycleCheck chk = certify_cycle(c, y, 2);
    EXPECT_TRUE(chk.is_cycle);
    EXPECT_TRUE(chk.is_boundary);
  }
  // A single degree-3 basis element is no cycle here: H_3 = 2 but the
  // kernel is not everything.
  std::size_t cycles = 0;
  for (const auto& key : c.part(3)->basis) cycles += certify_cycle(c, LinComb(key, 1), 3).is_cycle;
  EXPECT_LT(cycles, c.size(3));
  EXPECT_THROW(certify_cycle(c, LinComb("{(c 1 2)}", 1), 2), std::invalid_argument);
}

TEST(Homology, Witnesses) {
  const ChainComplex& c = obstruction_component();
  EXPECT_FALSE(homology_witness(c, 1).has_value());
  auto w = homology_witness(c, 2);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->terms().begin()->second, 1);
  CycleCheck chk = certify_cycle(c, *w, 2);
  EXPECT_TRUE(chk.is_cycle);
  EXPECT_FALSE(chk.is_boundary);
  // The witness and the fixture agree up to a scalar modulo boundaries.
  bool found = false;
  for (int s : {1, -1}) {
    LinComb diff = fixture();
    diff.add(*w, -s);
    if (certify_cycle(c, diff, 2).is_boundary) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Homology, DoubleCobarRecoversTheOperad) {
  for (const std::string name : {"com", "lie"})
    for (int n = 2; n <= 3; ++n) {
      HomologyReport h = homology_dims(build_double_cobar(model(name), n));
      EXPECT_EQ(h.total(), model(name).dim(n, false)) << name << n;
    }
}

TEST(Homology, FiltrationBounds) {
  const ChainComplex& c = obstruction_component();
  // Lie-input filtration: F_1 holds the trees whose leaves all sit on lie
  // vertices, so the level counts leaves on com vertices.
  FiltrationReport r = filtration_analysis(c, leaf_type_filtration(c, "c"));
  EXPECT_EQ(r.bounds, (std::vector<std::pair<int, std::size_t>>{{0, 0}, {1, 2}, {2, 4}, {3, 3}}));
  EXPECT_TRUE(r.bound_holds);
  for (const auto& [k, b] : r.bounds) EXPECT_GE(b, r.total.dim(k));
  // One level gives back the homology itself.
  FiltrationAssignment flat;
  for (const auto& p : c.parts) flat.levels.push_back(std::vector<int>(p.size(), 1));
  FiltrationReport one = filtration_analysis(c, flat);
  EXPECT_EQ(one.levels, 1);
  for (const auto& [k, b] : one.bounds) EXPECT_EQ(b, one.total.dim(k));
  // A level assignment that d raises is rejected.
  FiltrationAssignment bad = flat;
  for (auto& x : bad.levels[2]) x = 2;
  EXPECT_THROW(filtration_analysis(c, bad), std::invalid_argument);
  EXPECT_THROW(leaf_type_filtration(c, "q"), std::invalid_argument);
}

TEST(Homology, TwoLevelsWithoutDifferential) {
  ChainComplex c = obstruction_component();
  FiltrationAssignment f;
  for (auto& p : c.parts) {
    p.d = SparseMatrix(p.d.rows(), p.d.cols());
    f.levels.emplace_back();
    for (std::size_t i = 0; i < p.size(); ++i) f.levels.back().push_back(1 + static_cast<int>(i % 2));
  }
  FiltrationReport r = filtration_analysis(c, f);
  EXPECT_EQ(r.levels, 2);
  for (const auto& [k, b] : r.bounds) EXPECT_EQ(b, c.size(k));
  EXPECT_TRUE(r.bound_holds);
}

TEST(Homology, RejectsBrokenDifferentials) {
  ChainComplex c = build_cobar(model("com"), 4, false, false);
  ASSERT_EQ(c.max_degree(), 3);
  // d3 and d2 each send the first basis element to the first one below.
  for (int k : {2, 3}) {
    DegreePart& p = c.parts[static_cast<std::size_t>(k - 1)];
    SparseMatrix m(p.d.rows(), p.d.cols());
    m.set(0, 0, 1);
    p.d = m;
  }
  EXPECT_THROW(homology_dims(c), std::logic_error);
}

TEST(Homology, ReportsSerialize) {
  KoszulReport r = koszul_report(builtin("poiss"), 3, 3, true, false, Guards{});
  auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["verdict"], "FAIL");
  EXPECT_NE(to_text(r).find("FAIL"), std::string::npos);
  HomologyReport h = homology_dims(obstruction_component());
  EXPECT_NE(to_text(h).find("3  24  22  2  2"), std::string::npos);
  auto hj = nlohmann::json::parse(to_json(h));
  EXPECT_TRUE(hj.contains("degrees"));
  FiltrationReport f = filtration_analysis(obstruction_component(), leaf_type_filtration(obstruction_component(), "c"));
  EXPECT_TRUE(nlohmann::json::parse(to_json(f)).contains("bounds"));
}
