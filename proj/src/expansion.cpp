#include "opf/expansion.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace opf {

Guards Guards::from_env() {
  Guards g;
  if (const char* v = std::getenv("OPERAD_FORGE_MAX_ARITY")) {
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n > 0 && n < 16) {
      g.max_plain = std::max<int>(g.max_plain, static_cast<int>(n));
      g.max_wheeled = std::max<int>(g.max_wheeled, static_cast<int>(n));
    }
  }
  return g;
}

void Guards::check(int n, bool wheeled) const {
  const int limit = wheeled ? max_wheeled : max_plain;
  if (n > limit)
    throw GuardError(std::string(wheeled ? "wheeled" : "plain") + " arity " + std::to_string(n) +
                     " exceeds guard " + std::to_string(limit) +
                     (wheeled ? " (--max-wheeled-arity" : " (--max-plain-arity") + " or OPERAD_FORGE_MAX_ARITY)");
}

namespace {

// Canonicalize, merge and normalize; empty result means zero.
TermVec normalize(const TermVec& raw, const GeneratorSet& gens) {
  std::map<std::string, std::pair<Term, Rational>> acc;
  for (const auto& [t, c] : raw) {
    SignedTerm st = canonicalize(t, gens);
    std::string k = canonical_string(st.term);
    auto [it, fresh] = acc.try_emplace(k, st.term, c * st.coeff);
    if (!fresh) it->second.second += c * st.coeff;
  }
  TermVec out;
  for (auto& [k, tc] : acc)
    if (tc.second != 0) out.push_back(std::move(tc));
  if (!out.empty()) {
    Rational lead = out.front().second;
    for (auto& tc : out) tc.second /= lead;
  }
  return out;
}

std::string key_of(const TermVec& v) {
  std::string k;
  for (const auto& [t, c] : v) {
    k += canonical_string(t);
    k += ':';
    k += c.get_str();
    k += ';';
  }
  return k;
}

class Collector {
 public:
  explicit Collector(const GeneratorSet& g) : gens_(g) {}
  void add(const TermVec& raw) {
    TermVec v = normalize(raw, gens_);
    if (v.empty()) return;
    if (seen_.insert(key_of(v)).second) out_.push_back(std::move(v));
  }
  std::vector<TermVec> take() { return std::move(out_); }

 private:
  const GeneratorSet& gens_;
  std::set<std::string> seen_;
  std::vector<TermVec> out_;
};

Term map_leaves(const Term& t, const std::function<Term(int)>& f) {
  if (t.is_leaf()) return f(t.label);
  Term out = t;
  for (auto& c : out.children) c = map_leaves(c, f);
  return out;
}

std::vector<TermVec> seed(const Presentation& p) {
  Collector col(p.generators);
  for (const auto& r : p.relations3)
    for (const Perm& s : all_perms(3)) {
      TermVec v;
      for (const auto& [k, c] : r.terms()) v.emplace_back(relabel(parse_term(k), s), c);
      col.add(v);
    }
  return col.take();
}

// Grows every generating vector of arity n-1 by one generator and one new
// leaf v, in every position.
std::vector<TermVec> grow(const std::vector<TermVec>& prev, int n, const GeneratorSet& gens) {
  Collector col(gens);
  std::vector<std::string> prim = gens.primaries();
  for (const TermVec& x : prev) {
    for (int v = 1; v <= n; ++v) {
      TermVec shifted;
      for (const auto& [t, c] : x)
        shifted.emplace_back(map_leaves(t, [&](int l) { return Term::leaf(l < v ? l : l + 1); }), c);
      for (const auto& g : prim) {
        // Both sides coincide after canonicalization for symmetric generators.
        const int sides = gens.get(g).self_partnered() ? 1 : 2;
        for (int side = 0; side < sides; ++side) {
          // new root
          TermVec root;
          for (const auto& [t, c] : shifted) {
            if (side == 0) root.emplace_back(Term::node(g, {t, Term::leaf(v)}), c);
            else root.emplace_back(Term::node(g, {Term::leaf(v), t}), c);
          }
          col.add(root);
          // split one leaf
          for (int l = 1; l <= n; ++l) {
            if (l == v) continue;
            TermVec split;
            for (const auto& [t, c] : shifted) {
              split.emplace_back(map_leaves(t, [&](int k) {
                                   if (k != l) return Term::leaf(k);
                                   return side == 0 ? Term::node(g, {Term::leaf(l), Term::leaf(v)})
                                                    : Term::node(g, {Term::leaf(v), Term::leaf(l)});
                                 }),
                                 c);
            }
            col.add(split);
          }
        }
      }
    }
  }
  return col.take();
}

std::vector<TermVec> plain_generators(const Presentation& p, int n) {
  if (n < 3) return {};
  std::vector<TermVec> cur = seed(p);
  for (int k = 4; k <= n; ++k) cur = grow(cur, k, p.generators);
  return cur;
}

std::vector<TermVec> wheeled_generators(const Presentation& p, int m) {
  Collector col(p.generators);
  for (const TermVec& x : plain_generators(p, m + 1))
    for (int i = 1; i <= m + 1; ++i) {
      TermVec v;
      for (const auto& [t, c] : x) v.emplace_back(contract_wheel(t, i), c);
      col.add(v);
    }
  // Wheeled relations with generators grafted into numbered leaves.
  std::vector<TermVec> cur;
  {
    Collector wc(p.generators);
    for (const auto& r : p.wheeled_relations1) {
      TermVec v;
      for (const auto& [k, c] : r.terms()) v.emplace_back(parse_term(k), c);
      wc.add(v);
    }
    cur = wc.take();
  }
  std::vector<std::string> prim = p.generators.primaries();
  for (int k = 2; k <= m; ++k) {
    Collector wc(p.generators);
    for (const TermVec& x : cur)
      for (int v = 1; v <= k; ++v)
        for (int l = 1; l <= k; ++l) {
          if (l == v) continue;
          for (const auto& g : prim)
            for (int side = 0; side < (p.generators.get(g).self_partnered() ? 1 : 2); ++side) {
              TermVec split;
              for (const auto& [t, c] : x) {
                Term s = map_leaves(t, [&](int q) { return Term::leaf(q < v ? q : q + 1); });
                split.emplace_back(map_leaves(s, [&](int q) {
                                     if (q != l) return Term::leaf(q);
                                     return side == 0 ? Term::node(g, {Term::leaf(l), Term::leaf(v)})
                                                      : Term::node(g, {Term::leaf(v), Term::leaf(l)});
                                   }),
                                   c);
              }
              wc.add(split);
            }
        }
    cur = wc.take();
  }
  if (!p.wheeled_relations1.empty())
    for (const auto& v : cur) col.add(v);
  for (const Term& t : enumerate_shapes(m, true, p.generators)) {
    Term r = rotate_wheel(t);
    if (r == t) continue;
    col.add({{t, Rational(1)}, {r, Rational(-1)}});
  }
  return col.take();
}

std::vector<int> leaf_profile(const Term& t, const GeneratorSet& gens) {
  std::vector<int> prof(gens.all().size(), 0);
  for (const auto& [leaf, dec] : leaf_parents(t)) ++prof[gens.index_of(dec)];
  return prof;
}

}  // namespace

std::vector<TermVec> ideal_generators(const Presentation& p, int n, bool wheeled, const Guards& g) {
  g.check(n, wheeled);
  if (wheeled) {
    if (n + 1 > g.max_plain) g.check(n + 1, false);
    return wheeled_generators(p, n);
  }
  return plain_generators(p, n);
}

std::vector<SparseVec> ideal_subspace(const Presentation& p, int n, bool wheeled, const Guards& g) {
  std::vector<TermVec> gens = ideal_generators(p, n, wheeled, g);
  std::vector<Term> span = enumerate_shapes(n, wheeled, p.generators);
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < span.size(); ++i) idx[canonical_string(span[i])] = i;
  std::vector<SparseVec> out;
  for (const auto& v : gens) {
    SparseVec s;
    for (const auto& [t, c] : v) s.emplace_back(idx.at(canonical_string(t)), c);
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(s));
  }
  return out;
}

bool prefer(const Term& a, const Term& b, const GeneratorSet& gens) {
  auto pa = leaf_profile(a, gens);
  auto pb = leaf_profile(b, gens);
  if (pa != pb) return pa < pb;
  return canonical_string(a) < canonical_string(b);
}

SparseVec ArityBasis::reduce(const SparseVec& x) const {
  SparseVec r = echelon->reduce(x);
  SparseVec out;
  out.reserve(r.size());
  for (const auto& [i, c] : r) {
    long pos = basis_position[i];
    if (pos < 0) throw std::logic_error("reduction left a non-representative coordinate");
    out.emplace_back(static_cast<std::size_t>(pos), c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

ArityBasis operad_basis(const Presentation& p, int n, bool wheeled, const Guards& g) {
  if (n < 1) throw std::invalid_argument("arity must be positive");
  g.check(n, wheeled);
  ArityBasis b;
  b.arity = n;
  b.wheeled = wheeled;
  std::vector<Term> span = enumerate_shapes(n, wheeled, p.generators);
  std::vector<std::pair<std::vector<int>, std::pair<std::string, std::size_t>>> order;
  for (std::size_t i = 0; i < span.size(); ++i)
    order.push_back({leaf_profile(span[i], p.generators), {canonical_string(span[i]), i}});
  std::sort(order.begin(), order.end());
  for (const auto& o : order) {
    b.spanning.push_back(span[o.second.second]);
    b.keys.push_back(o.second.first);
  }
  for (std::size_t i = 0; i < b.keys.size(); ++i) b.index[b.keys[i]] = i;
  b.echelon = std::make_shared<Echelon>(b.spanning.size(), Echelon::PivotRule::Last);
  std::vector<TermVec> ideal = ideal_generators(p, n, wheeled, g);
  b.ideal_size = ideal.size();
  for (const auto& v : ideal) {
    SparseVec s;
    for (const auto& [t, c] : v) s.emplace_back(b.index.at(canonical_string(t)), c);
    std::sort(s.begin(), s.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    b.echelon->insert(s);
  }
  b.basis_position.assign(b.spanning.size(), -1);
  for (std::size_t i = 0; i < b.spanning.size(); ++i)
    if (!b.echelon->is_pivot(i)) {
      b.basis_position[i] = static_cast<long>(b.reps.size());
      b.reps.push_back(i);
    }
  return b;
}

OperadModel::OperadModel(Presentation p, Guards g) : p_(std::move(p)), guards_(g) {}

const ArityBasis& OperadModel::basis(int n, bool wheeled) const {
  if (n < 1) throw std::invalid_argument("arity must be positive");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = bases_.find({n, wheeled});
    if (it != bases_.end()) return *it->second;
  }
  auto b = std::make_unique<ArityBasis>();
  if (!wheeled && n == 1) {
    // P(1) is the ground field: the identity, written as the leaf "1".
    guards_.check(n, wheeled);
    b->arity = 1;
    b->spanning.push_back(Term::leaf(1));
    b->keys.push_back("1");
    b->index["1"] = 0;
    b->echelon = std::make_shared<Echelon>(1, Echelon::PivotRule::Last);
    b->reps.push_back(0);
    b->basis_position.push_back(0);
  } else {
    *b = operad_basis(p_, n, wheeled, guards_);
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, fresh] = bases_.try_emplace({n, wheeled}, std::move(b));
  return *it->second;
}

SparseVec OperadModel::reduce_canonical(const Term& t, int n, bool wheeled) const {
  const ArityBasis& b = basis(n, wheeled);
  auto it = b.index.find(canonical_string(t));
  if (it == b.index.end()) throw std::invalid_argument("term " + canonical_string(t) + " is not in the spanning set");
  return b.reduce({{it->second, Rational(1)}});
}

SparseVec OperadModel::reduce(const Term& t) const {
  validate(t, p_.generators);
  SignedTerm st = canonicalize(t, p_.generators);
  SparseVec v = reduce_canonical(st.term, arity(t), is_wheeled(t));
  for (auto& [i, c] : v) c *= st.coeff;
  return v;
}

SparseVec OperadModel::reduce(const LinComb& x) const {
  std::map<std::size_t, Rational> acc;
  for (const auto& [k, c] : x.terms())
    for (const auto& [i, v] : reduce(parse_term(k))) acc[i] += c * v;
  SparseVec out;
  for (auto& [i, c] : acc)
    if (c != 0) out.emplace_back(i, c);
  return out;
}

LinComb OperadModel::to_lincomb(const SparseVec& v, int n, bool wheeled) const {
  const ArityBasis& b = basis(n, wheeled);
  LinComb out;
  for (const auto& [i, c] : v) out.add(b.rep_key(i), c);
  return out;
}

SparseVec OperadModel::compose(int n, std::size_t a, int slot, int m, std::size_t b) const {
  auto key = std::make_tuple(0, n, a, slot, m, b);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = comp_.find(key);
    if (it != comp_.end()) return it->second;
  }
  const Term& x = basis(n, false).rep(a);
  const Term& y = basis(m, false).rep(b);
  SignedTerm st = canonicalize(graft(x, slot, y), p_.generators);
  SparseVec out = reduce_canonical(st.term, n + m - 1, false);
  for (auto& [i, c] : out) c *= st.coeff;
  std::lock_guard<std::mutex> lock(mu_);
  return comp_.try_emplace(key, std::move(out)).first->second;
}

SparseVec OperadModel::wcompose(int n, std::size_t a, int slot, int m, std::size_t b) const {
  auto key = std::make_tuple(1, n, a, slot, m, b);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = comp_.find(key);
    if (it != comp_.end()) return it->second;
  }
  const Term& x = basis(n, true).rep(a);
  const Term& y = basis(m, false).rep(b);
  SignedTerm st = canonicalize(graft(x, slot, y), p_.generators);
  SparseVec out = reduce_canonical(st.term, n + m - 1, true);
  for (auto& [i, c] : out) c *= st.coeff;
  std::lock_guard<std::mutex> lock(mu_);
  return comp_.try_emplace(key, std::move(out)).first->second;
}

SparseVec OperadModel::contract(int n, std::size_t a, int slot) const {
  auto key = std::make_tuple(n, a, slot);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = contr_.find(key);
    if (it != contr_.end()) return it->second;
  }
  const Term& x = basis(n, false).rep(a);
  SignedTerm st = canonicalize(contract_wheel(x, slot), p_.generators);
  SparseVec out = reduce_canonical(st.term, n - 1, true);
  for (auto& [i, c] : out) c *= st.coeff;
  std::lock_guard<std::mutex> lock(mu_);
  return contr_.try_emplace(key, std::move(out)).first->second;
}

SparseVec OperadModel::act(int n, bool wheeled, std::size_t a, const Perm& sigma, bool sgn_twist) const {
  auto key = std::make_tuple(n, wheeled, a, sigma, sgn_twist);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = act_.find(key);
    if (it != act_.end()) return it->second;
  }
  const Term& x = basis(n, wheeled).rep(a);
  SparseVec out;
  if (!wheeled && n == 1) {
    out.emplace_back(0, Rational(1));
  } else {
    SignedTerm st = apply_leaf_permutation(x, sigma, sgn_twist, p_.generators);
    out = reduce_canonical(st.term, n, wheeled);
    for (auto& [i, c] : out) c *= st.coeff;
  }
  std::lock_guard<std::mutex> lock(mu_);
  return act_.try_emplace(key, std::move(out)).first->second;
}

std::vector<int> OperadModel::type_counts(int n, bool wheeled, std::size_t a) const {
  std::vector<std::string> prim = p_.generators.primaries();
  std::vector<int> out(prim.size(), 0);
  for (const auto& [id, k] : vertex_counts(basis(n, wheeled).rep(a))) {
    const Generator& g = p_.generators.get(id);
    std::string pid = p_.generators.is_primary(id) ? id : g.partner;
    out[std::find(prim.begin(), prim.end(), pid) - prim.begin()] += k;
  }
  return out;
}

std::string OperadModel::basis_dump(int n, bool wheeled) const {
  const ArityBasis& b = basis(n, wheeled);
  std::ostringstream out;
  out << p_.name << (wheeled ? " wheeled" : "") << " arity " << n << " dim " << b.dim() << '\n';
  for (std::size_t i = 0; i < b.dim(); ++i) out << 'b' << i << ' ' << b.rep_key(i) << '\n';
  return out.str();
}

std::string OperadModel::basis_dump_json(int n, bool wheeled) const {
  const ArityBasis& b = basis(n, wheeled);
  nlohmann::json j;
  j["operad"] = p_.name;
  j["arity"] = n;
  j["wheeled"] = wheeled;
  j["dim"] = b.dim();
  j["spanning"] = b.spanning.size();
  std::vector<std::string> reps;
  for (std::size_t i = 0; i < b.dim(); ++i) reps.push_back(b.rep_key(i));
  j["basis"] = reps;
  return j.dump(2);
}

}  // namespace opf
