#include "opf/presentation.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace opf {

namespace {

std::string subst(std::string pattern, const Perm& s) {
  for (auto& ch : pattern) {
    if (ch == 'x') ch = static_cast<char>('0' + s[0]);
    else if (ch == 'y') ch = static_cast<char>('0' + s[1]);
    else if (ch == 'z') ch = static_cast<char>('0' + s[2]);
  }
  return pattern;
}

std::vector<LinComb> all_orders(const std::vector<std::pair<int, std::string>>& pattern, const GeneratorSet& gens) {
  std::vector<LinComb> out;
  for (const Perm& s : all_perms(3)) {
    LinComb r;
    for (const auto& [c, t] : pattern) r.add(subst(t, s), c);
    out.push_back(canonicalize(r, gens));
  }
  return out;
}

std::map<std::string, std::size_t> index_of(const std::vector<Term>& terms) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < terms.size(); ++i) idx[canonical_string(terms[i])] = i;
  return idx;
}

SparseVec coords(const LinComb& x, const std::map<std::string, std::size_t>& idx) {
  std::map<std::size_t, Rational> acc;
  for (const auto& [k, c] : x.terms()) {
    auto it = idx.find(k);
    if (it == idx.end()) throw std::invalid_argument("term " + k + " is not in the spanning set");
    acc[it->second] += c;
  }
  SparseVec out;
  for (auto& [i, c] : acc)
    if (c != 0) out.emplace_back(i, c);
  return out;
}

LinComb from_coords(const Vec& v, const std::vector<Term>& terms) {
  LinComb out;
  for (std::size_t i = 0; i < v.size(); ++i) out.add(canonical_string(terms[i]), v[i]);
  return out;
}

std::vector<LinComb> annihilator(const std::vector<SparseVec>& rels, const std::vector<Term>& span) {
  SparseMatrix m(rels.size(), span.size());
  for (std::size_t r = 0; r < rels.size(); ++r)
    for (const auto& [c, v] : rels[r]) m.set(r, c, v * pairing_sign(span[c]));
  std::vector<LinComb> out;
  for (const Vec& v : kernel_basis(m)) out.push_back(from_coords(v, span));
  return out;
}

GeneratorSet dual_generators(const GeneratorSet& g) {
  std::vector<Generator> gens = g.all();
  for (auto& x : gens) x.swap_sign = -x.swap_sign;
  return GeneratorSet(gens);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::size_t span_rank(const std::vector<SparseVec>& vs, std::size_t dim) {
  Echelon e(dim);
  for (const auto& v : vs) e.insert(v);
  return e.rank();
}

bool same_span(const std::vector<SparseVec>& a, const std::vector<SparseVec>& b, std::size_t dim) {
  std::size_t ra = span_rank(a, dim);
  if (ra != span_rank(b, dim)) return false;
  std::vector<SparseVec> both = a;
  both.insert(both.end(), b.begin(), b.end());
  return span_rank(both, dim) == ra;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"ass", "com", "lie", "poiss"}; }

Presentation builtin(const std::string& name) {
  Presentation p;
  p.name = name;
  const std::vector<std::pair<int, std::string>> assoc_c = {{1, "(c (c x y) z)"}, {-1, "(c x (c y z))"}};
  const std::vector<std::pair<int, std::string>> jacobi = {
      {1, "(l (l x y) z)"}, {1, "(l (l y z) x)"}, {1, "(l (l z x) y)"}};
  const std::vector<std::pair<int, std::string>> leibniz = {
      {1, "(l x (c y z))"}, {-1, "(c y (l x z))"}, {-1, "(c (l x y) z)"}};
  auto append = [&](const std::vector<std::pair<int, std::string>>& pattern) {
    for (auto& r : all_orders(pattern, p.generators))
      if (!r.empty()) p.relations3.push_back(std::move(r));
  };
  if (name == "com") {
    p.generators = GeneratorSet({{"c", 1, ""}});
    append(assoc_c);
  } else if (name == "lie") {
    p.generators = GeneratorSet({{"l", -1, ""}});
    append(jacobi);
  } else if (name == "ass") {
    p.generators = GeneratorSet({{"m", 1, "o"}, {"o", 1, "m"}});
    append({{1, "(m (m x y) z)"}, {-1, "(m x (m y z))"}});
  } else if (name == "poiss") {
    p.generators = GeneratorSet({{"c", 1, ""}, {"l", -1, ""}});
    append(assoc_c);
    append(jacobi);
    append(leibniz);
  } else {
    throw std::invalid_argument("unknown operad '" + name + "' (expected ass, com, lie or poiss)");
  }
  // Drop repeats so the stored list stays readable.
  std::vector<LinComb> uniq;
  for (auto& r : p.relations3) {
    LinComb neg = r;
    neg.scale(-1);
    if (std::find(uniq.begin(), uniq.end(), r) == uniq.end() && std::find(uniq.begin(), uniq.end(), neg) == uniq.end())
      uniq.push_back(r);
  }
  p.relations3 = std::move(uniq);
  return p;
}

Presentation parse_presentation(const std::string& text, const std::string& fallback_name) {
  Presentation p;
  p.name = fallback_name;
  std::vector<Generator> gens;
  std::vector<std::pair<std::size_t, std::string>> rel3, relw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "generators" && section != "relations3" && section != "wheeled_relations1")
        throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) {
      auto eq = line.find('=');
      if (eq == std::string::npos || trim(line.substr(0, eq)) != "name")
        throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'name = ...' or a section");
      p.name = trim(line.substr(eq + 1));
    } else if (section == "generators") {
      std::istringstream ls(line);
      Generator g;
      std::string sign;
      if (!(ls >> g.id >> sign)) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'id sign'");
      if (sign == "+1" || sign == "1" || sign == "+") g.swap_sign = 1;
      else if (sign == "-1" || sign == "-") g.swap_sign = -1;
      else throw std::invalid_argument("line " + std::to_string(lineno) + ": swap sign must be +1 or -1");
      ls >> g.partner;
      gens.push_back(g);
    } else if (section == "relations3") {
      rel3.emplace_back(lineno, line);
    } else {
      relw.emplace_back(lineno, line);
    }
  }
  if (gens.empty()) throw std::invalid_argument("presentation has no generators");
  p.generators = GeneratorSet(gens);
  auto read = [&](const auto& lines, std::vector<LinComb>& dest) {
    for (const auto& [no, l] : lines) {
      try {
        LinComb r = canonicalize(LinComb::parse(l), p.generators);
        if (!r.empty()) dest.push_back(std::move(r));
      } catch (const std::exception& e) {
        throw std::invalid_argument("line " + std::to_string(no) + ": " + e.what());
      }
    }
  };
  read(rel3, p.relations3);
  read(relw, p.wheeled_relations1);
  check_presentation(p);
  return p;
}

Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open presentation file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string base = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
  return parse_presentation(ss.str(), base.substr(0, base.find('.')));
}

std::string presentation_to_text(const Presentation& p) {
  std::ostringstream out;
  out << "name = " << p.name << "\n[generators]\n";
  for (const auto& g : p.generators.all()) {
    out << g.id << ' ' << (g.swap_sign > 0 ? "+1" : "-1");
    if (!g.self_partnered()) out << ' ' << g.partner;
    out << '\n';
  }
  out << "[relations3]\n";
  for (const auto& r : p.relations3) out << r.to_string() << '\n';
  out << "[wheeled_relations1]\n";
  for (const auto& r : p.wheeled_relations1) out << r.to_string() << '\n';
  return out.str();
}

void check_presentation(const Presentation& p) {
  const GeneratorSet& g = p.generators;
  for (const auto& r : p.relations3)
    for (const auto& [k, c] : r.terms()) {
      Term t = parse_term(k);
      validate(t, g);
      if (arity(t) != 3 || is_wheeled(t)) throw std::invalid_argument("relation term " + k + " is not a plain arity-3 tree");
      if (canonical_string(canonicalize(t, g).term) != k) throw std::invalid_argument("relation term " + k + " is not canonical");
    }
  for (const auto& r : p.wheeled_relations1)
    for (const auto& [k, c] : r.terms()) {
      Term t = parse_term(k);
      validate(t, g);
      if (arity(t) != 1 || !is_wheeled(t)) throw std::invalid_argument("wheeled relation term " + k + " is not a wheeled arity-1 tree");
      if (canonical_string(canonicalize(t, g).term) != k) throw std::invalid_argument("relation term " + k + " is not canonical");
    }
  std::vector<Term> span = enumerate_shapes(3, false, g);
  auto idx = index_of(span);
  std::vector<SparseVec> rels = relation_vectors(p);
  Echelon e(span.size());
  for (const auto& v : rels) e.insert(v);
  for (const auto& r : p.relations3)
    for (const Perm& s : all_perms(3)) {
      LinComb moved;
      for (const auto& [k, c] : r.terms()) {
        SignedTerm st = apply_leaf_permutation(parse_term(k), s, false, g);
        moved.add(canonical_string(st.term), c * st.coeff);
      }
      if (!e.contains(coords(moved, idx)))
        throw std::invalid_argument("relations are not stable under the S3 action: " + moved.to_string());
    }
}

std::vector<SparseVec> relation_vectors(const Presentation& p) {
  auto idx = index_of(enumerate_shapes(3, false, p.generators));
  std::vector<SparseVec> out;
  for (const auto& r : p.relations3) out.push_back(coords(r, idx));
  return out;
}

std::vector<SparseVec> wheeled_relation_vectors(const Presentation& p) {
  auto idx = index_of(enumerate_shapes(1, true, p.generators));
  std::vector<SparseVec> out;
  for (const auto& r : p.wheeled_relations1) out.push_back(coords(r, idx));
  return out;
}

std::size_t relation_rank(const Presentation& p) {
  return span_rank(relation_vectors(p), enumerate_shapes(3, false, p.generators).size());
}

int pairing_sign(const Term& t) {
  if (!t.is_node() || t.children.size() != 2) throw std::invalid_argument("pairing_sign: expects a binary vertex");
  if (is_wheeled(t)) {
    if (arity(t) != 1) throw std::invalid_argument("pairing_sign: wheeled terms must have one input");
    return t.children[1].is_wheel() ? 1 : -1;
  }
  if (arity(t) != 3) throw std::invalid_argument("pairing_sign: expects an arity-3 tree");
  const int s = perm_sign(leaf_sequence(t));
  return t.children[0].is_node() ? s : -s;
}

Presentation quadratic_dual(const Presentation& p) {
  Presentation d;
  d.name = p.name + "!";
  d.generators = dual_generators(p.generators);
  d.relations3 = annihilator(relation_vectors(p), enumerate_shapes(3, false, p.generators));
  return d;
}

Presentation wheeled_dual(const Presentation& p) {
  Presentation d = quadratic_dual(p);
  d.wheeled_relations1 = annihilator(wheeled_relation_vectors(p), enumerate_shapes(1, true, p.generators));
  return d;
}

bool isomorphic(const Presentation& a, const Presentation& b) {
  const auto& ga = a.generators.all();
  const auto& gb = b.generators.all();
  if (ga.size() != gb.size()) return false;
  const std::size_t k = ga.size();
  std::vector<Term> span3 = enumerate_shapes(3, false, b.generators);
  std::vector<Term> span1 = enumerate_shapes(1, true, b.generators);
  auto idx3 = index_of(span3);
  auto idx1 = index_of(span1);
  std::vector<std::size_t> phi(k);
  std::iota(phi.begin(), phi.end(), 0);
  do {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      auto lambda = [&](std::size_t i) { return (mask >> i) & 1u ? -1 : 1; };
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        const Generator& x = ga[i];
        const Generator& y = gb[phi[i]];
        if (x.self_partnered() != y.self_partnered()) ok = false;
        else if (x.self_partnered()) ok = x.swap_sign == y.swap_sign;
        else {
          std::size_t j = a.generators.index_of(x.partner);
          ok = gb[phi[j]].id == y.partner && y.swap_sign == x.swap_sign * lambda(i) * lambda(j);
        }
      }
      if (!ok) continue;
      auto transport = [&](const std::vector<LinComb>& rels, const std::map<std::string, std::size_t>& idx) {
        std::vector<SparseVec> out;
        for (const auto& r : rels) {
          LinComb moved;
          for (const auto& [key, c] : r.terms()) {
            Rational f = c;
            std::function<Term(const Term&)> walk = [&](const Term& t) -> Term {
              if (!t.is_node()) return t;
              std::size_t i = a.generators.index_of(t.dec);
              f *= lambda(i);
              return Term::node(gb[phi[i]].id, {walk(t.children[0]), walk(t.children[1])});
            };
            Term mapped = walk(parse_term(key));
            SignedTerm st = canonicalize(mapped, b.generators);
            moved.add(canonical_string(st.term), f * st.coeff);
          }
          out.push_back(coords(moved, idx));
        }
        return out;
      };
      if (!same_span(transport(a.relations3, idx3), relation_vectors(b), span3.size())) continue;
      if (!same_span(transport(a.wheeled_relations1, idx1), wheeled_relation_vectors(b), span1.size())) continue;
      return true;
    }
  } while (std::next_permutation(phi.begin(), phi.end()));
  return false;
}

}  // namespace opf
