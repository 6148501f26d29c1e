#include "opf/term.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <functional>
#include <set>

namespace opf {

GeneratorSet::GeneratorSet(std::vector<Generator> gens) : gens_(std::move(gens)) {
  std::set<std::string> ids;
  for (const auto& g : gens_) {
    if (g.id.empty()) throw std::invalid_argument("empty generator id");
    if (g.id[0] == 'b' && g.id.size() > 1 &&
        std::all_of(g.id.begin() + 1, g.id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("generator id '" + g.id + "' clashes with basis indices");
    if (g.swap_sign != 1 && g.swap_sign != -1)
      throw std::invalid_argument("swap sign of '" + g.id + "' must be +1 or -1");
    if (!ids.insert(g.id).second) throw std::invalid_argument("duplicate generator '" + g.id + "'");
  }
  for (const auto& g : gens_) {
    if (g.self_partnered()) continue;
    if (!has(g.partner)) throw std::invalid_argument("partner '" + g.partner + "' of '" + g.id + "' is missing");
    const Generator& p = get(g.partner);
    if (p.partner_id() != g.id || p.swap_sign != g.swap_sign)
      throw std::invalid_argument("generators '" + g.id + "' and '" + p.id + "' are not a consistent pair");
  }
}

const Generator& GeneratorSet::get(const std::string& id) const {
  for (const auto& g : gens_)
    if (g.id == id) return g;
  throw std::invalid_argument("unknown generator '" + id + "'");
}

bool GeneratorSet::has(const std::string& id) const {
  return std::any_of(gens_.begin(), gens_.end(), [&](const Generator& g) { return g.id == id; });
}

std::size_t GeneratorSet::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].id == id) return i;
  throw std::invalid_argument("unknown generator '" + id + "'");
}

bool GeneratorSet::is_primary(const std::string& id) const {
  const Generator& g = get(id);
  return g.self_partnered() || index_of(id) < index_of(g.partner);
}

std::vector<std::string> GeneratorSet::primaries() const {
  std::vector<std::string> out;
  for (const auto& g : gens_)
    if (is_primary(g.id)) out.push_back(g.id);
  return out;
}

Term Term::leaf(int label) {
  if (label < 1) throw std::invalid_argument("leaf labels must be positive");
  Term t;
  t.kind = Kind::Leaf;
  t.label = label;
  return t;
}

Term Term::wheel() {
  Term t;
  t.kind = Kind::Wheel;
  return t;
}

Term Term::node(std::string dec, std::vector<Term> children) {
  if (children.size() < 2) throw std::invalid_argument("vertex '" + dec + "' needs at least two children");
  Term t;
  t.kind = Kind::Node;
  t.dec = std::move(dec);
  t.children = std::move(children);
  return t;
}

Term Term::bubble(Term content, bool wheeled) {
  Term t;
  t.kind = wheeled ? Kind::WheeledBubble : Kind::Bubble;
  t.children.push_back(std::move(content));
  return t;
}

namespace {

void write(const Term& t, std::string& out) {
  switch (t.kind) {
    case Term::Kind::Leaf:
      out += std::to_string(t.label);
      return;
    case Term::Kind::Wheel:
      out += '@';
      return;
    case Term::Kind::Bubble:
    case Term::Kind::WheeledBubble:
      if (t.children.size() != 1) throw std::invalid_argument("bubble must hold exactly one term");
      out += t.kind == Term::Kind::Bubble ? '{' : '<';
      write(t.children[0], out);
      out += t.kind == Term::Kind::Bubble ? '}' : '>';
      return;
    case Term::Kind::Node:
      if (t.children.size() < 2) throw std::invalid_argument("vertex '" + t.dec + "' needs at least two children");
      if (t.dec.empty()) throw std::invalid_argument("vertex without decoration");
      out += '(';
      out += t.dec;
      for (const auto& c : t.children) {
        out += ' ';
        write(c, out);
      }
      out += ')';
      return;
  }
}

bool is_dec_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Term parse_prefix(std::size_t& pos) {
    pos_ = pos;
    Term t = term();
    pos = pos_;
    return t;
  }

  Term parse() {
    skip_ws();
    Term t = term();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  Term term() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && is_dec_char(s_[pos_])) ++pos_;
      if (pos_ == start) throw ParseError("expected decoration", pos_);
      std::string dec(s_.substr(start, pos_ - start));
      std::vector<Term> kids;
      while (true) {
        std::size_t before = pos_;
        skip_ws();
        if (peek() == ')') {
          ++pos_;
          break;
        }
        if (pos_ == before) throw ParseError("expected space", pos_);
        kids.push_back(term());
      }
      if (kids.size() < 2) throw ParseError("vertex needs at least two children", pos_);
      return Term::node(std::move(dec), std::move(kids));
    }
    if (c == '@') {
      ++pos_;
      return Term::wheel();
    }
    if (c == '{' || c == '<') {
      ++pos_;
      skip_ws();
      Term inner = term();
      skip_ws();
      expect(c == '{' ? '}' : '>');
      return Term::bubble(std::move(inner), c == '<');
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      long v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + (s_[pos_] - '0');
        if (v > 1000000) throw ParseError("leaf label too large", start);
        ++pos_;
      }
      if (v < 1) throw ParseError("leaf labels must be positive", start);
      return Term::leaf(static_cast<int>(v));
    }
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

int sort_key(const Term& t) { return min_label(t); }

void collect_labels(const Term& t, std::vector<int>& out) {
  if (t.is_leaf()) out.push_back(t.label);
  for (const auto& c : t.children) collect_labels(c, out);
}

Rational canonicalize_in_place(Term& t, const GeneratorSet& gens) {
  if (t.kind != Term::Kind::Node) {
    if (t.is_bubble()) throw std::invalid_argument("canonicalize: bubbles are not generator vertices");
    return Rational(1);
  }
  if (t.children.size() != 2) throw std::invalid_argument("generator vertex '" + t.dec + "' must be binary");
  const Generator& g = gens.get(t.dec);
  Rational sign = 1;
  for (auto& c : t.children) sign *= canonicalize_in_place(c, gens);
  if (!gens.is_primary(g.id)) {
    std::swap(t.children[0], t.children[1]);
    t.dec = g.partner;
    sign *= g.swap_sign;
  } else if (g.self_partnered() && sort_key(t.children[1]) < sort_key(t.children[0])) {
    std::swap(t.children[0], t.children[1]);
    sign *= g.swap_sign;
  }
  return sign;
}

Term relabel_map(const Term& t, const std::function<Term(int)>& f) {
  if (t.is_leaf()) return f(t.label);
  Term out = t;
  for (auto& c : out.children) c = relabel_map(c, f);
  return out;
}

bool replace_wheel(Term& t, const Term& with) {
  if (t.is_wheel()) {
    t = with;
    return true;
  }
  for (auto& c : t.children)
    if (replace_wheel(c, with)) return true;
  return false;
}

bool contains_wheel(const Term& t) {
  if (t.is_wheel()) return true;
  return std::any_of(t.children.begin(), t.children.end(), contains_wheel);
}

}  // namespace

std::string canonical_string(const Term& t) {
  std::string out;
  write(t, out);
  return out;
}

Term parse_term(std::string_view s) { return Parser(s).parse(); }

Term parse_term_at(std::string_view s, std::size_t& pos) { return Parser(s).parse_prefix(pos); }

int arity(const Term& t) {
  if (t.is_leaf()) return 1;
  int n = 0;
  for (const auto& c : t.children) n += arity(c);
  return n;
}

int wheel_count(const Term& t) {
  if (t.is_wheel()) return 1;
  int n = 0;
  for (const auto& c : t.children) n += wheel_count(c);
  return n;
}

bool is_wheeled(const Term& t) { return wheel_count(t) > 0; }

int min_label(const Term& t) {
  if (t.is_leaf()) return t.label;
  int m = INT_MAX;
  for (const auto& c : t.children) m = std::min(m, min_label(c));
  return m;
}

std::vector<int> leaf_sequence(const Term& t) {
  std::vector<int> out;
  collect_labels(t, out);
  return out;
}

void validate(const Term& t, const GeneratorSet& gens) {
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.is_bubble()) throw std::invalid_argument("unexpected bubble in generator tree");
    if (!u.is_node()) return;
    if (u.children.size() != 2) throw std::invalid_argument("vertex '" + u.dec + "' is not binary");
    gens.get(u.dec);
    for (const auto& c : u.children) walk(c);
  };
  walk(t);
  if (wheel_count(t) > 1) throw std::invalid_argument("more than one wheel in " + canonical_string(t));
  std::vector<int> labels = leaf_sequence(t);
  std::sort(labels.begin(), labels.end());
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != static_cast<int>(i) + 1)
      throw std::invalid_argument("leaf labels of " + canonical_string(t) + " are not 1..n");
}

SignedTerm canonicalize(const Term& t, const GeneratorSet& gens) {
  SignedTerm out{Rational(1), t};
  out.coeff = canonicalize_in_place(out.term, gens);
  return out;
}

Term relabel(const Term& t, const Perm& sigma) {
  return relabel_map(t, [&](int l) {
    if (l < 1 || l > static_cast<int>(sigma.size())) throw std::invalid_argument("relabel: label outside permutation");
    return Term::leaf(sigma[l - 1]);
  });
}

SignedTerm apply_leaf_permutation(const Term& t, const Perm& sigma, bool sgn_twist, const GeneratorSet& gens) {
  if (static_cast<int>(sigma.size()) != arity(t) || !is_perm(sigma))
    throw std::invalid_argument("permutation does not match arity of " + canonical_string(t));
  SignedTerm out = canonicalize(relabel(t, sigma), gens);
  if (sgn_twist) out.coeff *= perm_sign(sigma);
  return out;
}

Term graft(const Term& parent, int slot, const Term& child) {
  const int n = arity(parent);
  const int m = arity(child);
  if (slot < 1 || slot > n) throw std::out_of_range("graft: slot " + std::to_string(slot) + " out of range");
  if (is_wheeled(child)) throw std::invalid_argument("graft: child must not be wheeled");
  Term shifted = relabel_map(child, [&](int l) { return Term::leaf(l + slot - 1); });
  return relabel_map(parent, [&](int l) {
    if (l < slot) return Term::leaf(l);
    if (l == slot) return shifted;
    return Term::leaf(l + m - 1);
  });
}

Term contract_wheel(const Term& t, int slot) {
  const int n = arity(t);
  if (is_wheeled(t)) throw std::invalid_argument("contract_wheel: term is already wheeled");
  if (n < 2) throw std::invalid_argument("contract_wheel: needs at least two inputs");
  if (slot < 1 || slot > n) throw std::out_of_range("contract_wheel: slot " + std::to_string(slot) + " out of range");
  return relabel_map(t, [&](int l) {
    if (l < slot) return Term::leaf(l);
    if (l == slot) return Term::wheel();
    return Term::leaf(l - 1);
  });
}

Term rotate_wheel(const Term& t) {
  if (wheel_count(t) != 1 || !t.is_node()) throw std::invalid_argument("rotate_wheel: expects a wheeled tree");
  std::size_t k = 0;
  while (k < t.children.size() && !contains_wheel(t.children[k])) ++k;
  if (t.children[k].is_wheel()) return t;
  Term old_root = t;
  Term new_root = t.children[k];
  old_root.children[k] = Term::wheel();
  replace_wheel(new_root, old_root);
  return new_root;
}

std::vector<Term> enumerate_shapes(int n, bool wheeled, const GeneratorSet& gens) {
  if (n < 1) return {};
  const int total = wheeled ? n + 1 : n;
  if (total > 20) throw std::invalid_argument("enumerate_shapes: arity too large");
  std::vector<std::string> prim = gens.primaries();
  std::map<unsigned, std::vector<Term>> memo;
  std::function<const std::vector<Term>&(unsigned)> gen = [&](unsigned mask) -> const std::vector<Term>& {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::vector<Term> out;
    if ((mask & (mask - 1)) == 0) {
      int l = __builtin_ctz(mask) + 1;
      out.push_back(wheeled && l == total ? Term::wheel() : Term::leaf(l));
    } else {
      const unsigned low = mask & (~mask + 1);
      for (unsigned a = (mask - 1) & mask; a > 0; a = (a - 1) & mask) {
        const unsigned b = mask ^ a;
        for (const auto& id : prim) {
          if (gens.get(id).self_partnered() && !(a & low)) continue;
          const auto& left = gen(a);
          const auto& right = gen(b);
          for (const auto& x : left)
            for (const auto& y : right) out.push_back(Term::node(id, {x, y}));
        }
      }
    }
    return memo.emplace(mask, std::move(out)).first->second;
  };
  std::vector<Term> all = gen((1u << total) - 1);
  std::vector<std::pair<std::string, Term>> keyed;
  keyed.reserve(all.size());
  for (auto& t : all) keyed.emplace_back(canonical_string(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<Term> out;
  out.reserve(keyed.size());
  for (auto& [k, t] : keyed) out.push_back(std::move(t));
  return out;
}

std::map<std::string, int> vertex_counts(const Term& t) {
  std::map<std::string, int> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.is_node()) ++out[u.dec];
    for (const auto& c : u.children) walk(c);
  };
  walk(t);
  return out;
}

std::map<int, std::string> leaf_parents(const Term& t) {
  std::map<int, std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    for (const auto& c : u.children) {
      if (c.is_leaf() && u.is_node()) out[c.label] = u.dec;
      walk(c);
    }
  };
  walk(t);
  return out;
}

}  // namespace opf
