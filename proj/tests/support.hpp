#pragma once

// Helpers shared by the unit tests, the property suite and the acceptance
// runner: random generator trees and independent counting oracles.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "opf/cobar.hpp"
#include "opf/presentation.hpp"
#include "opf/term.hpp"

namespace opf::testing {

inline long factorial(int n) {
  if (n <= 0) return 1;  // (-1)! = 0! = 1
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// (i-1)! counts cyclic orders of i inputs, with (-1)! = 1.
inline long cyclic_orders(int i) { return i == 0 ? 1 : factorial(i - 1); }

// Wheeled Ass: inputs split into a cyclically ordered left part and right
// part of the wheel.
inline long ass_wheeled_dim(int n) {
  long s = 0;
  for (int i = 0; i <= n; ++i) s += binomial(n, i) * cyclic_orders(i) * cyclic_orders(n - i);
  return s;
}
inline long ass_wheeled_dual_dim(int n) {
  long s = 0;
  for (int i = 1; i <= n - 1; ++i) s += binomial(n, i) * cyclic_orders(i) * cyclic_orders(n - i);
  return s;
}

// Random binary tree over labels 1..n (and "@" when wheeled) with random
// generator ids, partners included.
inline Term random_tree(std::mt19937& rng, int n, bool wheeled, const GeneratorSet& gens) {
  std::vector<Term> items;
  for (int i = 1; i <= n; ++i) items.push_back(Term::leaf(i));
  if (wheeled) items.push_back(Term::wheel());
  std::shuffle(items.begin(), items.end(), rng);
  const auto& all = gens.all();
  while (items.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, items.size() - 2);
    std::size_t i = pick(rng);
    const Generator& g = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    Term node = Term::node(g.id, {items[i], items[i + 1]});
    items.erase(items.begin() + static_cast<long>(i), items.begin() + static_cast<long>(i) + 2);
    items.insert(items.begin() + static_cast<long>(i), node);
  }
  return items.front();
}

inline Perm random_perm(std::mt19937& rng, int n) {
  Perm p = identity_perm(n);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Unlabeled census of bubble-tree shapes, read from cobar_shapes strings:
// leaves forgotten, children unordered, wheel chains up to rotation.
class ShapeCode {
 public:
  explicit ShapeCode(const std::string& s) : s_(s) {}

  std::string code() {
    pos_ = 0;
    Node root = parse();
    if (root.kind == '<') return "<" + tree_code(root) + ">";
    // A wheel chain: root, then the bubble holding the chain slot, and so on.
    std::vector<std::string> ring;
    const Node* cur = &root;
    while (true) {
      std::vector<std::string> hang;
      const Node* next = nullptr;
      for (const auto& c : cur->kids) {
        if (c.kind == '@') continue;
        if (contains_wheel(c)) next = &c;
        else hang.push_back(item_code(c));
      }
      std::sort(hang.begin(), hang.end());
      std::string h = "[";
      for (const auto& x : hang) h += x;
      ring.push_back(h + "]");
      if (!next) break;
      cur = next;
    }
    std::string best;
    for (std::size_t r = 0; r < ring.size(); ++r) {
      std::string s;
      for (std::size_t i = 0; i < ring.size(); ++i) s += ring[(r + i) % ring.size()];
      if (best.empty() || s < best) best = s;
    }
    return "@" + best;
  }

 private:
  struct Node {
    char kind;  // '{', '<', 'x' leaf, '@'
    std::vector<Node> kids;
  };

  Node parse() {
    char c = s_[pos_];
    if (c == '{' || c == '<') {
      ++pos_;
      Node n{c, {}};
      while (s_[pos_] != '}' && s_[pos_] != '>') {
        if (s_[pos_] == ' ') {
          ++pos_;
          continue;
        }
        n.kids.push_back(parse());
      }
      ++pos_;
      return n;
    }
    if (c == '@') {
      ++pos_;
      return {'@', {}};
    }
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return {'x', {}};
  }

  static bool contains_wheel(const Node& n) {
    if (n.kind == '@') return true;
    return std::any_of(n.kids.begin(), n.kids.end(), contains_wheel);
  }

  std::string item_code(const Node& n) {
    if (n.kind == 'x') return "x";
    return "{" + tree_code(n) + "}";
  }
  std::string tree_code(const Node& n) {
    std::vector<std::string> parts;
    for (const auto& c : n.kids) parts.push_back(item_code(c));
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) out += p;
    return out;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

// Number of unlabeled shapes per degree.
inline std::map<int, int> unlabeled_census(int n, bool wheeled) {
  std::map<int, std::set<std::string>> seen;
  for (const auto& [deg, s] : cobar_shapes(n, wheeled)) seen[deg].insert(ShapeCode(s).code());
  std::map<int, int> out;
  for (const auto& [deg, codes] : seen) out[deg] = static_cast<int>(codes.size());
  return out;
}

// The fixture cycle: the six leaf labelings of {(c a (l b {(l c @)}))}.
inline LinComb obstruction_cycle() {
  LinComb x;
  for (const Perm& p : all_perms(3))
    x.add("{(c " + std::to_string(p[0]) + " (l " + std::to_string(p[1]) + " {(l " + std::to_string(p[2]) + " @)}))}", 1);
  return x;
}

}  // namespace opf::testing
