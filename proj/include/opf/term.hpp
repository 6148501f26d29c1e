#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opf/perm.hpp"
#include "opf/rational.hpp"

namespace opf {

// A binary generator.  g(a, b) = swap_sign * partner(b, a); a generator
// without a partner is its own partner.
struct Generator {
  std::string id;
  int swap_sign = 1;
  std::string partner;

  const std::string& partner_id() const { return partner.empty() ? id : partner; }
  bool self_partnered() const { return partner.empty() || partner == id; }
};

class GeneratorSet {
 public:
  GeneratorSet() = default;
  explicit GeneratorSet(std::vector<Generator> gens);

  const std::vector<Generator>& all() const { return gens_; }
  const Generator& get(const std::string& id) const;
  bool has(const std::string& id) const;
  // Partner pairs are written with their first-listed member only.
  bool is_primary(const std::string& id) const;
  std::vector<std::string> primaries() const;
  std::size_t index_of(const std::string& id) const;

 private:
  std::vector<Generator> gens_;
};

struct Term {
  enum class Kind : std::uint8_t { Leaf, Wheel, Node, Bubble, WheeledBubble };

  Kind kind = Kind::Leaf;
  int label = 0;
  std::string dec;
  std::vector<Term> children;

  static Term leaf(int label);
  static Term wheel();
  static Term node(std::string dec, std::vector<Term> children);
  static Term bubble(Term content, bool wheeled = false);

  bool is_leaf() const { return kind == Kind::Leaf; }
  bool is_wheel() const { return kind == Kind::Wheel; }
  bool is_node() const { return kind == Kind::Node; }
  bool is_bubble() const { return kind == Kind::Bubble || kind == Kind::WheeledBubble; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct SignedTerm {
  Rational coeff;
  Term term;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

std::string canonical_string(const Term& t);
Term parse_term(std::string_view s);
// Parses one term starting at pos and advances pos past it.
Term parse_term_at(std::string_view s, std::size_t& pos);

// Numbered leaves, counted through bubbles.
int arity(const Term& t);
bool is_wheeled(const Term& t);
int wheel_count(const Term& t);
// Smallest leaf label, or INT_MAX when there is none.
int min_label(const Term& t);
// Leaf labels in reading order.
std::vector<int> leaf_sequence(const Term& t);
// Checks a generator tree: binary nodes with known ids, labels exactly 1..n,
// at most one "@".
void validate(const Term& t, const GeneratorSet& gens);

SignedTerm canonicalize(const Term& t, const GeneratorSet& gens);
Term relabel(const Term& t, const Perm& sigma);
SignedTerm apply_leaf_permutation(const Term& t, const Perm& sigma, bool sgn_twist, const GeneratorSet& gens);

Term graft(const Term& parent, int slot, const Term& child);
Term contract_wheel(const Term& t, int slot);
// Moves the root of a wheeled tree one step along the wheel; the identity
// when "@" hangs directly off the root.
Term rotate_wheel(const Term& t);

std::vector<Term> enumerate_shapes(int n, bool wheeled, const GeneratorSet& gens);

// Number of vertices per generator id.
std::map<std::string, int> vertex_counts(const Term& t);
// For every numbered leaf, the decoration of its parent vertex.
std::map<int, std::string> leaf_parents(const Term& t);

}  // namespace opf
