#pragma once

#include <map>
#include <string>
#include <string_view>

#include "opf/rational.hpp"
#include "opf/term.hpp"

namespace opf {

// Finite combination of terms keyed by their serialized form.
class LinComb {
 public:
  LinComb() = default;
  LinComb(const std::string& key, const Rational& c) { add(key, c); }

  void add(const std::string& key, const Rational& c);
  void add(const LinComb& other, const Rational& scale = 1);
  void scale(const Rational& c);

  Rational coeff(const std::string& key) const;
  const std::map<std::string, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // "c1*t1 + c2*t2 - c3*t3", or "0".  Signs between terms are ASCII '-'.
  std::string to_string() const;
  // Accepts the text form; also accepts a bare term (coefficient 1), a
  // leading sign and the unicode minus.  Keys are stored as written.
  static LinComb parse(std::string_view s);

  friend bool operator==(const LinComb&, const LinComb&) = default;

 private:
  std::map<std::string, Rational> terms_;
};

// Parses every key as a generator tree and canonicalizes it.
LinComb canonicalize(const LinComb& x, const GeneratorSet& gens);

}  // namespace opf
