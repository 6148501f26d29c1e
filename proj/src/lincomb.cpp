#include "opf/lincomb.hpp"

#include <cctype>

namespace opf {

void LinComb::add(const std::string& key, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(key, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

void LinComb::add(const LinComb& other, const Rational& s) {
  for (const auto& [k, c] : other.terms_) add(k, s * c);
}

void LinComb::scale(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return;
  }
  for (auto& [k, v] : terms_) v *= c;
}

Rational LinComb::coeff(const std::string& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::string LinComb::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (first) {
      out += opf::to_string(c);
    } else {
      out += c < 0 ? " - " : " + ";
      out += opf::to_string(abs(c));
    }
    out += '*';
    out += k;
    first = false;
  }
  return out;
}

LinComb LinComb::parse(std::string_view s) {
  LinComb out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  // U+2212 MINUS SIGN
  const std::string_view uminus = "\xE2\x88\x92";
  auto read_sign = [&](bool required) -> int {
    skip_ws();
    if (pos < s.size() && s[pos] == '+') {
      ++pos;
      return 1;
    }
    if (pos < s.size() && s[pos] == '-') {
      ++pos;
      return -1;
    }
    if (s.substr(pos, uminus.size()) == uminus) {
      pos += uminus.size();
      return -1;
    }
    if (required) throw ParseError("expected '+' or '-'", pos);
    return 1;
  };

  const std::size_t b = s.find_first_not_of(" \t\r\n");
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  if (b != std::string_view::npos && s.substr(b, e - b + 1) == "0") return out;
  skip_ws();
  if (pos == s.size()) throw ParseError("empty combination", pos);
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == s.size()) break;
    int sign = read_sign(!first);
    skip_ws();
    Rational c = 1;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t start = pos;
      while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
      std::string_view num = s.substr(start, pos - start);
      skip_ws();
      if (pos < s.size() && s[pos] == '*') {
        try {
          c = parse_rational(num);
        } catch (const std::invalid_argument&) {
          throw ParseError("bad coefficient '" + std::string(num) + "'", start);
        }
        ++pos;
        skip_ws();
      } else {
        // A bare numbered leaf is not a valid summand.
        throw ParseError("expected '*' after coefficient", pos);
      }
    }
    Term t = parse_term_at(s, pos);
    out.add(canonical_string(t), sign * c);
    first = false;
  }
  return out;
}

LinComb canonicalize(const LinComb& x, const GeneratorSet& gens) {
  LinComb out;
  for (const auto& [k, c] : x.terms()) {
    Term t = parse_term(k);
    validate(t, gens);
    SignedTerm st = canonicalize(t, gens);
    out.add(canonical_string(st.term), c * st.coeff);
  }
  return out;
}

}  // namespace opf
