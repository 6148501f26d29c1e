#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace opf {

// GMP keeps mpq_class canonical after every arithmetic operation.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Always "p/q", also for integers.
inline std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  if (q.set_str(std::string(s), 10) != 0)
    throw std::invalid_argument("bad rational '" + std::string(s) + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  q.canonicalize();
  return q;
}

}  // namespace opf
