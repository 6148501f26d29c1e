#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace opf {

// One-line notation, values 1..n: p[i-1] = p(i).
using Perm = std::vector<int>;

inline Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 1);
  return p;
}

inline bool is_perm(const Perm& p) {
  std::vector<bool> seen(p.size() + 1, false);
  for (int v : p) {
    if (v < 1 || v > static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline int perm_sign(const Perm& p) {
  int s = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j] - 1) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) s = -s;
  }
  return s;
}

// (a ∘ b)(i) = a(b(i))
inline Perm compose(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compose: size mismatch");
  Perm c(a.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i] - 1];
  return c;
}

inline Perm inverse(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i] - 1] = static_cast<int>(i) + 1;
  return q;
}

inline std::vector<Perm> all_perms(int n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Sign of the permutation taking sequence `from` to sequence `to`; both must
// hold the same distinct items.
template <class T>
int reorder_sign(const std::vector<T>& from, const std::vector<T>& to) {
  if (from.size() != to.size()) throw std::invalid_argument("reorder_sign: size mismatch");
  Perm p(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto it = std::find(to.begin(), to.end(), from[i]);
    if (it == to.end()) throw std::invalid_argument("reorder_sign: item missing");
    p[i] = static_cast<int>(it - to.begin()) + 1;
  }
  if (!is_perm(p)) throw std::invalid_argument("reorder_sign: repeated item");
  return perm_sign(p);
}

}  // namespace opf
