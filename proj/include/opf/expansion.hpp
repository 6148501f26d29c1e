#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "opf/presentation.hpp"
#include "opf/qlinalg.hpp"

namespace opf {

struct Guards {
  int max_plain = 6;
  int max_wheeled = 4;

  // OPERAD_FORGE_MAX_ARITY raises both limits.
  static Guards from_env();
  // Throws GuardError when n is over the limit.
  void check(int n, bool wheeled) const;
};

class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Combination of canonical terms, normalized so the first coefficient is 1.
using TermVec = std::vector<std::pair<Term, Rational>>;

// Generating vectors of the ideal at arity n, as combinations of canonical
// trees.  Every vector holds a single relation factor.
std::vector<TermVec> ideal_generators(const Presentation& p, int n, bool wheeled, const Guards& g = {});
// The same, as coordinates over enumerate_shapes(n, wheeled).
std::vector<SparseVec> ideal_subspace(const Presentation& p, int n, bool wheeled, const Guards& g = {});

// Order in which representatives are preferred: by how many leaves hang off
// each generator (in generator order, fewer first), then by canonical string.
bool prefer(const Term& a, const Term& b, const GeneratorSet& gens);

struct ArityBasis {
  int arity = 0;
  bool wheeled = false;
  std::vector<Term> spanning;  // preference order
  std::vector<std::string> keys;
  std::map<std::string, std::size_t> index;
  std::size_t ideal_size = 0;         // number of generating vectors
  std::vector<std::size_t> reps;      // spanning positions of representatives
  std::vector<long> basis_position;   // spanning position -> basis index or -1
  std::shared_ptr<Echelon> echelon;   // ideal, pivots at the latest term

  std::size_t dim() const { return reps.size(); }
  const Term& rep(std::size_t i) const { return spanning[reps[i]]; }
  const std::string& rep_key(std::size_t i) const { return keys[reps[i]]; }
  // Spanning coordinates to basis coordinates.
  SparseVec reduce(const SparseVec& x) const;
};

ArityBasis operad_basis(const Presentation& p, int n, bool wheeled, const Guards& g = {});

// A presentation together with cached bases and structure constants.
// Thread-safe.
class OperadModel {
 public:
  explicit OperadModel(Presentation p, Guards g = Guards::from_env());

  const Presentation& presentation() const { return p_; }
  const GeneratorSet& generators() const { return p_.generators; }
  const Guards& guards() const { return guards_; }

  const ArityBasis& basis(int n, bool wheeled) const;
  std::size_t dim(int n, bool wheeled) const { return basis(n, wheeled).dim(); }

  // Reduce an arbitrary generator tree (not necessarily canonical) or a
  // combination of them.
  SparseVec reduce(const Term& t) const;
  SparseVec reduce(const LinComb& x) const;
  LinComb to_lincomb(const SparseVec& v, int n, bool wheeled) const;

  // P(n) o_slot P(m) -> P(n+m-1)
  SparseVec compose(int n, std::size_t a, int slot, int m, std::size_t b) const;
  // P_w(n) o_slot P(m) -> P_w(n+m-1)
  SparseVec wcompose(int n, std::size_t a, int slot, int m, std::size_t b) const;
  // xi_slot: P(n) -> P_w(n-1)
  SparseVec contract(int n, std::size_t a, int slot) const;
  SparseVec act(int n, bool wheeled, std::size_t a, const Perm& sigma, bool sgn_twist) const;

  // Number of vertices of each primary generator in representative a.
  std::vector<int> type_counts(int n, bool wheeled, std::size_t a) const;

  std::string basis_dump(int n, bool wheeled) const;
  std::string basis_dump_json(int n, bool wheeled) const;

 private:
  SparseVec reduce_canonical(const Term& t, int n, bool wheeled) const;

  Presentation p_;
  Guards guards_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, bool>, std::unique_ptr<ArityBasis>> bases_;
  mutable std::map<std::tuple<int, int, std::size_t, int, int, std::size_t>, SparseVec> comp_;
  mutable std::map<std::tuple<int, std::size_t, int>, SparseVec> contr_;
  mutable std::map<std::tuple<int, bool, std::size_t, Perm, bool>, SparseVec> act_;
};

}  // namespace opf
