#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opf/cobar.hpp"
#include "opf/lincomb.hpp"
#include "opf/presentation.hpp"

namespace opf {

struct DegreeHomology {
  int degree = 0;
  std::size_t size = 0;
  std::size_t rank_out = 0;  // rank of d_k
  std::size_t rank_in = 0;   // rank of d_{k+1}
  std::size_t kernel() const { return size - rank_out; }
  std::size_t dim() const { return size - rank_out - rank_in; }
};

struct HomologyReport {
  std::vector<DegreeHomology> degrees;
  std::vector<int> component;  // type counts, empty for the whole complex
  std::vector<HomologyReport> components;
  long euler_chain = 0;
  long euler_homology = 0;

  std::size_t dim(int degree) const;
  std::size_t total() const;
  bool euler_ok() const { return euler_chain == euler_homology; }
};

// Throws std::logic_error when d^2 != 0.
HomologyReport homology_dims(const ChainComplex& c, bool split = false);

struct CycleCheck {
  bool is_cycle = false;
  bool is_boundary = false;
};
// x is a combination of degree-k basis keys of c.
CycleCheck certify_cycle(const ChainComplex& c, const LinComb& x, int k);

// Kernel-modulo-image representative in degree k, reduced against the
// image and scaled to leading coefficient 1; nullopt when H_k = 0.
std::optional<LinComb> homology_witness(const ChainComplex& c, int k);

struct ComponentCheck {
  std::vector<int> types;
  std::size_t expected = 0;
  std::vector<std::pair<int, std::size_t>> homology;  // nonzero degrees
  bool pass = false;
};

struct Witness {
  int degree = 0;
  std::vector<int> component;
  LinComb cycle;
};

struct ArityVerdict {
  int arity = 0;
  int top_degree = 0;
  std::size_t expected = 0;
  HomologyReport homology;
  std::vector<ComponentCheck> components;
  bool pass = false;
  std::optional<Witness> witness;
};

struct KoszulReport {
  std::string operad;
  bool wheeled = false;
  bool sgn_twist = false;
  std::vector<std::string> type_names;
  std::vector<ArityVerdict> arities;

  bool pass() const;
};

KoszulReport koszul_report(const Presentation& p, int min_n, int max_n, bool wheeled, bool sgn_twist,
                           const Guards& g = Guards::from_env());
// Dimensions of the quadratic (or wheeled) dual in arity n, split by
// generator type counts.
std::vector<std::pair<std::vector<int>, std::size_t>> dual_components(const OperadModel& dual, int n, bool wheeled,
                                                                       const std::vector<std::string>& type_names);

// Level 1..L of every basis element, indexed like c.parts.
struct FiltrationAssignment {
  std::vector<std::vector<int>> levels;
};
// Level 1 + number of leaves hanging off generator `type`: F_1 holds the
// trees without such leaves.
FiltrationAssignment leaf_type_filtration(const ChainComplex& c, const std::string& type);

struct FiltrationReport {
  int levels = 0;
  std::vector<HomologyReport> per_level;  // homology of F_i / F_{i-1}
  std::vector<std::pair<int, std::size_t>> bounds;  // degree, sum over levels
  HomologyReport total;
  bool bound_holds = false;
};
// Throws std::invalid_argument when d raises a level.
FiltrationReport filtration_analysis(const ChainComplex& c, const FiltrationAssignment& f);

std::string to_text(const HomologyReport& r);
std::string to_json(const HomologyReport& r, int indent = -1);
std::string to_text(const KoszulReport& r);
std::string to_json(const KoszulReport& r, int indent = -1);
std::string to_text(const FiltrationReport& r);
std::string to_json(const FiltrationReport& r, int indent = -1);

}  // namespace opf
