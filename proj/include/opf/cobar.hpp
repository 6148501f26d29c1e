#pragma once

#include <string>
#include <vector>

#include "opf/bubble.hpp"
#include "opf/expansion.hpp"
#include "opf/qlinalg.hpp"

namespace opf {

struct DegreePart {
  int degree = 0;
  std::vector<std::string> basis;  // sorted canonical keys
  // Per basis element: vertex count of each primary generator.
  std::vector<std::vector<int>> types;
  // Per basis element and leaf 1..n: index of the primary generator the
  // leaf hangs off, or -1.
  std::vector<std::vector<int>> leaf_types;
  // d: this degree -> degree - 1 (rows index the lower basis).
  SparseMatrix d;
  // Double cobar only: d = d1 + d2.
  SparseMatrix d1, d2;

  std::size_t size() const { return basis.size(); }
};

struct ChainComplex {
  std::string operad;
  std::string kind = "cobar";  // or "double"
  int arity = 0;
  bool wheeled = false;
  bool sgn_twist = false;
  std::vector<std::string> type_names;
  std::vector<int> component;  // type counts when this is a split component
  std::vector<DegreePart> parts;  // consecutive degrees, ascending

  bool empty() const { return parts.empty(); }
  int min_degree() const { return parts.empty() ? 0 : parts.front().degree; }
  int max_degree() const { return parts.empty() ? -1 : parts.back().degree; }
  const DegreePart* part(int degree) const;
  std::size_t size(int degree) const;
  // d from `degree` to `degree - 1`, empty matrix of the right shape
  // outside the stored range.
  SparseMatrix d(int degree) const;
  long euler() const;
  std::size_t index_of(int degree, const std::string& key) const;
};

// Counts recorded while assembling a differential.
struct BuildAudit {
  std::size_t structure_lookups = 0;
  std::size_t terms = 0;
  std::size_t unexplained_entries = 0;  // nonzero entries without a lookup
};

ChainComplex build_cobar(const OperadModel& model, int n, bool wheeled, bool sgn_twist, BuildAudit* audit = nullptr);
ChainComplex build_double_cobar(const OperadModel& model, int n);

bool check_d_squared(const ChainComplex& c);
// Double cobar: d1^2 = 0, d2^2 = 0 and d1 d2 + d2 d1 = 0.
bool check_anticommute(const ChainComplex& c);

std::vector<ChainComplex> split_by_vertex_type(const ChainComplex& c);
ChainComplex component(const ChainComplex& c, const std::vector<int>& types);
// Keeps the listed basis elements of each part (indexed like c.parts).
ChainComplex restrict_complex(const ChainComplex& c, const std::vector<std::vector<std::size_t>>& keep);

// Shape census of the cobar basis: bubble-tree shapes per degree, ignoring
// decorations.  Used for documentation and tests.
std::vector<std::pair<int, std::string>> cobar_shapes(int n, bool wheeled);

// JSON export and import ({arity, wheeled, degrees: [...]}).
std::string to_json(const ChainComplex& c, int indent = -1);
ChainComplex from_json(const std::string& text);

}  // namespace opf
