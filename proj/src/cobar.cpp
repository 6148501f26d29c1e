#include "opf/cobar.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <set>

namespace opf {

namespace {

constexpr int kWheelSlot = INT_MIN;

// Undecorated bubble tree.  slots[j] > 0 is a leaf, kWheelSlot the
// cobar-level wheel, anything else -(index into kids) - 1.
struct Shape {
  bool wheeled = false;
  std::vector<int> slots;
  std::vector<Shape> kids;
};

using Block = std::vector<int>;

void set_partitions(const Block& items, std::size_t i, std::vector<Block>& cur, std::vector<std::vector<Block>>& out) {
  if (i == items.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t b = 0; b < cur.size(); ++b) {
    cur[b].push_back(items[i]);
    set_partitions(items, i + 1, cur, out);
    cur[b].pop_back();
  }
  cur.push_back({items[i]});
  set_partitions(items, i + 1, cur, out);
  cur.pop_back();
}

// Blocks come out ordered by their smallest element.
std::vector<std::vector<Block>> set_partitions(const Block& items) {
  std::vector<std::vector<Block>> out;
  std::vector<Block> cur;
  set_partitions(items, 0, cur, out);
  return out;
}

std::vector<Shape> trees(const Block& labels);

// All ways to fill slots with the given blocks: singletons become leaves,
// larger blocks become subtrees.
void fill(const std::vector<Block>& blocks, std::size_t i, Shape& cur, std::vector<Shape>& out) {
  if (i == blocks.size()) {
    out.push_back(cur);
    return;
  }
  if (blocks[i].size() == 1) {
    cur.slots.push_back(blocks[i][0]);
    fill(blocks, i + 1, cur, out);
    cur.slots.pop_back();
    return;
  }
  for (const Shape& sub : trees(blocks[i])) {
    cur.slots.push_back(-static_cast<int>(cur.kids.size()) - 1);
    cur.kids.push_back(sub);
    fill(blocks, i + 1, cur, out);
    cur.kids.pop_back();
    cur.slots.pop_back();
  }
}

std::vector<Shape> trees(const Block& labels) {
  std::vector<Shape> out;
  for (const auto& part : set_partitions(labels)) {
    if (part.size() < 2) continue;
    Shape s;
    fill(part, 0, s, out);
  }
  return out;
}

std::vector<Block> subsets_with(const Block& items, bool must_hold_first) {
  std::vector<Block> out;
  const std::size_t n = items.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (must_hold_first && !(mask & 1u)) continue;
    Block b;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) b.push_back(items[i]);
    out.push_back(b);
  }
  return out;
}

// Chains of cycle bubbles hanging the given labels; the first bubble of
// the chain takes a set containing the smallest label when `first` is set.
std::vector<Shape> cycle_chains(const Block& remaining, bool first) {
  std::vector<Shape> out;
  for (const Block& h : subsets_with(remaining, first)) {
    Block rest;
    std::set_difference(remaining.begin(), remaining.end(), h.begin(), h.end(), std::back_inserter(rest));
    std::vector<Shape> below;
    if (rest.empty()) {
      below.push_back(Shape{});  // placeholder: the wheel slot
    } else {
      below = cycle_chains(rest, false);
    }
    for (const auto& part : set_partitions(h)) {
      std::vector<Shape> hangs;
      Shape base;
      fill(part, 0, base, hangs);
      for (const Shape& low : below) {
        for (Shape s : hangs) {
          Shape c;
          if (rest.empty()) {
            c.slots.push_back(kWheelSlot);
          } else {
            c.slots.push_back(-1);
            c.kids.push_back(low);
          }
          // Re-index hanging subtrees after the chain child.
          for (int v : s.slots) {
            if (v > 0) c.slots.push_back(v);
            else {
              c.slots.push_back(-static_cast<int>(c.kids.size()) - 1);
              c.kids.push_back(s.kids[-v - 1]);
            }
          }
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

std::vector<Shape> wheeled_tops(const Block& labels) {
  std::vector<Shape> out;
  for (const auto& part : set_partitions(labels)) {
    Shape s;
    s.wheeled = true;
    fill(part, 0, s, out);
  }
  return out;
}

int count_operadic(const Shape& s) {
  int n = s.wheeled ? 0 : 1;
  for (const auto& k : s.kids) n += count_operadic(k);
  return n;
}

std::string describe(const Shape& s) {
  std::string out = s.wheeled ? "<" : "{";
  for (std::size_t j = 0; j < s.slots.size(); ++j) {
    if (j) out += ' ';
    int v = s.slots[j];
    if (v == kWheelSlot) out += '@';
    else if (v > 0) out += std::to_string(v);
    else out += describe(s.kids[-v - 1]);
  }
  out += s.wheeled ? ">" : "}";
  return out;
}

// Builds the graph of a shape; returns the bubble index.  All edges are
// oriented; the caller recolors them for the double cobar.
int to_graph(const Shape& s, int out, int wheel_edge, BubbleGraph& g) {
  int self = static_cast<int>(g.bubbles.size());
  g.bubbles.emplace_back();
  g.bubbles[self].wheeled = s.wheeled;
  g.bubbles[self].out = out;
  std::vector<Slot> slots;
  for (int v : s.slots) {
    if (v == kWheelSlot) {
      slots.push_back(Slot::to(wheel_edge));
    } else if (v > 0) {
      slots.push_back(Slot::leaf(v));
    } else {
      g.oriented.push_back(1);
      int e = g.edge_count() - 1;
      slots.push_back(Slot::to(e));
      to_graph(s.kids[-v - 1], e, wheel_edge, g);
    }
  }
  g.bubbles[self].slots = slots;
  return self;
}

BubbleGraph shape_graph(const Shape& s, bool cyclic) {
  BubbleGraph g;
  int wheel = -1;
  if (cyclic) {
    g.oriented.push_back(1);
    wheel = 0;
  }
  to_graph(s, cyclic ? wheel : -1, wheel, g);
  return g;
}

void remove_edge(BubbleGraph& g, int e, std::vector<int>& orientation) {
  auto fix = [&](int& id) {
    if (id > e) --id;
  };
  for (auto& b : g.bubbles) {
    if (b.out == e) b.out = -1;
    else fix(b.out);
    for (auto& s : b.slots)
      if (s.edge) fix(s.value);
  }
  g.oriented.erase(g.oriented.begin() + e);
  orientation.erase(std::remove(orientation.begin(), orientation.end(), e), orientation.end());
  for (auto& id : orientation) fix(id);
}

struct Element {
  std::string key;
  BubbleGraph graph;
  std::vector<int> orientation;
  std::vector<int> types;
  std::vector<int> leaf_types;
};

Element describe_element(BubbleGraph g, const OperadModel& model, BubbleMode mode, bool twist, int n) {
  Element el;
  el.orientation = standard_orientation(g, model, mode);
  LinComb c = canonical_form(g, el.orientation, model, mode, twist);
  if (c.size() != 1 || c.terms().begin()->second != 1)
    throw std::logic_error("enumerated bubble tree is not in canonical form: " + c.to_string());
  el.key = c.terms().begin()->first;
  const GeneratorSet& gens = model.generators();
  std::vector<std::string> prim = gens.primaries();
  el.types.assign(prim.size(), 0);
  el.leaf_types.assign(n, -1);
  for (const auto& b : g.bubbles) {
    std::size_t dec = b.dec.front().first;
    std::vector<int> t = model.type_counts(b.arity(), b.wheeled, dec);
    for (std::size_t i = 0; i < t.size(); ++i) el.types[i] += t[i];
    for (const auto& [slot, id] : leaf_parents(model.basis(b.arity(), b.wheeled).rep(dec))) {
      const Slot& s = b.slots[slot - 1];
      if (!s.edge) el.leaf_types[s.value - 1] = static_cast<int>(std::find(prim.begin(), prim.end(), id) - prim.begin());
    }
  }
  el.graph = std::move(g);
  return el;
}

// Calls f on every decoration of the shape graph.
void decorate(BubbleGraph& g, const OperadModel& model, std::size_t b, const std::function<void(BubbleGraph&)>& f) {
  if (b == g.bubbles.size()) {
    f(g);
    return;
  }
  Bubble& x = g.bubbles[b];
  std::size_t dim = model.dim(x.arity(), x.wheeled);
  for (std::size_t i = 0; i < dim; ++i) {
    g.bubbles[b].dec = {{i, Rational(1)}};
    decorate(g, model, b + 1, f);
  }
}

struct Assembly {
  ChainComplex complex;
  std::vector<std::vector<Element>> elements;  // by part
};

Assembly collect(const OperadModel& model, int n, int lo, int hi, const std::vector<std::pair<BubbleGraph, int>>& shapes,
                 BubbleMode mode, bool twist) {
  Assembly a;
  a.elements.resize(hi - lo + 1);
  for (auto [g, degree] : shapes) {
    decorate(g, model, 0, [&](BubbleGraph& dg) {
      if (degree < lo || degree > hi) throw std::logic_error("bubble tree outside the degree range");
      a.elements[degree - lo].push_back(describe_element(dg, model, mode, twist, n));
    });
  }
  for (int k = lo; k <= hi; ++k) {
    auto& els = a.elements[k - lo];
    std::sort(els.begin(), els.end(), [](const Element& x, const Element& y) { return x.key < y.key; });
    for (std::size_t i = 1; i < els.size(); ++i)
      if (els[i].key == els[i - 1].key) throw std::logic_error("duplicate basis element " + els[i].key);
    DegreePart p;
    p.degree = k;
    for (const auto& e : els) {
      p.basis.push_back(e.key);
      p.types.push_back(e.types);
      p.leaf_types.push_back(e.leaf_types);
    }
    a.complex.parts.push_back(std::move(p));
  }
  return a;
}

void add_column(SparseMatrix& m, std::size_t col, const LinComb& x, const Rational& scale,
                const std::map<std::string, std::size_t>& rows, std::set<std::size_t>* touched) {
  for (const auto& [k, c] : x.terms()) {
    auto it = rows.find(k);
    if (it == rows.end()) throw std::logic_error("differential produced " + k + ", which is not a basis element");
    m.add(it->second, col, scale * c);
    if (touched) touched->insert(it->second);
  }
}

std::map<std::string, std::size_t> row_index(const DegreePart* p) {
  std::map<std::string, std::size_t> idx;
  if (p)
    for (std::size_t i = 0; i < p->basis.size(); ++i) idx[p->basis[i]] = i;
  return idx;
}

// Merges the bubble at the source of edge e into its target.
BubbleGraph contract_edge(const BubbleGraph& g, int e, const OperadModel& model, std::vector<int>& orientation,
                          BuildAudit* audit) {
  GraphFrame f = frame(g);
  const int B = f.source[e];
  const int A = f.target[e];
  BubbleGraph h = g;
  Bubble& a = h.bubbles[A];
  const int s = static_cast<int>(std::find(a.slots.begin(), a.slots.end(), Slot::to(e)) - a.slots.begin());
  if (audit) ++audit->structure_lookups;
  if (A == B) {
    SparseVec dec = model.contract(a.arity(), a.dec.front().first, s + 1);
    a.slots.erase(a.slots.begin() + s);
    a.dec = std::move(dec);
    a.wheeled = true;
    a.out = -1;
    remove_edge(h, e, orientation);
    return h;
  }
  const Bubble& b = g.bubbles[B];
  SparseVec dec = a.wheeled ? model.wcompose(a.arity(), a.dec.front().first, s + 1, b.arity(), b.dec.front().first)
                            : model.compose(a.arity(), a.dec.front().first, s + 1, b.arity(), b.dec.front().first);
  std::vector<Slot> slots(a.slots.begin(), a.slots.begin() + s);
  slots.insert(slots.end(), b.slots.begin(), b.slots.end());
  slots.insert(slots.end(), a.slots.begin() + s + 1, a.slots.end());
  a.slots = std::move(slots);
  a.dec = std::move(dec);
  h.bubbles.erase(h.bubbles.begin() + B);
  remove_edge(h, e, orientation);
  return h;
}

void finish_header(ChainComplex& c, const OperadModel& model, int n) {
  c.operad = model.presentation().name;
  c.arity = n;
  c.type_names = model.generators().primaries();
}

}  // namespace

const DegreePart* ChainComplex::part(int degree) const {
  for (const auto& p : parts)
    if (p.degree == degree) return &p;
  return nullptr;
}

std::size_t ChainComplex::size(int degree) const {
  const DegreePart* p = part(degree);
  return p ? p->size() : 0;
}

SparseMatrix ChainComplex::d(int degree) const {
  const DegreePart* p = part(degree);
  if (p && p->d.rows() == size(degree - 1) && p->d.cols() == p->size()) return p->d;
  return SparseMatrix(size(degree - 1), size(degree));
}

long ChainComplex::euler() const {
  long e = 0;
  for (const auto& p : parts) e += (p.degree % 2 == 0 ? 1 : -1) * static_cast<long>(p.size());
  return e;
}

std::size_t ChainComplex::index_of(int degree, const std::string& key) const {
  const DegreePart* p = part(degree);
  if (p) {
    auto it = std::lower_bound(p->basis.begin(), p->basis.end(), key);
    if (it != p->basis.end() && *it == key) return static_cast<std::size_t>(it - p->basis.begin());
  }
  throw std::invalid_argument("'" + key + "' is not a basis element in degree " + std::to_string(degree));
}

std::vector<std::pair<int, std::string>> cobar_shapes(int n, bool wheeled) {
  Block labels;
  for (int i = 1; i <= n; ++i) labels.push_back(i);
  std::vector<std::pair<int, std::string>> out;
  if (!wheeled) {
    for (const auto& s : trees(labels)) out.emplace_back(count_operadic(s), describe(s));
  } else {
    for (const auto& s : cycle_chains(labels, true)) out.emplace_back(count_operadic(s), describe(s));
    for (const auto& s : wheeled_tops(labels)) out.emplace_back(count_operadic(s), describe(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ChainComplex build_cobar(const OperadModel& model, int n, bool wheeled, bool sgn_twist, BuildAudit* audit) {
  if (n < (wheeled ? 1 : 2)) throw std::invalid_argument("cobar complex needs arity >= " + std::to_string(wheeled ? 1 : 2));
  model.guards().check(n, wheeled);
  Block labels;
  for (int i = 1; i <= n; ++i) labels.push_back(i);
  std::vector<std::pair<BubbleGraph, int>> shapes;
  if (!wheeled) {
    for (const auto& s : trees(labels)) shapes.emplace_back(shape_graph(s, false), count_operadic(s));
  } else {
    for (const auto& s : cycle_chains(labels, true)) shapes.emplace_back(shape_graph(s, true), count_operadic(s));
    for (const auto& s : wheeled_tops(labels)) shapes.emplace_back(shape_graph(s, false), count_operadic(s));
  }
  const int lo = wheeled ? 0 : 1;
  const int hi = wheeled ? n : n - 1;
  // The sign twist is the global character of S_n; it commutes with d and
  // leaves the keys and matrices as they are.
  Assembly a = collect(model, n, lo, hi, shapes, BubbleMode::Cobar, false);
  ChainComplex& c = a.complex;
  finish_header(c, model, n);
  c.wheeled = wheeled;
  c.sgn_twist = sgn_twist;
  for (int k = lo; k <= hi; ++k) {
    DegreePart& p = c.parts[k - lo];
    const DegreePart* lower = c.part(k - 1);
    auto rows = row_index(lower);
    p.d = SparseMatrix(lower ? lower->size() : 0, p.size());
    if (!lower) continue;
    for (std::size_t col = 0; col < p.size(); ++col) {
      const Element& el = a.elements[k - lo][col];
      std::set<std::size_t> touched;
      for (std::size_t pos = 0; pos < el.orientation.size(); ++pos) {
        const int e = el.orientation[pos];
        std::vector<int> orient = el.orientation;
        BubbleGraph h = contract_edge(el.graph, e, model, orient, audit);
        LinComb img = canonical_form(h, orient, model, BubbleMode::Cobar, false);
        if (audit) audit->terms += img.size();
        add_column(p.d, col, img, pos % 2 == 0 ? 1 : -1, rows, &touched);
      }
      if (audit)
        for (std::size_t r = 0; r < p.d.rows(); ++r)
          if (p.d.get(r, col) != 0 && !touched.count(r)) ++audit->unexplained_entries;
    }
  }
  return c;
}

ChainComplex build_double_cobar(const OperadModel& model, int n) {
  if (n < 2) throw std::invalid_argument("double cobar complex needs arity >= 2");
  model.guards().check(n, false);
  Block labels;
  for (int i = 1; i <= n; ++i) labels.push_back(i);
  std::vector<std::pair<BubbleGraph, int>> shapes;
  for (const auto& s : trees(labels)) {
    BubbleGraph g = shape_graph(s, false);
    const int E = g.edge_count();
    for (unsigned mask = 0; mask < (1u << E); ++mask) {
      BubbleGraph h = g;
      int internal = 0;
      for (int e = 0; e < E; ++e) {
        h.oriented[e] = (mask >> e) & 1u;
        internal += h.oriented[e];
      }
      shapes.emplace_back(h, internal);
    }
  }
  const int lo = 0, hi = n - 2;
  Assembly a = collect(model, n, lo, hi, shapes, BubbleMode::Double, false);
  ChainComplex& c = a.complex;
  finish_header(c, model, n);
  c.kind = "double";
  for (int k = lo; k <= hi; ++k) {
    DegreePart& p = c.parts[k - lo];
    const DegreePart* lower = c.part(k - 1);
    auto rows = row_index(lower);
    const std::size_t r = lower ? lower->size() : 0;
    p.d1 = SparseMatrix(r, p.size());
    p.d2 = SparseMatrix(r, p.size());
    if (lower) {
      for (std::size_t col = 0; col < p.size(); ++col) {
        const Element& el = a.elements[k - lo][col];
        for (std::size_t pos = 0; pos < el.orientation.size(); ++pos) {
          const int e = el.orientation[pos];
          const Rational sign = pos % 2 == 0 ? 1 : -1;
          std::vector<int> orient = el.orientation;
          BubbleGraph merged = contract_edge(el.graph, e, model, orient, nullptr);
          add_column(p.d1, col, canonical_form(merged, orient, model, BubbleMode::Double, false), sign, rows, nullptr);
          BubbleGraph recolored = el.graph;
          recolored.oriented[e] = 0;
          std::vector<int> orient2 = el.orientation;
          orient2.erase(orient2.begin() + static_cast<long>(pos));
          add_column(p.d2, col, canonical_form(recolored, orient2, model, BubbleMode::Double, false), sign, rows,
                     nullptr);
        }
      }
    }
    p.d = add(p.d1, p.d2);
  }
  return c;
}

bool check_d_squared(const ChainComplex& c) {
  for (const auto& p : c.parts) {
    if (!c.part(p.degree - 2)) continue;
    if (!multiply(c.d(p.degree - 1), c.d(p.degree)).is_zero()) return false;
  }
  return true;
}

bool check_anticommute(const ChainComplex& c) {
  for (const auto& p : c.parts) {
    const DegreePart* q = c.part(p.degree - 1);
    if (!q || !c.part(p.degree - 2)) continue;
    if (q->d1.rows() != c.size(p.degree - 2)) return false;
    if (!multiply(q->d1, p.d1).is_zero()) return false;
    if (!multiply(q->d2, p.d2).is_zero()) return false;
    if (!add(multiply(q->d1, p.d2), multiply(q->d2, p.d1)).is_zero()) return false;
  }
  return true;
}

ChainComplex restrict_complex(const ChainComplex& c, const std::vector<std::vector<std::size_t>>& keep) {
  if (keep.size() != c.parts.size()) throw std::invalid_argument("restriction needs one index list per degree");
  ChainComplex out = c;
  for (std::size_t j = 0; j < c.parts.size(); ++j) {
    const DegreePart& p = c.parts[j];
    DegreePart& q = out.parts[j];
    const auto& cols = keep[j];
    static const std::vector<std::size_t> none;
    const auto& rows = j ? keep[j - 1] : none;
    q.basis.clear();
    q.types.clear();
    q.leaf_types.clear();
    for (std::size_t i : cols) {
      if (i >= p.size()) throw std::out_of_range("restriction index out of range");
      q.basis.push_back(p.basis[i]);
      if (i < p.types.size()) q.types.push_back(p.types[i]);
      if (i < p.leaf_types.size()) q.leaf_types.push_back(p.leaf_types[i]);
    }
    SparseMatrix d = c.d(p.degree);
    q.d = d.restrict(rows, cols);
    if (p.d1.rows() == d.rows() && p.d1.cols() == d.cols() && p.d1.cols() > 0) {
      q.d1 = p.d1.restrict(rows, cols);
      q.d2 = p.d2.restrict(rows, cols);
    } else {
      q.d1 = SparseMatrix(rows.size(), cols.size());
      q.d2 = SparseMatrix(rows.size(), cols.size());
    }
  }
  return out;
}

ChainComplex component(const ChainComplex& c, const std::vector<int>& types) {
  std::vector<std::vector<std::size_t>> keep;
  for (const auto& p : c.parts) {
    if (p.types.size() != p.size()) throw std::invalid_argument("complex has no vertex-type data");
    keep.emplace_back();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.types[i] == types) keep.back().push_back(i);
  }
  ChainComplex out = restrict_complex(c, keep);
  out.component = types;
  return out;
}

std::vector<ChainComplex> split_by_vertex_type(const ChainComplex& c) {
  std::set<std::vector<int>> all;
  for (const auto& p : c.parts) {
    if (p.types.size() != p.size()) throw std::invalid_argument("complex has no vertex-type data");
    for (const auto& t : p.types) all.insert(t);
  }
  // The differential never changes vertex types; check before splitting.
  for (const auto& p : c.parts) {
    const DegreePart* lower = c.part(p.degree - 1);
    if (!lower) continue;
    SparseMatrix d = c.d(p.degree);
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (const auto& [col, v] : d.row(r))
        if (lower->types[r] != p.types[col]) throw std::logic_error("differential mixes vertex types");
  }
  if (c.type_names.size() < 2) return {c};
  std::vector<ChainComplex> out;
  for (const auto& t : all) out.push_back(component(c, t));
  return out;
}

}  // namespace opf
