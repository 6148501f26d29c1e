#include "opf/bubble.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>

namespace opf {

namespace {

Term substitute_leaves(const Term& t, const std::function<Term(int)>& f) {
  if (t.is_leaf()) return f(t.label);
  Term out = t;
  for (auto& c : out.children) c = substitute_leaves(c, f);
  return out;
}

std::vector<int> reading_order(const Bubble& b, std::size_t dec, const OperadModel& model, BubbleMode mode) {
  if (mode == BubbleMode::Double) return identity_perm(b.arity());
  return leaf_sequence(model.basis(b.arity(), b.wheeled).rep(dec));
}

std::size_t single_dec(const Bubble& b) {
  if (b.dec.size() != 1 || b.dec.front().second != 1)
    throw std::invalid_argument("bubble does not hold a single basis element");
  return b.dec.front().first;
}

// Wedge word by levels: breadth first from the root, slots in reading order.
std::vector<int> bfs_edges(const BubbleGraph& g, const GraphFrame& f, const std::vector<std::vector<Slot>>& slots,
                           const std::vector<std::size_t>& choice, const OperadModel& model, BubbleMode mode) {
  std::vector<int> order;
  std::deque<int> queue{f.root};
  while (!queue.empty()) {
    int b = queue.front();
    queue.pop_front();
    Bubble shaped = g.bubbles[b];
    shaped.slots = slots[b];
    for (int j : reading_order(shaped, choice[b], model, mode)) {
      const Slot& s = slots[b][j - 1];
      if (!s.edge) continue;
      if (g.oriented[s.value]) order.push_back(s.value);
      if (s.value != f.wheel) queue.push_back(f.source[s.value]);
    }
  }
  return order;
}

}  // namespace

int BubbleGraph::leaf_count() const {
  int n = 0;
  for (const auto& b : bubbles)
    for (const auto& s : b.slots)
      if (!s.edge) ++n;
  return n;
}

GraphFrame frame(const BubbleGraph& g) {
  GraphFrame f;
  const int E = g.edge_count();
  f.source.assign(E, -1);
  f.target.assign(E, -1);
  std::vector<int> tops;
  int min_leaf = INT_MAX, min_leaf_bubble = -1;
  for (int b = 0; b < static_cast<int>(g.bubbles.size()); ++b) {
    const Bubble& x = g.bubbles[b];
    if (x.slots.size() < (x.wheeled ? 1u : 2u)) throw std::invalid_argument("bubble has too few inputs");
    if (x.out < 0) tops.push_back(b);
    else {
      if (x.out >= E || f.source[x.out] != -1) throw std::invalid_argument("bad outgoing edge");
      f.source[x.out] = b;
    }
    for (const auto& s : x.slots) {
      if (s.edge) {
        if (s.value < 0 || s.value >= E || f.target[s.value] != -1) throw std::invalid_argument("bad edge slot");
        f.target[s.value] = b;
      } else if (s.value < min_leaf) {
        min_leaf = s.value;
        min_leaf_bubble = b;
      }
    }
  }
  for (int e = 0; e < E; ++e)
    if (f.source[e] < 0 || f.target[e] < 0) throw std::invalid_argument("dangling edge");
  if (tops.size() > 1) throw std::invalid_argument("several top bubbles");
  if (tops.size() == 1) {
    f.root = tops[0];
  } else {
    if (min_leaf_bubble < 0) throw std::invalid_argument("graph without leaves");
    std::vector<char> seen(g.bubbles.size(), 0);
    int b = min_leaf_bubble;
    while (!seen[b]) {
      seen[b] = 1;
      b = f.target[g.bubbles[b].out];
    }
    f.root = b;
    f.wheel = g.bubbles[b].out;
    for (const auto& x : g.bubbles)
      if (x.wheeled) throw std::invalid_argument("wheeled bubble on a wheel");
  }
  // Every bubble must hang below the root once the wheel edge is cut.
  std::vector<char> reach(g.bubbles.size(), 0);
  std::function<void(int)> walk = [&](int b) {
    if (reach[b]) throw std::invalid_argument("bubble graph has a second cycle");
    reach[b] = 1;
    for (const auto& s : g.bubbles[b].slots)
      if (s.edge && s.value != f.wheel) walk(f.source[s.value]);
  };
  walk(f.root);
  if (std::find(reach.begin(), reach.end(), 0) != reach.end()) throw std::invalid_argument("bubble graph is disconnected");
  return f;
}

std::vector<int> standard_orientation(const BubbleGraph& g, const OperadModel& model, BubbleMode mode) {
  GraphFrame f = frame(g);
  std::vector<std::vector<Slot>> slots;
  std::vector<std::size_t> choice;
  for (const auto& b : g.bubbles) {
    slots.push_back(b.slots);
    choice.push_back(single_dec(b));
  }
  return bfs_edges(g, f, slots, choice, model, mode);
}

LinComb canonical_form(const BubbleGraph& g, const std::vector<int>& orientation, const OperadModel& model,
                       BubbleMode mode, bool sgn_twist) {
  GraphFrame f = frame(g);
  const int B = static_cast<int>(g.bubbles.size());
  std::vector<int> key(B, -1);
  std::function<int(int)> subtree_key = [&](int b) -> int {
    if (key[b] >= 0) return key[b];
    int k = INT_MAX;
    for (const auto& s : g.bubbles[b].slots) {
      if (!s.edge) k = std::min(k, s.value);
      else if (s.value == f.wheel) k = 0;
      else k = std::min(k, subtree_key(f.source[s.value]));
    }
    return key[b] = k;
  };
  auto slot_key = [&](const Slot& s) {
    if (!s.edge) return s.value;
    if (s.value == f.wheel) return 0;
    return subtree_key(f.source[s.value]);
  };

  std::vector<std::vector<Slot>> slots(B);
  std::vector<SparseVec> decs(B);
  for (int b = 0; b < B; ++b) {
    const Bubble& x = g.bubbles[b];
    const int m = x.arity();
    std::vector<int> order(m);
    for (int j = 0; j < m; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int c) { return slot_key(x.slots[a]) < slot_key(x.slots[c]); });
    Perm tau(m);
    for (int j = 0; j < m; ++j) {
      slots[b].push_back(x.slots[order[j]]);
      tau[order[j]] = j + 1;
    }
    std::map<std::size_t, Rational> acc;
    for (const auto& [c, v] : x.dec)
      for (const auto& [i, w] : model.act(m, x.wheeled, c, tau, sgn_twist)) acc[i] += v * w;
    for (auto& [i, v] : acc)
      if (v != 0) decs[b].emplace_back(i, v);
  }

  LinComb out;
  std::vector<std::size_t> choice(B);
  std::function<Term(int)> content = [&](int b) -> Term {
    const Bubble& x = g.bubbles[b];
    auto slot_term = [&](const Slot& s) -> Term {
      if (!s.edge) return Term::leaf(s.value);
      if (s.value == f.wheel) return Term::wheel();
      Term inner = content(f.source[s.value]);
      if (mode == BubbleMode::Double && g.oriented[s.value]) return inner;
      return Term::bubble(std::move(inner), false);
    };
    if (mode == BubbleMode::Double) {
      std::vector<Term> kids;
      for (const auto& s : slots[b]) kids.push_back(slot_term(s));
      return Term::node("b" + std::to_string(choice[b]), std::move(kids));
    }
    const Term& rep = model.basis(x.arity(), x.wheeled).rep(choice[b]);
    return substitute_leaves(rep, [&](int j) { return slot_term(slots[b][j - 1]); });
  };
  std::function<void(int, Rational)> expand = [&](int b, Rational coeff) {
    if (b == B) {
      Term whole = Term::bubble(content(f.root), g.bubbles[f.root].wheeled);
      int sign = reorder_sign(orientation, bfs_edges(g, f, slots, choice, model, mode));
      out.add(canonical_string(whole), coeff * sign);
      return;
    }
    for (const auto& [i, v] : decs[b]) {
      choice[b] = i;
      expand(b + 1, coeff * v);
    }
  };
  expand(0, Rational(1));
  return out;
}

ParsedBubbles parse_bubbles(const Term& t, const OperadModel& model, BubbleMode mode) {
  if (!t.is_bubble()) throw std::invalid_argument("expected a bubble term, got " + canonical_string(t));
  ParsedBubbles p;
  BubbleGraph& g = p.graph;
  int wheel_edge = -1;
  auto new_edge = [&](bool oriented) {
    g.oriented.push_back(oriented ? 1 : 0);
    return g.edge_count() - 1;
  };

  if (mode == BubbleMode::Cobar) {
    std::function<int(const Term&, int)> build = [&](const Term& bt, int out) -> int {
      const bool wheeled = bt.kind == Term::Kind::WheeledBubble;
      if (wheeled && out >= 0) throw std::invalid_argument("a wheeled bubble must be on top");
      const Term& body = bt.children.at(0);
      if (!body.is_node()) throw std::invalid_argument("bubble content must be a tree");
      int self = static_cast<int>(g.bubbles.size());
      g.bubbles.emplace_back();
      g.bubbles[self].wheeled = wheeled;
      g.bubbles[self].out = out;
      std::vector<Slot> slots;
      std::function<Term(const Term&)> walk = [&](const Term& u) -> Term {
        switch (u.kind) {
          case Term::Kind::Leaf:
            slots.push_back(Slot::leaf(u.label));
            return Term::leaf(static_cast<int>(slots.size()));
          case Term::Kind::Wheel:
            if (wheeled) return Term::wheel();
            if (wheel_edge >= 0) throw std::invalid_argument("more than one wheel");
            wheel_edge = new_edge(true);
            slots.push_back(Slot::to(wheel_edge));
            return Term::leaf(static_cast<int>(slots.size()));
          case Term::Kind::Bubble:
          case Term::Kind::WheeledBubble: {
            int e = new_edge(true);
            slots.push_back(Slot::to(e));
            int pos = static_cast<int>(slots.size());
            build(u, e);
            return Term::leaf(pos);
          }
          case Term::Kind::Node: {
            Term v = u;
            for (auto& c : v.children) c = walk(c);
            return v;
          }
        }
        return u;
      };
      Term dec = walk(body);
      g.bubbles[self].slots = slots;
      g.bubbles[self].dec = model.reduce(dec);
      return self;
    };
    build(t, -1);
    if (wheel_edge >= 0) {
      if (g.bubbles[0].wheeled) throw std::invalid_argument("wheel on a wheeled bubble tree");
      g.bubbles[0].out = wheel_edge;
    }
  } else {
    if (t.kind != Term::Kind::Bubble) throw std::invalid_argument("double cobar elements use '{...}' bubbles");
    std::function<int(const Term&, int)> vertex = [&](const Term& u, int out) -> int {
      if (!u.is_node() || u.dec.size() < 2 || u.dec[0] != 'b')
        throw std::invalid_argument("expected a basis vertex '(bK ...)'");
      std::size_t k = std::stoul(u.dec.substr(1));
      const int m = static_cast<int>(u.children.size());
      if (k >= model.dim(m, false)) throw std::invalid_argument("basis index " + u.dec + " out of range");
      int self = static_cast<int>(g.bubbles.size());
      g.bubbles.emplace_back();
      g.bubbles[self].out = out;
      g.bubbles[self].dec = {{k, Rational(1)}};
      std::vector<Slot> slots;
      for (const auto& c : u.children) {
        if (c.is_leaf()) {
          slots.push_back(Slot::leaf(c.label));
        } else if (c.is_node()) {
          int e = new_edge(true);
          slots.push_back(Slot::to(e));
          vertex(c, e);
        } else if (c.kind == Term::Kind::Bubble) {
          int e = new_edge(false);
          slots.push_back(Slot::to(e));
          vertex(c.children.at(0), e);
        } else {
          throw std::invalid_argument("unexpected item in double cobar element");
        }
      }
      g.bubbles[self].slots = slots;
      return self;
    };
    vertex(t.children.at(0), -1);
  }

  std::vector<int> labels;
  for (const auto& b : g.bubbles)
    for (const auto& s : b.slots)
      if (!s.edge) labels.push_back(s.value);
  std::sort(labels.begin(), labels.end());
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != static_cast<int>(i) + 1) throw std::invalid_argument("leaf labels are not 1..n");

  // Written order: slots were numbered left to right, the written root is
  // bubble 0 and the written wheel is its outgoing edge.
  GraphFrame f = frame(g);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int b = queue.front();
    queue.pop_front();
    for (const auto& s : g.bubbles[b].slots) {
      if (!s.edge) continue;
      if (g.oriented[s.value]) p.orientation.push_back(s.value);
      if (s.value != wheel_edge) queue.push_back(f.source[s.value]);
    }
  }
  return p;
}

LinComb canonicalize_bubbles(const LinComb& x, const OperadModel& model, BubbleMode mode, bool sgn_twist) {
  LinComb out;
  for (const auto& [k, c] : x.terms()) {
    ParsedBubbles p = parse_bubbles(parse_term(k), model, mode);
    out.add(canonical_form(p.graph, p.orientation, model, mode, sgn_twist), c);
  }
  return out;
}

}  // namespace opf
