#pragma once

#include <vector>

#include "opf/expansion.hpp"
#include "opf/lincomb.hpp"

namespace opf {

// Cobar: bubbles carry basis elements of P(m) or P_w(m) and are written
// with their representative trees, "{...}" or "<...>".  Double: every vertex
// is a P(m) basis element written "(bK ...)", and "{...}" groups vertices
// joined by internal edges.
enum class BubbleMode { Cobar, Double };

struct Slot {
  bool edge = false;
  int value = 0;  // leaf label or edge id

  static Slot leaf(int l) { return {false, l}; }
  static Slot to(int e) { return {true, e}; }
  friend bool operator==(const Slot&, const Slot&) = default;
};

struct Bubble {
  bool wheeled = false;  // decorated by P_w(m)
  SparseVec dec;         // combination of basis elements
  std::vector<Slot> slots;
  int out = -1;  // outgoing edge id, -1 at the top

  int arity() const { return static_cast<int>(slots.size()); }
};

// Edge e runs from the bubble whose out is e into the bubble holding
// Slot::to(e).  Oriented edges enter the wedge word; in the cobar complex
// every edge is oriented, in the double cobar exactly the internal ones.
struct BubbleGraph {
  std::vector<Bubble> bubbles;
  std::vector<char> oriented;  // by edge id

  int edge_count() const { return static_cast<int>(oriented.size()); }
  int leaf_count() const;
};

// Root, wheel edge and edge sources of a graph.
struct GraphFrame {
  int root = -1;
  int wheel = -1;  // edge id of the cobar-level wheel, -1 if none
  std::vector<int> source;  // edge id -> bubble
  std::vector<int> target;  // edge id -> bubble
};
GraphFrame frame(const BubbleGraph& g);

// Rewrites g as a combination of canonical basis keys.  `orientation` lists
// the oriented edges in the order of the wedge word of g.
LinComb canonical_form(const BubbleGraph& g, const std::vector<int>& orientation, const OperadModel& model,
                       BubbleMode mode, bool sgn_twist);

// Wedge word of a graph whose bubbles hold single basis elements, by level
// from the root and left to right in writing order.
std::vector<int> standard_orientation(const BubbleGraph& g, const OperadModel& model, BubbleMode mode);

struct ParsedBubbles {
  BubbleGraph graph;
  std::vector<int> orientation;
};
// Parses one written bubble tree.  Slots are numbered in reading order.
ParsedBubbles parse_bubbles(const Term& t, const OperadModel& model, BubbleMode mode);
LinComb canonicalize_bubbles(const LinComb& x, const OperadModel& model, BubbleMode mode, bool sgn_twist);

}  // namespace opf
