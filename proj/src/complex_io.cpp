#include <algorithm>
#include <nlohmann/json.hpp>

#include "opf/cobar.hpp"

namespace opf {

namespace {

using json = nlohmann::ordered_json;

json matrix_json(const SparseMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, v] : m.row(r)) out.push_back(json::array({r, c, to_fraction_string(v)}));
  return out;
}

SparseMatrix matrix_from(const json& j, std::size_t rows, std::size_t cols) {
  SparseMatrix m(rows, cols);
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("dmatrix entries are [row, col, \"p/q\"]");
    std::size_t r = e[0].get<std::size_t>(), c = e[1].get<std::size_t>();
    if (r >= rows || c >= cols) throw std::invalid_argument("dmatrix entry out of range");
    m.set(r, c, parse_rational(e[2].get<std::string>()));
  }
  return m;
}

// Vertex types read off a cobar key; the basis representatives only use
// primary generators.
void types_from_key(const std::string& key, const std::vector<std::string>& names, int n, std::vector<int>& types,
                    std::vector<int>& leaf_types) {
  Term t = parse_term(key);
  types.assign(names.size(), 0);
  for (const auto& [id, count] : vertex_counts(t)) {
    auto it = std::find(names.begin(), names.end(), id);
    if (it == names.end()) throw std::invalid_argument("unknown generator '" + id + "' in " + key);
    types[it - names.begin()] += count;
  }
  leaf_types.assign(n, -1);
  for (const auto& [label, id] : leaf_parents(t)) {
    if (label < 1 || label > n) throw std::invalid_argument("leaf label out of range in " + key);
    leaf_types[label - 1] = static_cast<int>(std::find(names.begin(), names.end(), id) - names.begin());
  }
}

}  // namespace

std::string to_json(const ChainComplex& c, int indent) {
  json j;
  j["arity"] = c.arity;
  j["wheeled"] = c.wheeled;
  j["operad"] = c.operad;
  j["kind"] = c.kind;
  j["sgn_twist"] = c.sgn_twist;
  j["type_names"] = c.type_names;
  if (!c.component.empty()) j["component"] = c.component;
  json degrees = json::array();
  for (const auto& p : c.parts) {
    json d;
    d["degree"] = p.degree;
    d["basis"] = p.basis;
    d["dmatrix"] = matrix_json(c.d(p.degree));
    if (c.kind == "double") {
      const bool have = p.d1.rows() == c.size(p.degree - 1) && p.d1.cols() == p.size();
      d["d1matrix"] = matrix_json(have ? p.d1 : SparseMatrix(c.size(p.degree - 1), p.size()));
      d["d2matrix"] = matrix_json(have ? p.d2 : SparseMatrix(c.size(p.degree - 1), p.size()));
    }
    degrees.push_back(d);
  }
  j["degrees"] = degrees;
  return j.dump(indent);
}

ChainComplex from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  try {
    ChainComplex c;
    c.arity = j.at("arity").get<int>();
    c.wheeled = j.at("wheeled").get<bool>();
    c.operad = j.value("operad", std::string());
    c.kind = j.value("kind", std::string("cobar"));
    c.sgn_twist = j.value("sgn_twist", false);
    if (j.contains("type_names")) c.type_names = j["type_names"].get<std::vector<std::string>>();
    if (j.contains("component")) c.component = j["component"].get<std::vector<int>>();
    for (const auto& d : j.at("degrees")) {
      DegreePart p;
      p.degree = d.at("degree").get<int>();
      if (!c.parts.empty() && p.degree != c.parts.back().degree + 1)
        throw std::invalid_argument("degrees must be consecutive and ascending");
      p.basis = d.at("basis").get<std::vector<std::string>>();
      if (!std::is_sorted(p.basis.begin(), p.basis.end()) ||
          std::adjacent_find(p.basis.begin(), p.basis.end()) != p.basis.end())
        throw std::invalid_argument("basis keys must be sorted and distinct");
      c.parts.push_back(std::move(p));
    }
    const auto& degrees = j.at("degrees");
    for (std::size_t i = 0; i < c.parts.size(); ++i) {
      DegreePart& p = c.parts[i];
      const std::size_t rows = i ? c.parts[i - 1].size() : 0;
      p.d = matrix_from(degrees[i].at("dmatrix"), rows, p.size());
      if (c.kind == "double") {
        p.d1 = matrix_from(degrees[i].value("d1matrix", json::array()), rows, p.size());
        p.d2 = matrix_from(degrees[i].value("d2matrix", json::array()), rows, p.size());
      } else if (!c.type_names.empty()) {
        for (const auto& key : p.basis) {
          std::vector<int> t, lt;
          types_from_key(key, c.type_names, c.arity, t, lt);
          p.types.push_back(t);
          p.leaf_types.push_back(lt);
        }
      }
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed complex JSON: ") + e.what());
  }
}

}  // namespace opf
