#include "opf/homology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <nlohmann/json.hpp>
#include <sstream>

namespace opf {

namespace {

using json = nlohmann::ordered_json;

Echelon image_echelon(const ChainComplex& c, int k) {
  Echelon e(c.size(k));
  SparseMatrix d = c.d(k + 1);
  for (std::size_t col = 0; col < d.cols(); ++col) e.insert(d.column(col));
  return e;
}

SparseVec coordinates(const ChainComplex& c, const LinComb& x, int k) {
  std::map<std::size_t, Rational> acc;
  for (const auto& [key, v] : x.terms()) acc[c.index_of(k, key)] += v;
  SparseVec out;
  for (const auto& [i, v] : acc)
    if (v != 0) out.emplace_back(i, v);
  return out;
}

std::string type_label(const std::vector<int>& types, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i) out += ' ';
    out += (i < names.size() ? names[i] : "t" + std::to_string(i)) + "=" + std::to_string(types[i]);
  }
  return out;
}

std::string nonzero_degrees(const HomologyReport& r) {
  std::string out;
  for (const auto& d : r.degrees)
    if (d.dim()) out += (out.empty() ? "" : " ") + std::string("H_") + std::to_string(d.degree) + "=" + std::to_string(d.dim());
  return out.empty() ? "0" : out;
}

json report_json(const HomologyReport& r) {
  json j;
  if (!r.component.empty()) j["component"] = r.component;
  json degrees = json::array();
  for (const auto& d : r.degrees)
    degrees.push_back({{"degree", d.degree}, {"size", d.size}, {"rank", d.rank_out}, {"kernel", d.kernel()},
                       {"homology", d.dim()}});
  j["degrees"] = degrees;
  j["euler"] = r.euler_chain;
  j["euler_homology"] = r.euler_homology;
  if (!r.components.empty()) {
    json comps = json::array();
    for (const auto& c : r.components) comps.push_back(report_json(c));
    j["components"] = comps;
  }
  return j;
}

void append_table(std::ostringstream& out, const HomologyReport& r) {
  out << "degree  size  rank  kernel  homology\n";
  for (const auto& d : r.degrees)
    out << d.degree << "  " << d.size << "  " << d.rank_out << "  " << d.kernel() << "  " << d.dim() << "\n";
}

}  // namespace

std::size_t HomologyReport::dim(int degree) const {
  for (const auto& d : degrees)
    if (d.degree == degree) return d.dim();
  return 0;
}

std::size_t HomologyReport::total() const {
  std::size_t t = 0;
  for (const auto& d : degrees) t += d.dim();
  return t;
}

HomologyReport homology_dims(const ChainComplex& c, bool split) {
  if (!check_d_squared(c)) throw std::logic_error("d^2 != 0; homology is undefined");
  HomologyReport r;
  r.component = c.component;
  r.euler_chain = c.euler();
  std::map<int, std::size_t> ranks;
  if (split && c.type_names.size() >= 2 && c.component.empty()) {
    for (const auto& comp : split_by_vertex_type(c)) {
      r.components.push_back(homology_dims(comp, false));
      for (const auto& d : r.components.back().degrees) ranks[d.degree] += d.rank_out;
    }
  } else {
    for (const auto& p : c.parts) ranks[p.degree] = rank(c.d(p.degree));
  }
  for (const auto& p : c.parts) {
    DegreeHomology d;
    d.degree = p.degree;
    d.size = p.size();
    d.rank_out = ranks[p.degree];
    d.rank_in = ranks.count(p.degree + 1) ? ranks[p.degree + 1] : 0;
    r.euler_homology += (p.degree % 2 == 0 ? 1 : -1) * static_cast<long>(d.dim());
    r.degrees.push_back(d);
  }
  return r;
}

CycleCheck certify_cycle(const ChainComplex& c, const LinComb& x, int k) {
  CycleCheck out;
  if (x.empty()) return {true, true};
  SparseVec v = coordinates(c, x, k);
  if (v.empty()) return {true, true};
  out.is_cycle = opf::apply(c.d(k), v).empty();
  out.is_boundary = image_echelon(c, k).contains(v);
  return out;
}

std::optional<LinComb> homology_witness(const ChainComplex& c, int k) {
  const DegreePart* p = c.part(k);
  if (!p || p->size() == 0) return std::nullopt;
  Echelon image = image_echelon(c, k);
  for (const Vec& z : kernel_basis(c.d(k))) {
    SparseVec r = image.reduce(to_sparse(z));
    if (r.empty()) continue;
    const Rational lead = r.front().second;
    LinComb out;
    for (const auto& [i, v] : r) out.add(p->basis[i], v / lead);
    return out;
  }
  return std::nullopt;
}

bool KoszulReport::pass() const {
  return std::all_of(arities.begin(), arities.end(), [](const ArityVerdict& a) { return a.pass; });
}

std::vector<std::pair<std::vector<int>, std::size_t>> dual_components(const OperadModel& dual, int n, bool wheeled,
                                                                       const std::vector<std::string>& type_names) {
  std::vector<std::string> dual_names = dual.generators().primaries();
  // Match generator types by name, falling back to position.
  std::vector<std::size_t> to(dual_names.size());
  bool by_name = true;
  for (std::size_t i = 0; i < dual_names.size(); ++i) {
    auto it = std::find(type_names.begin(), type_names.end(), dual_names[i]);
    if (it == type_names.end()) by_name = false;
    else to[i] = static_cast<std::size_t>(it - type_names.begin());
  }
  if (!by_name) {
    if (dual_names.size() != type_names.size()) throw std::invalid_argument("dual has a different number of generator types");
    for (std::size_t i = 0; i < to.size(); ++i) to[i] = i;
  }
  std::map<std::vector<int>, std::size_t> counts;
  const std::size_t dim = dual.dim(n, wheeled);
  for (std::size_t a = 0; a < dim; ++a) {
    std::vector<int> t = dual.type_counts(n, wheeled, a);
    std::vector<int> mapped(type_names.size(), 0);
    for (std::size_t i = 0; i < t.size(); ++i) mapped[to[i]] += t[i];
    ++counts[mapped];
  }
  return {counts.begin(), counts.end()};
}

KoszulReport koszul_report(const Presentation& p, int min_n, int max_n, bool wheeled, bool sgn_twist, const Guards& g) {
  if (min_n < (wheeled ? 1 : 2) || max_n < min_n) throw std::invalid_argument("bad arity range");
  OperadModel model(p, g);
  OperadModel dual(wheeled ? wheeled_dual(p) : quadratic_dual(p), g);
  KoszulReport r;
  r.operad = p.name;
  r.wheeled = wheeled;
  r.sgn_twist = sgn_twist;
  r.type_names = model.generators().primaries();
  for (int n = min_n; n <= max_n; ++n) {
    ArityVerdict v;
    v.arity = n;
    v.top_degree = wheeled ? n : n - 1;
    v.expected = dual.dim(n, wheeled);
    ChainComplex c = build_cobar(model, n, wheeled, sgn_twist);
    v.homology = homology_dims(c, true);
    auto fine = [&](const HomologyReport& h, std::size_t expected) {
      for (const auto& d : h.degrees)
        if (d.degree != v.top_degree && d.dim()) return false;
      return h.dim(v.top_degree) == expected;
    };
    v.pass = fine(v.homology, v.expected);

    std::map<std::vector<int>, std::size_t> expected;
    for (const auto& [t, k] : dual_components(dual, n, wheeled, r.type_names)) expected[t] = k;
    std::vector<const HomologyReport*> parts;
    HomologyReport whole = v.homology;
    whole.component.assign(r.type_names.size(), 0);
    if (v.homology.components.empty()) {
      // One generator type: the component is the whole complex.
      if (!c.parts.empty() && !c.parts.front().types.empty()) {
        for (const auto& part : c.parts)
          if (!part.types.empty()) {
            whole.component = part.types.front();
            break;
          }
      }
      parts.push_back(&whole);
    } else {
      for (const auto& h : v.homology.components) parts.push_back(&h);
    }
    std::set<std::vector<int>> seen;
    for (const HomologyReport* h : parts) {
      ComponentCheck cc;
      cc.types = h->component;
      cc.expected = expected.count(cc.types) ? expected[cc.types] : 0;
      for (const auto& d : h->degrees)
        if (d.dim()) cc.homology.emplace_back(d.degree, d.dim());
      cc.pass = fine(*h, cc.expected);
      seen.insert(cc.types);
      v.components.push_back(cc);
    }
    for (const auto& [t, k] : expected)
      if (!seen.count(t) && k) v.components.push_back({t, k, {}, false});
    for (const auto& cc : v.components)
      if (!cc.pass) v.pass = false;

    if (!v.pass) {
      for (const HomologyReport* h : parts) {
        for (const auto& d : h->degrees) {
          if (d.degree == v.top_degree || !d.dim()) continue;
          ChainComplex sub = v.homology.components.empty() ? c : component(c, h->component);
          if (auto w = homology_witness(sub, d.degree)) {
            v.witness = Witness{d.degree, h->component, *w};
            break;
          }
        }
        if (v.witness) break;
      }
    }
    r.arities.push_back(std::move(v));
  }
  return r;
}

FiltrationAssignment leaf_type_filtration(const ChainComplex& c, const std::string& type) {
  auto it = std::find(c.type_names.begin(), c.type_names.end(), type);
  if (it == c.type_names.end()) throw std::invalid_argument("no generator type '" + type + "' in the complex");
  const int idx = static_cast<int>(it - c.type_names.begin());
  FiltrationAssignment f;
  for (const auto& p : c.parts) {
    if (p.leaf_types.size() != p.size()) throw std::invalid_argument("complex has no leaf-type data");
    f.levels.emplace_back();
    for (const auto& lt : p.leaf_types) f.levels.back().push_back(1 + static_cast<int>(std::count(lt.begin(), lt.end(), idx)));
  }
  return f;
}

FiltrationReport filtration_analysis(const ChainComplex& c, const FiltrationAssignment& f) {
  if (f.levels.size() != c.parts.size()) throw std::invalid_argument("filtration does not match the complex");
  FiltrationReport r;
  for (std::size_t j = 0; j < c.parts.size(); ++j) {
    if (f.levels[j].size() != c.parts[j].size()) throw std::invalid_argument("filtration does not match the complex");
    for (int l : f.levels[j]) {
      if (l < 1) throw std::invalid_argument("filtration levels start at 1");
      r.levels = std::max(r.levels, l);
    }
  }
  for (std::size_t j = 1; j < c.parts.size(); ++j) {
    SparseMatrix d = c.d(c.parts[j].degree);
    for (std::size_t row = 0; row < d.rows(); ++row)
      for (const auto& [col, v] : d.row(row))
        if (f.levels[j - 1][row] > f.levels[j][col]) {
          std::ostringstream msg;
          msg << "d raises the filtration level: degree " << c.parts[j].degree << " entry (" << row << ", " << col
              << ") = " << v.get_str() << " maps level " << f.levels[j][col] << " to level " << f.levels[j - 1][row];
          throw std::invalid_argument(msg.str());
        }
  }
  r.total = homology_dims(c);
  std::map<int, std::size_t> bounds;
  for (const auto& p : c.parts) bounds[p.degree] = 0;
  for (int level = 1; level <= r.levels; ++level) {
    std::vector<std::vector<std::size_t>> keep(c.parts.size());
    for (std::size_t j = 0; j < c.parts.size(); ++j)
      for (std::size_t i = 0; i < f.levels[j].size(); ++i)
        if (f.levels[j][i] == level) keep[j].push_back(i);
    r.per_level.push_back(homology_dims(restrict_complex(c, keep)));
    for (const auto& d : r.per_level.back().degrees) bounds[d.degree] += d.dim();
  }
  r.bounds.assign(bounds.begin(), bounds.end());
  r.bound_holds = true;
  for (const auto& [deg, b] : r.bounds)
    if (b < r.total.dim(deg)) r.bound_holds = false;
  return r;
}

std::string to_text(const HomologyReport& r) {
  std::ostringstream out;
  append_table(out, r);
  out << "euler: " << r.euler_chain << " (homology " << r.euler_homology << ")\n";
  for (const auto& c : r.components) {
    out << "component";
    for (int t : c.component) out << ' ' << t;
    out << ": " << nonzero_degrees(c) << "\n";
  }
  return out.str();
}

std::string to_json(const HomologyReport& r, int indent) { return report_json(r).dump(indent); }

std::string to_text(const KoszulReport& r) {
  std::ostringstream out;
  out << "operad " << r.operad << (r.wheeled ? ", wheeled" : ", plain") << ", sgn twist "
      << (r.sgn_twist ? "on" : "off") << "\n";
  for (const auto& a : r.arities) {
    out << "n=" << a.arity << "  top degree " << a.top_degree << "  dual dim " << a.expected << "  homology "
        << nonzero_degrees(a.homology) << "  " << (a.pass ? "PASS" : "FAIL") << "\n";
    if (r.type_names.size() >= 2)
      for (const auto& c : a.components) {
        out << "  component " << type_label(c.types, r.type_names) << ": dual " << c.expected << ", homology ";
        std::string h;
        for (const auto& [deg, dim] : c.homology) h += (h.empty() ? "" : " ") + std::string("H_") + std::to_string(deg) + "=" + std::to_string(dim);
        out << (h.empty() ? "0" : h) << (c.pass ? "" : "  FAIL") << "\n";
      }
    if (a.witness)
      out << "  witness in degree " << a.witness->degree << " (component " << type_label(a.witness->component, r.type_names)
          << "): " << a.witness->cycle.to_string() << "\n";
  }
  out << "verdict: " << (r.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string to_json(const KoszulReport& r, int indent) {
  json j;
  j["operad"] = r.operad;
  j["wheeled"] = r.wheeled;
  j["sgn_twist"] = r.sgn_twist;
  j["type_names"] = r.type_names;
  json arities = json::array();
  for (const auto& a : r.arities) {
    json x;
    x["arity"] = a.arity;
    x["top_degree"] = a.top_degree;
    x["dual_dim"] = a.expected;
    x["homology"] = report_json(a.homology);
    json comps = json::array();
    for (const auto& c : a.components) {
      json h = json::array();
      for (const auto& [deg, dim] : c.homology) h.push_back({{"degree", deg}, {"dim", dim}});
      comps.push_back({{"types", c.types}, {"dual_dim", c.expected}, {"homology", h}, {"pass", c.pass}});
    }
    x["components"] = comps;
    x["pass"] = a.pass;
    if (a.witness)
      x["witness"] = {{"degree", a.witness->degree}, {"component", a.witness->component},
                      {"cycle", a.witness->cycle.to_string()}};
    arities.push_back(x);
  }
  j["arities"] = arities;
  j["verdict"] = r.pass() ? "PASS" : "FAIL";
  return j.dump(indent);
}

std::string to_text(const FiltrationReport& r) {
  std::ostringstream out;
  out << "levels: " << r.levels << "\n";
  for (std::size_t i = 0; i < r.per_level.size(); ++i)
    out << "level " << i + 1 << ": " << nonzero_degrees(r.per_level[i]) << "\n";
  out << "degree  bound  homology\n";
  for (const auto& [deg, b] : r.bounds) out << deg << "  " << b << "  " << r.total.dim(deg) << "\n";
  out << "bound holds: " << (r.bound_holds ? "yes" : "no") << "\n";
  return out.str();
}

std::string to_json(const FiltrationReport& r, int indent) {
  json j;
  j["levels"] = r.levels;
  json per = json::array();
  for (const auto& h : r.per_level) per.push_back(report_json(h));
  j["per_level"] = per;
  json b = json::array();
  for (const auto& [deg, v] : r.bounds) b.push_back({{"degree", deg}, {"bound", v}, {"homology", r.total.dim(deg)}});
  j["bounds"] = b;
  j["bound_holds"] = r.bound_holds;
  return j.dump(indent);
}

}  // namespace opf
