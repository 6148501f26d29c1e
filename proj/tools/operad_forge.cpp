// operad-forge: dimensions, duals, cobar complexes, homology and Koszul
// verdicts for quadratic operads and their wheeled completions.
//
// Exit codes: 0 success, 2 Koszul FAIL verdict, 1 error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "opf/homology.hpp"

using namespace opf;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string operad;
  std::string config;
  int max_plain = -1;
  int max_wheeled = -1;
  bool as_json = false;

  Presentation presentation() const {
    if (!operad.empty() && !config.empty()) throw CLI::ValidationError("give either --operad or --config");
    if (!config.empty()) return load_presentation(config);
    if (operad.empty()) throw CLI::ValidationError("one of --operad or --config is required");
    return builtin(operad);
  }
  Guards guards() const {
    Guards g = Guards::from_env();
    if (max_plain > 0) g.max_plain = max_plain;
    if (max_wheeled > 0) g.max_wheeled = max_wheeled;
    return g;
  }
};

void add_common(CLI::App* cmd, Common& c, bool needs_operad = true) {
  if (needs_operad) {
    cmd->add_option("--operad", c.operad, "builtin presentation: ass, com, lie, poiss");
    cmd->add_option("--config", c.config, "presentation file");
  }
  cmd->add_option("--max-plain-arity", c.max_plain, "guard on plain arities (default 6)");
  cmd->add_option("--max-wheeled-arity", c.max_wheeled, "guard on wheeled arities (default 4)");
  cmd->add_flag("--json", c.as_json, "JSON output");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string types_text(const std::vector<int>& types, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < types.size() && i < names.size(); ++i)
    out += (i ? " " : "") + names[i] + "=" + std::to_string(types[i]);
  return out;
}

ChainComplex build(const OperadModel& model, int n, bool wheeled, bool dbl, bool twist) {
  if (dbl && wheeled) throw CLI::ValidationError("--double and --wheeled cannot be combined");
  if (dbl && twist) throw CLI::ValidationError("--sgn-twist applies to the cobar complex only");
  return dbl ? build_double_cobar(model, n) : build_cobar(model, n, wheeled, twist);
}

std::vector<int> parse_component(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operad-forge: quadratic operads, wheeled completions, cobar complexes and Koszulness"};
  app.require_subcommand(1);

  Common common;
  int arity = -1, max_arity = -1, min_arity = -1;
  bool wheeled = false, twist = false, split = false, dbl = false, basis = false;
  std::string component_text, filtration, input, output;

  auto* dims = app.add_subcommand("dims", "dimensions of P(n) or P_w(n)");
  add_common(dims, common);
  dims->add_option("--arity", arity, "single arity");
  dims->add_option("--max-arity", max_arity, "table up to this arity");
  dims->add_flag("--wheeled", wheeled, "wheeled part P_w(n)");
  dims->add_flag("--basis", basis, "list the representative trees");

  auto* dual = app.add_subcommand("dual", "quadratic dual presentation");
  add_common(dual, common);
  dual->add_flag("--wheeled", wheeled, "wheeled dual (annihilator of the wheeled relations too)");

  auto* cobar = app.add_subcommand("cobar", "cobar complex basis sizes and differential");
  add_common(cobar, common);
  cobar->add_option("--arity", arity, "arity n")->required();
  cobar->add_flag("--wheeled", wheeled, "wheeled cobar complex");
  cobar->add_flag("--double", dbl, "double cobar bicomplex");
  cobar->add_flag("--sgn-twist", twist, "twist by the sign representation");
  cobar->add_flag("--split", split, "split by vertex types");
  cobar->add_flag("--basis", basis, "list basis elements");

  auto* homology = app.add_subcommand("homology", "homology dimensions");
  add_common(homology, common);
  homology->add_option("--arity", arity, "arity n")->required();
  homology->add_flag("--wheeled", wheeled, "wheeled cobar complex");
  homology->add_flag("--double", dbl, "double cobar bicomplex");
  homology->add_flag("--sgn-twist", twist, "twist by the sign representation");
  homology->add_flag("--split", split, "per vertex-type component");
  homology->add_option("--component", component_text, "restrict to a component, e.g. 1,2");
  homology->add_option("--filtration", filtration, "filter by leaves on this generator, e.g. c");

  auto* koszul = app.add_subcommand("koszul", "Koszulness check against the quadratic dual");
  add_common(koszul, common);
  koszul->add_option("--arity", arity, "single arity");
  koszul->add_option("--min-arity", min_arity, "first arity (default 2, wheeled 1)");
  koszul->add_option("--max-arity", max_arity, "last arity");
  koszul->add_flag("--wheeled", wheeled, "wheeled Koszulness");
  koszul->add_flag("--sgn-twist", twist, "twist by the sign representation");

  auto* certify = app.add_subcommand("certify", "is a cobar element a cycle, a boundary");
  add_common(certify, common);
  certify->add_option("cycle", input, "file with a linear combination of bubble trees")->required();
  certify->add_flag("--sgn-twist", twist, "twist by the sign representation");

  auto* exp = app.add_subcommand("export", "write a complex as JSON, or re-export a JSON file");
  add_common(exp, common);
  exp->add_option("--arity", arity, "arity n");
  exp->add_flag("--wheeled", wheeled, "wheeled cobar complex");
  exp->add_flag("--double", dbl, "double cobar bicomplex");
  exp->add_flag("--sgn-twist", twist, "twist by the sign representation");
  exp->add_option("--input", input, "re-export this JSON complex");
  exp->add_option("-o,--output", output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (dims->parsed()) {
      OperadModel model(common.presentation(), common.guards());
      if (arity < 0 && max_arity < 0) throw CLI::ValidationError("dims needs --arity or --max-arity");
      const int lo = arity > 0 ? arity : (wheeled ? 1 : 2);
      const int hi = arity > 0 ? arity : max_arity;
      json j = json::array();
      for (int n = lo; n <= hi; ++n) {
        const std::size_t d = n == 1 && !wheeled ? 1 : model.dim(n, wheeled);
        if (common.as_json) {
          if (basis) j.push_back(json::parse(model.basis_dump_json(n, wheeled)));
          else j.push_back({{"arity", n}, {"wheeled", wheeled}, {"dim", d}});
        } else if (basis) {
          std::cout << model.basis_dump(n, wheeled);
        } else if (arity > 0) {
          std::cout << d << "\n";
        } else {
          std::cout << n << " " << d << "\n";
        }
      }
      if (common.as_json) std::cout << (arity > 0 ? j[0] : j).dump(2) << "\n";
      return 0;
    }

    if (dual->parsed()) {
      Presentation p = common.presentation();
      Presentation d = wheeled ? wheeled_dual(p) : quadratic_dual(p);
      if (common.as_json) {
        json j;
        j["name"] = d.name;
        j["generators"] = d.generators.primaries();
        json rel = json::array();
        for (const auto& r : d.relations3) rel.push_back(r.to_string());
        j["relations3"] = rel;
        json wrel = json::array();
        for (const auto& r : d.wheeled_relations1) wrel.push_back(r.to_string());
        j["wheeled_relations1"] = wrel;
        j["text"] = presentation_to_text(d);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << presentation_to_text(d);
      }
      return 0;
    }

    if (cobar->parsed()) {
      OperadModel model(common.presentation(), common.guards());
      ChainComplex c = build(model, arity, wheeled, dbl, twist);
      if (common.as_json) {
        std::cout << to_json(c, 2) << "\n";
        return 0;
      }
      std::cout << c.kind << " complex of " << c.operad << (c.wheeled ? ", wheeled" : "") << ", arity " << c.arity
                << "\n";
      std::vector<ChainComplex> parts = split ? split_by_vertex_type(c) : std::vector<ChainComplex>{c};
      for (const auto& x : parts) {
        if (split) std::cout << "component " << types_text(x.component, x.type_names) << "\n";
        for (const auto& p : x.parts) {
          std::cout << "degree " << p.degree << ": " << p.size() << " elements, d has " << x.d(p.degree).nonzeros()
                    << " nonzero entries\n";
          if (basis)
            for (const auto& k : p.basis) std::cout << "  " << k << "\n";
        }
      }
      std::cout << "d^2 = 0: " << (check_d_squared(c) ? "yes" : "no") << "\n";
      if (dbl) std::cout << "d1 d2 + d2 d1 = 0: " << (check_anticommute(c) ? "yes" : "no") << "\n";
      return 0;
    }

    if (homology->parsed()) {
      OperadModel model(common.presentation(), common.guards());
      ChainComplex c = build(model, arity, wheeled, dbl, twist);
      if (!component_text.empty()) c = component(c, parse_component(component_text));
      if (!filtration.empty()) {
        FiltrationReport r = filtration_analysis(c, leaf_type_filtration(c, filtration));
        std::cout << (common.as_json ? to_json(r, 2) + "\n" : to_text(r));
        return 0;
      }
      HomologyReport r = homology_dims(c, split);
      if (common.as_json) {
        std::cout << to_json(r, 2) << "\n";
      } else {
        std::cout << to_text(r);
      }
      return 0;
    }

    if (koszul->parsed()) {
      Presentation p = common.presentation();
      int lo = arity > 0 ? arity : (min_arity > 0 ? min_arity : (wheeled ? 1 : 2));
      int hi = arity > 0 ? arity : max_arity;
      if (hi < 0) throw CLI::ValidationError("koszul needs --arity or --max-arity");
      KoszulReport r = koszul_report(p, lo, hi, wheeled, twist, common.guards());
      std::cout << (common.as_json ? to_json(r, 2) + "\n" : to_text(r));
      return r.pass() ? 0 : 2;
    }

    if (certify->parsed()) {
      OperadModel model(common.presentation(), common.guards());
      LinComb written = LinComb::parse(read_file(input));
      LinComb x = canonicalize_bubbles(written, model, BubbleMode::Cobar, false);
      json j;
      if (x.empty()) {
        std::cout << (common.as_json ? json{{"cycle", true}, {"boundary", true}}.dump(2) : "cycle: yes, boundary: yes")
                  << "\n";
        return 0;
      }
      // Arity, wheel and degree are read off the terms.
      const Term first = parse_term(x.terms().begin()->first);
      const int n = opf::arity(first);
      const bool w = is_wheeled(first);
      ChainComplex c = build_cobar(model, n, w, twist);
      int k = INT32_MIN;
      std::vector<int> types;
      for (const auto& [key, v] : x.terms()) {
        int found = INT32_MIN;
        for (const auto& p : c.parts) {
          auto it = std::lower_bound(p.basis.begin(), p.basis.end(), key);
          if (it != p.basis.end() && *it == key) {
            found = p.degree;
            if (types.empty()) types = p.types[it - p.basis.begin()];
            else if (types != p.types[it - p.basis.begin()]) types.assign(types.size(), -1);
          }
        }
        if (found == INT32_MIN) throw std::invalid_argument("'" + key + "' is not a basis element of the complex");
        if (k != INT32_MIN && found != k) throw std::invalid_argument("terms of different degrees");
        k = found;
      }
      CycleCheck r = certify_cycle(c, x, k);
      const bool homogeneous = std::find(types.begin(), types.end(), -1) == types.end();
      if (common.as_json) {
        j["arity"] = n;
        j["wheeled"] = w;
        j["degree"] = k;
        j["component"] = homogeneous ? json(types) : json(nullptr);
        j["cycle"] = r.is_cycle;
        j["boundary"] = r.is_boundary;
        j["canonical"] = x.to_string();
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "cycle: " << (r.is_cycle ? "yes" : "no") << ", boundary: " << (r.is_boundary ? "yes" : "no") << "\n";
        std::cout << "arity " << n << (w ? ", wheeled" : "") << ", degree " << k << ", component "
                  << (homogeneous ? types_text(types, c.type_names) : "mixed") << "\n";
      }
      return 0;
    }

    if (exp->parsed()) {
      std::string text;
      if (!input.empty()) {
        text = to_json(from_json(read_file(input)), 2);
      } else {
        if (arity < 0) throw CLI::ValidationError("export needs --arity or --input");
        OperadModel model(common.presentation(), common.guards());
        text = to_json(build(model, arity, wheeled, dbl, twist), 2);
      }
      if (output.empty()) {
        std::cout << text << "\n";
      } else {
        std::ofstream out(output);
        out << text << "\n";
        if (!out) throw std::runtime_error("cannot write " + output);
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
