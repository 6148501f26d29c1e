#pragma once

#include <string>
#include <vector>

#include "opf/lincomb.hpp"
#include "opf/qlinalg.hpp"
#include "opf/term.hpp"

namespace opf {

struct Presentation {
  std::string name;
  GeneratorSet generators;
  std::vector<LinComb> relations3;
  std::vector<LinComb> wheeled_relations1;
};

// ass, com, lie, poiss.  Wheeled relations are empty: used as wheeled
// operads these are wheeled completions.
Presentation builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Config text with sections [generators], [relations3], [wheeled_relations1].
// Generator lines read "id sign [partner]".
Presentation parse_presentation(const std::string& text, const std::string& fallback_name = "custom");
Presentation load_presentation(const std::string& path);
std::string presentation_to_text(const Presentation& p);

// Canonicalizes relations and checks arities and S3-stability.  Throws on
// failure.
void check_presentation(const Presentation& p);

// Relations as coordinate vectors over enumerate_shapes(3, false) (resp.
// enumerate_shapes(1, true)).
std::vector<SparseVec> relation_vectors(const Presentation& p);
std::vector<SparseVec> wheeled_relation_vectors(const Presentation& p);
std::size_t relation_rank(const Presentation& p);

// Sign of the pairing between a canonical term and its dual copy.
int pairing_sign(const Term& t);

Presentation quadratic_dual(const Presentation& p);
Presentation wheeled_dual(const Presentation& p);

// Equal up to renaming generators and rescaling each by ±1.
bool isomorphic(const Presentation& a, const Presentation& b);

}  // namespace opf
