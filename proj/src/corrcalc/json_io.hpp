#pragma once

#include <string>

#include "corrcalc/bicat.hpp"
#include "corrcalc/fib.hpp"
#include "corrcalc/marked.hpp"
#include "corrcalc/span.hpp"

namespace corrcalc {

// fincat-v1: objects, morphisms, identities, compose, optional marked.
// Unknown keys are rejected.
FinCatData parse_fincat_v1(const std::string& json_text, const std::string& name);
MarkedCat parse_marked_category(const std::string& json_text, const std::string& name);
std::string fincat_v1_to_json(const FinCat& c, const std::set<int>* marking = nullptr);

// Functor files inline both categories: {"source", "target", "ob_map",
// "mor_map"} with name-keyed maps.
FunctorData parse_functor(const std::string& json_text);
std::string functor_to_json(const FunctorData& f);

// Strict category-valued functor family: {"base", "contravariant", "fibres",
// "transitions"}; fibres keyed by base object, transitions by base morphism.
CatPseudofunctor parse_cat_family(const std::string& json_text);

// bicat-v1: objects, homs (fincat-v1 inline), units, hcomp tables,
// coherence cells by name.
std::string bicat_v1_to_json(const Bicat& b);
BicatPtr parse_bicat_v1(const std::string& json_text);

std::string fibration_to_json(const Fibration& f);

// DOT emission with deterministic node order. Spans are drawn as roofs.
std::string category_to_dot(const FinCat& c, const std::set<int>* marking = nullptr);
std::string span_to_dot(const MarkedCat& m, const Span& s);
std::string fibration_to_dot(const Fibration& f);
// Objects and non-unit 1-cells only.
std::string bicat_skeleton_to_dot(const Bicat& b);

}  // namespace corrcalc
