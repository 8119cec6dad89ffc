// Model files: a sectioned, line-oriented description of semigroups,
// cocycles, lattices and algebra elements. See README.md for the grammar.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtoric/lattice_algebras.hpp"
#include "qtoric/scalars_cocycles.hpp"
#include "qtoric/twisted_algebra.hpp"

namespace qtoric {

/// Syntax, shape or reference error with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct SemigroupDef {
  std::string name;
  std::size_t dim = 0;
  IntMatrix generators;
};

struct CocycleDef {
  std::string name;
  Cocycle cocycle;
};

struct LatticeDef {
  std::string name;
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> covers;
  std::optional<Poset> poset;  // set for "poset" definitions
};

struct ElementDef {
  std::string name;
  std::size_t dim = 0;
  TwistedElement element;
};

struct ModelFile {
  std::optional<std::size_t> degree_bound;
  std::optional<std::size_t> search_bound;
  std::optional<std::size_t> grid_bound;
  std::vector<SemigroupDef> semigroups;
  std::vector<CocycleDef> cocycles;
  std::vector<LatticeDef> lattices;
  std::vector<ElementDef> elements;

  const SemigroupDef* find_semigroup(const std::string& name) const;
  const CocycleDef* find_cocycle(const std::string& name) const;
  const LatticeDef* find_lattice(const std::string& name) const;
  const ElementDef* find_element(const std::string& name) const;
};

ModelFile parse_model(const std::string& text);

/// Parses a scalar such as "2*q^-1", "-q", "q^(1/2)" or "3/4".
ScalarMonomial parse_scalar(const std::string& text);

AffineSemigroup build_semigroup(const SemigroupDef& def);
DistLattice build_lattice(const LatticeDef& def);

}  // namespace qtoric
