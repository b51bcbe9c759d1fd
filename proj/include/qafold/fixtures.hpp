#pragma once

#include <string>
#include <vector>

#include "qafold/embedding.hpp"
#include "qafold/ising.hpp"
#include "qafold/lattice.hpp"
#include "qafold/polynomial.hpp"

namespace qafold::fixtures {

enum class FixtureKind { polynomial, ising, embedding, instance };

struct FixtureInfo {
  std::string name;
  FixtureKind kind;
  std::string description;
  std::string variant;                     // "verbatim", "sanitized" or "derived"
  std::vector<std::string> sanitizations;  // "printed -> corrected" per edited monomial
};

const std::vector<FixtureInfo>& list_fixtures();
const FixtureInfo& fixture_info(const std::string& name);
const char* to_string(FixtureKind kind);

/// Throws a validation error for unknown names or a kind mismatch.
compiler::Polynomial load_polynomial(const std::string& name);
ising::IsingModel load_ising(const std::string& name);
embedding::Embedding load_embedding(const std::string& name);
lattice::FoldingInstance load_instance(const std::string& name);

/// Printed text of a polynomial fixture (verbatim, before sanitization).
std::string printed_text(const std::string& name);

/// Fixing recipes relating the PSVKMA family (1-based variable -> value, then relabel).
struct FixingRecipe {
  std::string from;
  std::string to;
  std::map<int, int> bindings;
};
const std::vector<FixingRecipe>& fixing_recipes();

/// Parses "13s1 + 3s2 + 6s1s2" over n spins (s_k is spin k-1). Constants go into the offset.
ising::IsingModel parse_ising(const std::string& text, int n, const Rational& divide_by = 1);

}  // namespace qafold::fixtures
