#include "qafold/fixtures.hpp"

#include <algorithm>
#include <sstream>

#include "qafold/errors.hpp"

namespace qafold::fixtures {

namespace {

constexpr const char* kPsvkmaVerbatim =
    "-q2 + 8q1q2 + 15q2q3 - 18q1q2q3 - 3q1q4 + 12q1q2q4 + 4q3q4 + 3q1q3q4 - 6q2q3q4 - 12q1q2q3q4 + "
    "4q2q5 + 3q1q2q5 - 15q2q3q5 + 15q4q5 + 3q1q4q5 - 6q2q4q5 - 12q1q2q4q5 - 15q3q4q5 + 28q2q3q4q5 - "
    "2q1q2q6 - 4q3q6 + 2q2q3q6 + 13q1q2q3q6 - 2q1q4q6 + 4q1q2q4q6 + 2q3q4q6 + 13q1q3q4q6 + 4q2q3q4q6 "
    "- 37q1q2q3q4q6 + 7q5q6 + 2q2q5q6 + 13q1q2q5q6 + 4q3q5q6 + 9q2q3q5q6 - 33q1q2q3q5q6 - 20q4q5q6 + "
    "13q1q4q5q6 + 4q2q4q5q6 - 37q1q2q4q5q6 + 9q3q4q5q6 - 33q1q3q4q5q6 - 37q2q3q4q5q6 + 99q1q2q3q4q5q6 "
    "- 4q2q7 + 4q2q3q7 + 7q4q7 + 2q2q4q7 + 13q1q2q4q7 + 4q3q4q7 + 9q2q3q4q7 - 33q1q2q3q4q7 + 4q2q5q7 "
    "- 18q4q5q7 + 9q2q4q5q7 - 33q1q2q4q5q7 - 33q2q3q4q5q7 + 62q1q2q3q4q5q7 + 7q6q7 + 2q2q6q7 + "
    "13q1q2q6q7 + 4q3q6q7 + 9q2q3q6q7 - 33q1q2q3q6q7 - 20q4q6q7 + 13q1q4q6q7 + 4q2q4q6q7 - "
    "37q1q2q4q6q7 + 9q3q4q6q7 - 33q1q3q4q6q7 - 37q2q3q4q6q7 + 99q1q2q3q4q6q7 - 18q5q6q7 + 9q2q5q6q7 - "
    "33q1q2q5q6q7 - 33q2q3q5q6q7 + 62q1q2q3q5q6q7 + 53q4q5q6q7 - 33q1q4q5q7q7 - 37q2q4q6q6q7 + "
    "99q5q2q4q5q6q7 - 33q3q1q5q6q7 + 62q1q4q4q5q6q7 + 99q2q3q4q5q6q7 - 190q1q2q3q4q5q6q7";

constexpr const char* kExp1 =
    "-3q2 + 7q1q2 + 18q2q3 - 15q1q2q3 - 4q1q4 - 2q2q4 + 15q1q2q4 + 7q3q4 + 4q1q3q4 - 7q2q3q4 - "
    "24q1q2q3q4 + 7q2q5 + 4q1q2q5 - 18q2q3q5 + 7q4q5 + 4q1q4q5 - 7q2q4q5 - 24q1q2q4q5 - 18q3q4q5 + "
    "20q2q3q4q5 + 29q1q2q3q4q5";

constexpr const char* kExp4 =
    "-q1 + 15q1q2 + 4q2q3 - 6q1q2q3 + 4q1q4 - 15q1q2q4 + 15q3q4 - 6q1q3q4 - 15q2q3q4 + 28q1q2q3q4 - "
    "4q2q5 + 2q1q2q5 + 2q2q3q5 + 4q1q2q3q5 + 7q4q5 + 7q5q6 + 2q1q4q5 + 4q2q4q5 + 9q1q2q4q5 - 20q3q4q5 "
    "+ 4q1q3q4q5 + 9q2q3q4q5 - 37q1q2q3q4q5 - 4q1q6 + 4q1q2q6 + 7q3q6 + 2q1q3q6 + 4q2q3q6 + 9q1q2q3q6 "
    "+ 4q1q4q6 - 18q3q4q6 + 9q1q3q4q6 - 33q1q2q3q4q6 + 2q1q5q6 + 4q2q5q6 - 20q3q5q6 + 9q1q2q5q6 + "
    "4q1q3q5q6 + 9q2q3q5q6 - 37q1q2q3q5q6 - 18q4q5q6 + 9q1q4q5q6 - 33q1q2q4q5q6 + 53q3q4q5q6 - "
    "37q1q3q4q5q6 - 33q2q3q4q5q6 + 99q1q2q3q4q5q6";

constexpr const char* kExp2 =
    "4q1q2 + 15q2q3 - 15q1q2q3 - 4q1q4 + 2q1q2q4 + 7q3q4 + 4q1q3q4 - 20q2q3q4 + 9q1q2q3q4 + 7q2q5 + "
    "4q1q2q5 - 18q2q3q5 + 7q4q5 + 4q1q4q5 - 20q2q4q5 + 9q1q2q4q5 - 18q3q4q5 + 53q2q3q4q5 - "
    "33q1q2q3q4q5";

constexpr const char* kExp3 =
    "-1 - 4q3 + 9q1q3 + 9q2q3 - 16q1q2q3";

constexpr const char* kHpph =
    "-q2 + 2q1q2 + 2q2q3 - 3q1q2q3";

constexpr const char* kHpphVacuo4 =
    "q1 - q3 + q1q3 + 2q2q3 - 4q1q2q3 + 2q1q4 - 3q1q2q4 + 2q3q4 - 4q1q3q4 - 3q2q3q4 + 7q1q2q3q4";

constexpr const char* kExp6 =
    "4 - 3q1 + 4q2 - 4q1q2 - q3 + q1q3 - 2q2q3 + 4q4 - 2q1q4 - 8q2q4 + 5q1q2q4 - 2q3q4 + 5q2q3q4 - "
    "q1q2q3q4";

// (1-q1)(1-q2) + (1-q1)q2 + (1-q1)(1-q2)(1-q3)q4 + (1-q1)q2(1-q3)(1-q4), all weights 4.
constexpr const char* kChaperone =
    "4 - 4q1 + 4q2 - 4q1q2 - 4q2q3 + 4q1q2q3 + 4q4 - 4q1q4 - 8q2q4 + 8q1q2q4 - 4q3q4 + 4q1q3q4 + 8q2q3q4 "
    "- 8q1q2q3q4";

constexpr const char* kExp6Quadratic =
    "4 - 3q1 + 4q2 + 6q1q2 - q3 + q1q3 - 2q2q3 + 4q4 - 2q1q4 - 8q2q4 + 4q3q4 + 14q5 - 12q1q5 - 12q2q5 "
    "+ 5q4q5 + 10q6 + 5q2q6 - 8q3q6 - 8q4q6 - q5q6";

constexpr const char* kExp6Ising =
    "13s1 + 3s2 + 7s3 + s4 - 8s5 - 8s6 + 6s1s2 + s1s3 - 2s2s3 - 2s1s4 - 8s2s4 + 4s3s4 - 12s1s5 "
    "- 12s2s5 + 5s4s5 + 5s2s6 - 8s3s6 - 8s4s6 - s5s6";

// Physical qubits of one Chimera cell: 1 -> 0, 2 -> {1,4}, 3 -> 5, 4 -> {2,6}, 5 -> 7, 6 -> 3,
// written with spin k = qubit k-1.
constexpr const char* kExp6Embedded =
    "13s1 + 3s2 + 7s6 + s3 - 8s8 - 8s4 + 6s1s5 + s1s6 - 2s2s6 - 2s1s7 - 8s5s3 + 4s6s3 - 12s1s8 "
    "- 12s2s8 + 5s3s8 + 5s5s4 - 8s6s4 - 8s7s4 - s8s4 - 13s2s5 - 13s3s7";

constexpr const char* kExp3Ising = "7s1 + 9s2 + 8s3 - 20s4 + 9s1s3 + 9s2s3 - 16s1s4 - 18s2s4 - 18s3s4";

struct Sanitization {
  const char* printed;
  const char* corrected;
};

constexpr Sanitization kPsvkmaFixes[] = {
    {"q1q4q5q7q7", "q1q4q5q6q7"},
    {"q2q4q6q6q7", "q2q4q5q6q7"},
    {"q5q2q4q5q6q7", "q1q2q4q5q6q7"},
    {"q3q1q5q6q7", "q3q4q5q6q7"},
    {"q1q4q4q5q6q7", "q1q3q4q5q6q7"},
};

// Rewrites whole monomial tokens; coefficients and signs stay as printed.
std::string sanitized_psvkma() {
  std::istringstream in(kPsvkmaVerbatim);
  std::string out, tok;
  while (in >> tok) {
    std::size_t q = tok.find('q');
    if (q != std::string::npos)
      for (const auto& f : kPsvkmaFixes)
        if (tok.compare(q, std::string::npos, f.printed) == 0) tok = tok.substr(0, q) + f.corrected;
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

std::vector<std::string> psvkma_notes() {
  std::vector<std::string> v;
  for (const auto& f : kPsvkmaFixes) v.push_back(std::string(f.printed) + " -> " + f.corrected);
  return v;
}

std::vector<FixtureInfo> build_catalogue() {
  using K = FixtureKind;
  return {
      {"psvkma", K::polynomial, "PSVKMA, 7 variables, monomial typos corrected", "sanitized", psvkma_notes()},
      {"psvkma-verbatim", K::polynomial, "PSVKMA, 7 variables, as printed (repeated indices collapse)", "verbatim", {}},
      {"exp1", K::polynomial, "PSVKMA with q1=1, q2=0 (5 variables)", "verbatim", {}},
      {"exp2", K::polynomial, "PSVKMA exp4 with q1=0 (5 variables)", "verbatim", {}},
      {"exp3", K::polynomial, "PSVKMA exp4 with q1=1, q2=0, q4=0 (3 variables)", "verbatim", {}},
      {"exp4", K::polynomial, "PSVKMA with q1=0 (6 variables)", "verbatim", {}},
      {"exp5", K::polynomial, "HPPH in vacuo (3 variables)", "verbatim", {}},
      {"hpph", K::polynomial, "HPPH in vacuo (3 variables)", "verbatim", {}},
      {"hpph-vacuo4", K::polynomial, "HPPH in vacuo with the third turn free (4 variables)", "verbatim", {}},
      {"chaperone", K::polynomial, "chaperone external potential (4 variables)", "derived", {}},
      {"exp6", K::polynomial, "HPPH with chaperone (4 variables)", "verbatim", {}},
      {"exp6-quadratic", K::polynomial, "exp6 after q1q2->q5 (delta 6), q3q4->q6 (delta 4)", "verbatim", {}},
      {"exp3-ising", K::ising, "exp3 after q2q3->q4, spin form divided by 4", "verbatim", {}},
      {"exp6-ising", K::ising, "exp6 quadratic as a normalized Ising model (scale 13/4)", "verbatim", {}},
      {"exp6-embedded", K::ising, "exp6 Ising on one Chimera cell, chains 2-2' and 4-4' (8 qubits)", "verbatim", {}},
      {"exp6-embedding", K::embedding, "chains for exp6-ising on a 1x1 Chimera cell", "verbatim", {}},
      {"exp3-embedding", K::embedding, "chains for exp3-ising on a 1x1 Chimera cell (5 qubits)", "derived", {}},
      {"hpph-instance", K::instance, "HPPH, HP model, overlap penalty 2", "derived", {}},
      {"hpph-chaperone-instance", K::instance, "HPPH with the chaperone potential (weights 4)", "derived", {}},
  };
}

void expect_kind(const std::string& name, FixtureKind kind) {
  const auto& info = fixture_info(name);
  if (info.kind != kind)
    throw Error(ErrorKind::validation, "fixture '" + name + "' is a " + to_string(info.kind) + ", not a " + to_string(kind));
}

}  // namespace

const char* to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::polynomial: return "polynomial";
    case FixtureKind::ising: return "ising";
    case FixtureKind::embedding: return "embedding";
    case FixtureKind::instance: return "instance";
  }
  return "?";
}

const std::vector<FixtureInfo>& list_fixtures() {
  static const std::vector<FixtureInfo> catalogue = build_catalogue();
  return catalogue;
}

const FixtureInfo& fixture_info(const std::string& name) {
  for (const auto& f : list_fixtures())
    if (f.name == name) return f;
  throw Error(ErrorKind::validation, "unknown fixture '" + name + "'");
}

std::string printed_text(const std::string& name) {
  expect_kind(name, FixtureKind::polynomial);
  if (name == "psvkma" || name == "psvkma-verbatim") return kPsvkmaVerbatim;
  if (name == "exp1") return kExp1;
  if (name == "exp2") return kExp2;
  if (name == "exp3") return kExp3;
  if (name == "exp4") return kExp4;
  if (name == "exp5" || name == "hpph") return kHpph;
  if (name == "hpph-vacuo4") return kHpphVacuo4;
  if (name == "chaperone") return kChaperone;
  if (name == "exp6") return kExp6;
  return kExp6Quadratic;
}

compiler::Polynomial load_polynomial(const std::string& name) {
  expect_kind(name, FixtureKind::polynomial);
  if (name == "psvkma") return compiler::Polynomial::parse(sanitized_psvkma(), 7);
  static const std::map<std::string, int> arity = {
      {"psvkma-verbatim", 7}, {"exp1", 5}, {"exp2", 5}, {"exp3", 3}, {"exp4", 6}, {"exp5", 3}, {"hpph", 3},
      {"hpph-vacuo4", 4}, {"chaperone", 4}, {"exp6", 4}, {"exp6-quadratic", 6}};
  return compiler::Polynomial::parse(printed_text(name), arity.at(name));
}

ising::IsingModel parse_ising(const std::string& text, int n, const Rational& divide_by) {
  std::string q = text;
  std::replace(q.begin(), q.end(), 's', 'q');
  auto p = compiler::Polynomial::parse(q, n);
  ising::IsingModel m(n);
  for (const auto& [mono, c] : p.terms()) {
    Rational v = c / divide_by;
    if (mono.empty()) m.offset += v;
    else if (mono.size() == 1) m.h[mono[0] - 1] += v;
    else if (mono.size() == 2) m.add_coupling(mono[0] - 1, mono[1] - 1, v);
    else throw Error(ErrorKind::validation, "Ising text has a term of degree " + std::to_string(mono.size()));
  }
  return m;
}

ising::IsingModel load_ising(const std::string& name) {
  expect_kind(name, FixtureKind::ising);
  if (name == "exp3-ising") {
    // Printed without its constant term.
    auto m = parse_ising(kExp3Ising, 4, 4);
    m.offset = Rational(13, 2);
    return m;
  }
  auto m = parse_ising(name == "exp6-ising" ? kExp6Ising : kExp6Embedded, name == "exp6-ising" ? 6 : 8, 13);
  m.scale = Rational(13, 4);
  m.offset = name == "exp6-ising" ? Rational(10) : Rational(10) + Rational(13, 4) * 2;
  return m;
}

embedding::Embedding load_embedding(const std::string& name) {
  expect_kind(name, FixtureKind::embedding);
  embedding::Embedding e;
  if (name == "exp6-embedding") {
    e.chains = {{0, {0}}, {1, {1, 4}}, {2, {5}}, {3, {2, 6}}, {4, {7}}, {5, {3}}};
    e.gamma = {{1, Rational(1)}, {3, Rational(1)}};
    // The printed Hamiltonian routes the (2,4) interaction through 2' and 4.
    e.edge_assign[{1, 3}] = {4, 2};
  } else {
    e.chains = {{0, {4}}, {1, {5}}, {2, {0}}, {3, {1, 6}}};
  }
  return e;
}

lattice::FoldingInstance load_instance(const std::string& name) {
  expect_kind(name, FixtureKind::instance);
  if (name == "hpph-instance") return lattice::FoldingInstance::standard(lattice::parse_sequence("HPPH"), lattice::InteractionModel::hp());
  // Turn-string positions 3,4 (second bond) and 5,6 (third bond).
  lattice::ExternalPotential ext;
  ext.terms.push_back({Rational(4), {{3, 0}, {4, 0}}});
  ext.terms.push_back({Rational(4), {{3, 0}, {4, 1}}});
  ext.terms.push_back({Rational(4), {{3, 0}, {4, 0}, {5, 0}, {6, 1}}});
  ext.terms.push_back({Rational(4), {{3, 0}, {4, 1}, {5, 0}, {6, 0}}});
  return lattice::FoldingInstance::standard(lattice::parse_sequence("HPPH"), lattice::InteractionModel::hp(), ext);
}

const std::vector<FixingRecipe>& fixing_recipes() {
  static const std::vector<FixingRecipe> recipes = {
      {"psvkma", "exp4", {{1, 0}}},
      {"psvkma", "exp1", {{1, 1}, {2, 0}}},
      {"exp4", "exp2", {{1, 0}}},
      {"exp4", "exp3", {{1, 1}, {2, 0}, {4, 0}}},
  };
  return recipes;
}

}  // namespace qafold::fixtures
