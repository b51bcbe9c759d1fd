#include "qafold/lattice.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "qafold/errors.hpp"

namespace qafold::lattice {

namespace {

Point step_for(char hi, char lo) {
  if (hi == '0' && lo == '0') return {0, -1};
  if (hi == '0' && lo == '1') return {1, 0};
  if (hi == '1' && lo == '0') return {-1, 0};
  return {0, 1};
}

const char* code_for(Point d) {
  if (d == Point{0, -1}) return "00";
  if (d == Point{1, 0}) return "01";
  if (d == Point{-1, 0}) return "10";
  if (d == Point{0, 1}) return "11";
  return nullptr;
}

bool adjacent(Point a, Point b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1;
}

}  // namespace

TurnString make_turns(std::string bits) {
  if (bits.size() < 2 || bits.size() % 2 != 0)
    throw Error(ErrorKind::encoding, "turn string must have even length >= 2, got " + std::to_string(bits.size()));
  if (bits.find_first_not_of("01") != std::string::npos)
    throw Error(ErrorKind::encoding, "turn string may only contain 0 and 1: '" + bits + "'");
  return TurnString{std::move(bits)};
}

Fold decode_turns(const TurnString& t) {
  make_turns(t.bits);
  Fold f{{0, 0}};
  f.reserve(t.bonds() + 1);
  for (std::size_t b = 0; b < t.bonds(); ++b) {
    Point d = step_for(t.bits[2 * b], t.bits[2 * b + 1]);
    f.push_back({f.back().x + d.x, f.back().y + d.y});
  }
  return f;
}

TurnString encode_fold(const Fold& f) {
  if (f.size() < 2) throw Error(ErrorKind::geometry, "fold needs at least two points");
  std::string bits;
  bits.reserve(2 * (f.size() - 1));
  for (std::size_t i = 1; i < f.size(); ++i) {
    const char* code = code_for({f[i].x - f[i - 1].x, f[i].y - f[i - 1].y});
    if (!code) throw Error(ErrorKind::geometry, "non-unit step between points " + std::to_string(i - 1) + " and " + std::to_string(i));
    bits += code;
  }
  return TurnString{bits};
}

bool is_self_avoiding(const Fold& f) {
  std::set<Point> seen(f.begin(), f.end());
  return seen.size() == f.size();
}

std::string format_points(const Fold& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << ' ';
    os << '(' << f[i].x << ',' << f[i].y << ')';
  }
  return os.str();
}

TurnString reflect(const TurnString& t) {
  TurnString out = t;
  for (std::size_t b = 0; b < t.bonds(); ++b) {
    char& hi = out.bits[2 * b];
    char& lo = out.bits[2 * b + 1];
    if (hi == lo) hi = lo = (hi == '0' ? '1' : '0');
  }
  return out;
}

TurnTemplate TurnTemplate::parse(const std::string& pattern) {
  if (pattern.size() < 2 || pattern.size() % 2 != 0)
    throw Error(ErrorKind::encoding, "turn pattern must have even length >= 2: '" + pattern + "'");
  TurnTemplate t;
  t.pattern_ = pattern;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    char c = pattern[i];
    if (c == 'q') t.free_positions_.push_back(i);
    else if (c != '0' && c != '1')
      throw Error(ErrorKind::encoding, "turn pattern may only contain 0, 1 and q: '" + pattern + "'");
  }
  return t;
}

TurnTemplate TurnTemplate::standard(std::size_t residues, bool external_potential) {
  if (residues < 2) throw Error(ErrorKind::validation, "a chain needs at least two residues");
  std::string p = "01";
  std::size_t rest = 2 * (residues - 2);
  if (!external_potential && rest > 0) {
    p += '0';
    --rest;
  }
  p.append(rest, 'q');
  return parse(p);
}

TurnString TurnTemplate::fill(std::uint64_t assignment) const {
  std::string bits = pattern_;
  for (std::size_t k = 0; k < free_positions_.size(); ++k)
    bits[free_positions_[k]] = ((assignment >> k) & 1u) ? '1' : '0';
  return TurnString{bits};
}

std::optional<std::uint64_t> TurnTemplate::match(const TurnString& t) const {
  if (t.bits.size() != pattern_.size()) return std::nullopt;
  std::uint64_t a = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < pattern_.size(); ++i) {
    if (pattern_[i] == 'q') {
      if (t.bits[i] == '1') a |= (std::uint64_t{1} << k);
      ++k;
    } else if (pattern_[i] != t.bits[i]) {
      return std::nullopt;
    }
  }
  return a;
}

TurnTemplate TurnTemplate::with_fixed(const std::map<int, int>& bindings) const {
  std::string p = pattern_;
  for (auto [var, value] : bindings) {
    if (var < 1 || static_cast<std::size_t>(var) > free_positions_.size())
      throw Error(ErrorKind::validation, "unknown free variable q" + std::to_string(var));
    p[free_positions_[var - 1]] = value ? '1' : '0';
  }
  return parse(p);
}

std::string assignment_bits(std::uint64_t assignment, std::size_t arity) {
  std::string s(arity, '0');
  for (std::size_t k = 0; k < arity; ++k)
    if ((assignment >> k) & 1u) s[k] = '1';
  return s;
}

AminoSequence parse_sequence(const std::string& letters) {
  AminoSequence seq;
  for (char c : letters) {
    if (c == ' ' || c == '-') continue;
    seq.emplace_back(1, c);
  }
  if (seq.size() < 2) throw Error(ErrorKind::validation, "sequence needs at least two residues");
  return seq;
}

InteractionModel InteractionModel::hp() {
  InteractionModel m;
  m.kind_ = ModelKind::hp;
  m.alphabet_ = {"H", "P"};
  m.energies_[{"H", "H"}] = Rational(-1);
  return m;
}

InteractionModel InteractionModel::table(
    ModelKind kind, const std::vector<std::tuple<std::string, std::string, Rational>>& entries) {
  InteractionModel m;
  m.kind_ = kind;
  std::set<std::string> labels;
  for (const auto& [a, b, e] : entries) {
    labels.insert(a);
    labels.insert(b);
    for (auto key : {std::pair{a, b}, std::pair{b, a}}) {
      auto [it, inserted] = m.energies_.emplace(key, e);
      if (!inserted && it->second != e)
        throw Error(ErrorKind::validation, "asymmetric pair energy for " + a + "-" + b);
    }
  }
  m.alphabet_.assign(labels.begin(), labels.end());
  return m;
}

Rational InteractionModel::pair_energy(const std::string& a, const std::string& b) const {
  if (!knows(a) || !knows(b))
    throw Error(ErrorKind::validation, "residue label not in interaction model: " + (knows(a) ? b : a));
  auto it = energies_.find({a, b});
  return it == energies_.end() ? Rational(0) : it->second;
}

bool InteractionModel::knows(const std::string& label) const {
  return std::find(alphabet_.begin(), alphabet_.end(), label) != alphabet_.end();
}

void InteractionModel::check_sequence(const AminoSequence& seq) const {
  for (const auto& r : seq)
    if (!knows(r)) throw Error(ErrorKind::validation, "residue label not in interaction model: " + r);
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::hp: return "HP";
    case ModelKind::mj: return "MJ";
    case ModelKind::custom: return "custom";
  }
  return "custom";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "HP") return ModelKind::hp;
  if (s == "MJ") return ModelKind::mj;
  if (s == "custom") return ModelKind::custom;
  throw Error(ErrorKind::validation, "unknown interaction model '" + s + "'");
}

Rational ExternalPotential::evaluate(const TurnString& t) const {
  Rational sum(0);
  for (const auto& term : terms) {
    bool hit = true;
    for (auto [pos, value] : term.bits) {
      if (pos < 1 || pos > t.bits.size())
        throw Error(ErrorKind::validation, "external potential references turn bit " + std::to_string(pos));
      if ((t.bits[pos - 1] == '1') != (value != 0)) {
        hit = false;
        break;
      }
    }
    if (hit) sum += term.weight;
  }
  return sum;
}

void ExternalPotential::validate() const {
  for (const auto& term : terms)
    if (term.weight < 0) throw Error(ErrorKind::validation, "external potential weights must be nonnegative");
}

Rational fold_energy(const Fold& f, const AminoSequence& seq, const InteractionModel& m,
                     const ExternalPotential& ext, const Rational& overlap_penalty) {
  if (seq.size() != f.size())
    throw Error(ErrorKind::validation, "sequence length does not match fold length");
  Rational e(0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (f[i] == f[j]) e += overlap_penalty;
      else if (j - i >= 2 && adjacent(f[i], f[j])) e += m.pair_energy(seq[i], seq[j]);
    }
  }
  if (!ext.empty()) e += ext.evaluate(encode_fold(f));
  return e;
}

FoldingInstance FoldingInstance::standard(AminoSequence seq, InteractionModel model, ExternalPotential ext,
                                          Rational overlap) {
  FoldingInstance inst;
  inst.turns = TurnTemplate::standard(seq.size(), !ext.empty());
  inst.sequence = std::move(seq);
  inst.model = std::move(model);
  inst.external = std::move(ext);
  inst.overlap_penalty = overlap;
  return inst;
}

void FoldingInstance::validate() const {
  if (sequence.size() < 2) throw Error(ErrorKind::validation, "sequence needs at least two residues");
  if (turns.length() != 2 * (sequence.size() - 1))
    throw Error(ErrorKind::validation, "turn template length " + std::to_string(turns.length()) +
                                           " does not match " + std::to_string(sequence.size()) + " residues");
  model.check_sequence(sequence);
  external.validate();
  if (overlap_penalty < 0) throw Error(ErrorKind::validation, "overlap penalty must be nonnegative");
}

Rational FoldingInstance::energy(std::uint64_t assignment) const {
  return fold_energy(decode_turns(turns.fill(assignment)), sequence, model, external, overlap_penalty);
}

std::vector<LandscapeRow> enumerate_landscape(const FoldingInstance& inst) {
  inst.validate();
  const std::size_t l = inst.arity();
  if (l > kMaxExhaustiveBits)
    throw Error(ErrorKind::capacity, "landscape enumeration limited to " + std::to_string(kMaxExhaustiveBits) +
                                         " free bits, instance has " + std::to_string(l));
  std::vector<LandscapeRow> rows(std::size_t{1} << l);
  for (std::uint64_t a = 0; a < rows.size(); ++a) {
    auto& r = rows[a];
    r.assignment = a;
    r.turns = inst.turns.fill(a);
    r.fold = decode_turns(r.turns);
    r.valid = is_self_avoiding(r.fold);
    r.energy = fold_energy(r.fold, inst.sequence, inst.model, inst.external, inst.overlap_penalty);
  }
  std::sort(rows.begin(), rows.end(), [](const LandscapeRow& a, const LandscapeRow& b) {
    return std::tie(a.energy, a.assignment) < std::tie(b.energy, b.assignment);
  });
  return rows;
}

std::size_t count_self_avoiding(const TurnTemplate& t) {
  if (t.free_count() > kMaxExhaustiveBits) throw Error(ErrorKind::capacity, "too many free bits to count");
  std::size_t n = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << t.free_count()); ++a)
    n += is_self_avoiding(decode_turns(t.fill(a)));
  return n;
}

std::size_t count_distinct_shapes(const TurnTemplate& t, bool with_reversal) {
  if (t.free_count() > kMaxExhaustiveBits) throw Error(ErrorKind::capacity, "too many free bits to count");
  static constexpr int kMaps[8][4] = {{1, 0, 0, 1},  {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0},
                                      {1, 0, 0, -1}, {-1, 0, 0, 1}, {0, 1, 1, 0},   {0, -1, -1, 0}};
  std::set<Fold> shapes;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << t.free_count()); ++a) {
    Fold f = decode_turns(t.fill(a));
    if (!is_self_avoiding(f)) continue;
    std::optional<Fold> best;
    for (int r = 0; r < (with_reversal ? 2 : 1); ++r) {
      Fold walk = f;
      if (r) std::reverse(walk.begin(), walk.end());
      for (const auto& m : kMaps) {
        Fold img;
        for (const Point& p : walk) img.push_back({m[0] * p.x + m[1] * p.y, m[2] * p.x + m[3] * p.y});
        const Point o = img.front();
        for (auto& p : img) p = {p.x - o.x, p.y - o.y};
        if (!best || img < *best) best = img;
      }
    }
    shapes.insert(*best);
  }
  return shapes.size();
}

}  // namespace qafold::lattice
