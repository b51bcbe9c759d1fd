#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qafold/rational.hpp"

namespace qafold::lattice {

struct Point {
  int x = 0;
  int y = 0;
  auto operator<=>(const Point&) const = default;
};

/// A lattice walk. points[0] = (0,0), points[1] = (1,0) for folds produced by decode_turns.
using Fold = std::vector<Point>;

/// Two bits per bond: 00 down, 01 right, 10 left, 11 up.
struct TurnString {
  std::string bits;
  std::size_t bonds() const { return bits.size() / 2; }
  bool operator==(const TurnString&) const = default;
};

TurnString make_turns(std::string bits);
Fold decode_turns(const TurnString& t);
TurnString encode_fold(const Fold& f);
bool is_self_avoiding(const Fold& f);
std::string format_points(const Fold& f);

/// Mirror image about the first-bond (x) axis: swaps the up and down codes.
TurnString reflect(const TurnString& t);

/// Positions of a turn string that are fixed or bound to a free variable.
/// Free variable k (1-based) is bit k-1 of an assignment mask.
class TurnTemplate {
 public:
  /// Pattern over {'0','1','q'}; every 'q' becomes the next free variable.
  static TurnTemplate parse(const std::string& pattern);
  /// "01" + "0" + q... (in vacuo, 2N-5 free bits) or "01" + q... (external field, 2N-4).
  static TurnTemplate standard(std::size_t residues, bool external_potential);

  std::size_t free_count() const { return free_positions_.size(); }
  std::size_t length() const { return pattern_.size(); }
  const std::string& pattern() const { return pattern_; }
  /// 1-based turn-string position of free variable k (1-based).
  std::size_t position_of(std::size_t var) const { return free_positions_.at(var - 1) + 1; }

  TurnString fill(std::uint64_t assignment) const;
  /// Inverse of fill; nullopt when the fixed positions disagree.
  std::optional<std::uint64_t> match(const TurnString& t) const;

  /// Same template with extra free variables pinned (1-based var -> bit).
  /// The remaining free variables keep their relative order.
  TurnTemplate with_fixed(const std::map<int, int>& bindings) const;

 private:
  std::string pattern_;
  std::vector<std::size_t> free_positions_;
};

/// q1 q2 ... ql as a character string.
std::string assignment_bits(std::uint64_t assignment, std::size_t arity);

using AminoSequence = std::vector<std::string>;
/// One label per character ("HPPH", "PSVKMA").
AminoSequence parse_sequence(const std::string& letters);

enum class ModelKind { hp, mj, custom };

class InteractionModel {
 public:
  static InteractionModel hp();
  /// MJ or custom contact table. Symmetric entries are filled automatically;
  /// conflicting (a,b) and (b,a) values are rejected.
  static InteractionModel table(ModelKind kind,
                                const std::vector<std::tuple<std::string, std::string, Rational>>& entries);

  ModelKind kind() const { return kind_; }
  Rational pair_energy(const std::string& a, const std::string& b) const;
  bool knows(const std::string& label) const;
  void check_sequence(const AminoSequence& seq) const;
  const std::map<std::pair<std::string, std::string>, Rational>& entries() const { return energies_; }

 private:
  ModelKind kind_ = ModelKind::hp;
  std::map<std::pair<std::string, std::string>, Rational> energies_;
  std::vector<std::string> alphabet_;
};

const char* to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& s);

/// Sum of weight * [all listed turn bits take the required value].
struct ExternalPotential {
  struct Term {
    Rational weight;
    std::vector<std::pair<std::size_t, int>> bits;  // 1-based turn-string position, required value
  };
  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }
  Rational evaluate(const TurnString& t) const;
  void validate() const;
};

/// Ground-truth energy: contacts between non-bonded lattice neighbours, plus
/// overlap_penalty per coinciding residue pair, plus external terms.
Rational fold_energy(const Fold& f, const AminoSequence& seq, const InteractionModel& m,
                     const ExternalPotential& ext, const Rational& overlap_penalty);

/// Everything the energy oracle needs for one folding problem.
struct FoldingInstance {
  AminoSequence sequence;
  InteractionModel model = InteractionModel::hp();
  ExternalPotential external;
  Rational overlap_penalty{2};
  TurnTemplate turns;

  static FoldingInstance standard(AminoSequence seq, InteractionModel model,
                                  ExternalPotential ext = {}, Rational overlap = Rational(2));
  std::size_t arity() const { return turns.free_count(); }
  Rational energy(std::uint64_t assignment) const;
  void validate() const;
};

struct LandscapeRow {
  std::uint64_t assignment = 0;
  TurnString turns;
  Fold fold;
  bool valid = false;
  Rational energy;
};

inline constexpr std::size_t kMaxExhaustiveBits = 24;

/// All 2^l assignments, sorted by energy then by assignment mask.
std::vector<LandscapeRow> enumerate_landscape(const FoldingInstance& inst);

std::size_t count_self_avoiding(const TurnTemplate& t);
/// Self-avoiding folds up to rotation and reflection (and chain reversal if asked).
std::size_t count_distinct_shapes(const TurnTemplate& t, bool with_reversal);

}  // namespace qafold::lattice
