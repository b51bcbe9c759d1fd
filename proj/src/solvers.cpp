#include "qafold/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qafold/errors.hpp"

namespace qafold::solvers {

std::size_t SampleSet::total_reads() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.count;
  return n;
}

std::optional<Rational> SampleSet::min_energy() const {
  if (samples.empty()) return std::nullopt;
  return samples.front().energy;
}

std::size_t SampleSet::count_at(const Rational& energy) const {
  std::size_t n = 0;
  for (const auto& s : samples)
    if (s.energy == energy) n += s.count;
  return n;
}

SampleSet exhaustive_ground_states(const IsingModel& m) {
  auto table = ising::energy_table(m);
  std::int64_t lo = *std::min_element(table.values.begin(), table.values.end());
  SampleSet out;
  for (std::uint64_t a = 0; a < table.values.size(); ++a)
    if (table.values[a] == lo) out.samples.push_back({a, ising::spins_from_mask(a, m.n), table.at(a), 1});
  out.info["method"] = "exhaustive";
  out.info["states"] = std::to_string(table.values.size());
  return out;
}

std::vector<double> BetaSchedule::betas() const {
  validate();
  std::vector<double> b(sweeps);
  for (int k = 0; k < sweeps; ++k) {
    double t = sweeps == 1 ? 1.0 : static_cast<double>(k) / (sweeps - 1);
    b[k] = beta_start * std::pow(beta_end / beta_start, t);
  }
  return b;
}

void BetaSchedule::validate() const {
  if (sweeps < 1) throw Error(ErrorKind::validation, "annealing schedule needs at least one sweep");
  if (!(beta_start > 0) || !(beta_end >= beta_start) || !std::isfinite(beta_end))
    throw Error(ErrorKind::validation, "annealing schedule must be positive and non-decreasing in beta");
}

namespace {

struct Chain {
  const ising::DenseIsing& model;
  std::vector<int> s;
  double energy;

  Chain(const ising::DenseIsing& m, std::vector<int> init) : model(m), s(std::move(init)), energy(m.energy(s)) {}

  template <typename Rng>
  void sweep(double beta, Rng& rng, std::uniform_real_distribution<double>& u) {
    for (int i = 0; i < model.n; ++i) {
      double local = model.h[i];
      for (const auto& [j, c] : model.neighbours[i]) local += c * s[j];
      double delta = -2.0 * s[i] * local;
      if (delta <= 0 || u(rng) < std::exp(-beta * delta)) {
        s[i] = -s[i];
        energy += delta;
      }
    }
  }
};

}  // namespace

SampleSet simulated_anneal(const IsingModel& m, const AnnealOptions& options) {
  if (options.reads < 1) throw Error(ErrorKind::validation, "reads must be >= 1");
  if (m.n > 63) throw Error(ErrorKind::capacity, "sampler packs states into 64-bit masks; n <= 63");
  const auto betas = options.schedule.betas();
  ising::DenseIsing dense(m);
  std::map<std::uint64_t, std::size_t> counts;
  for (int read = 0; read < options.reads; ++read) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(read)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> init(m.n);
    for (auto& x : init) x = u(rng) < 0.5 ? -1 : 1;
    Chain c(dense, init);
    std::vector<int> best = c.s;
    double best_e = c.energy;
    for (double beta : betas) {
      c.sweep(beta, rng, u);
      if (options.keep_best && c.energy < best_e - 1e-12) {
        best_e = c.energy;
        best = c.s;
      }
    }
    ++counts[ising::mask_from_spins(options.keep_best ? best : c.s)];
  }
  SampleSet out;
  for (const auto& [a, n] : counts) out.samples.push_back({a, ising::spins_from_mask(a, m.n), m.energy(a), n});
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const Sample& x, const Sample& y) { return x.energy < y.energy; });
  out.info["method"] = "sa";
  out.info["seed"] = std::to_string(options.seed);
  out.info["reads"] = std::to_string(options.reads);
  out.info["sweeps"] = std::to_string(options.schedule.sweeps);
  out.info["beta_start"] = std::to_string(options.schedule.beta_start);
  out.info["beta_end"] = std::to_string(options.schedule.beta_end);
  out.info["keep_best"] = options.keep_best ? "true" : "false";
  return out;
}

std::vector<std::uint64_t> metropolis_histogram(const IsingModel& m, double beta, std::uint64_t sweeps,
                                                std::uint64_t seed) {
  if (m.n > 20) throw Error(ErrorKind::capacity, "histogram limited to 20 spins");
  ising::DenseIsing dense(m);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Chain c(dense, std::vector<int>(m.n, 1));
  std::vector<std::uint64_t> hist(std::size_t{1} << m.n, 0);
  for (std::uint64_t k = 0; k < sweeps; ++k) {
    c.sweep(beta, rng, u);
    ++hist[ising::mask_from_spins(c.s)];
  }
  return hist;
}

std::vector<double> gibbs_distribution(const IsingModel& m, double beta) {
  auto table = ising::energy_table(m);
  std::vector<double> e(table.values.size());
  for (std::size_t a = 0; a < e.size(); ++a) e[a] = static_cast<double>(table.values[a]) / table.denominator;
  double lo = *std::min_element(e.begin(), e.end());
  double z = 0;
  for (auto& x : e) z += (x = std::exp(-beta * (x - lo)));
  for (auto& x : e) x /= z;
  return e;
}

Landscape landscape_report(const compiler::Polynomial& p, const lattice::TurnTemplate* decoder) {
  if (p.arity() > compiler::kMaxExhaustiveVars)
    throw Error(ErrorKind::capacity, "landscape limited to " + std::to_string(compiler::kMaxExhaustiveVars) + " variables");
  if (decoder && static_cast<int>(decoder->free_count()) != p.arity())
    throw Error(ErrorKind::validation, "decoder has " + std::to_string(decoder->free_count()) +
                                           " free bits, polynomial has arity " + std::to_string(p.arity()));
  auto table = compiler::value_table(p);
  Landscape out;
  for (std::uint64_t a = 0; a < table.values.size(); ++a) {
    LandscapeEntry row;
    row.assignment = a;
    row.energy = table.at(a);
    if (decoder) {
      auto t = decoder->fill(a);
      auto f = lattice::decode_turns(t);
      row.valid = lattice::is_self_avoiding(f);
      row.turns = t.bits;
      row.points = lattice::format_points(f);
    }
    out.rows.push_back(std::move(row));
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const LandscapeEntry& x, const LandscapeEntry& y) { return x.energy < y.energy; });
  for (auto& row : out.rows) {
    if (out.levels.empty() || out.levels.back().first != row.energy) out.levels.push_back({row.energy, 0});
    ++out.levels.back().second;
    row.level = static_cast<int>(out.levels.size()) - 1;
  }
  return out;
}

}  // namespace qafold::solvers
