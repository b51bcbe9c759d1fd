#include "qafold/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "qafold/errors.hpp"

namespace qafold::embedding {

int Embedding::qubit_count() const {
  int n = 0;
  for (const auto& [v, c] : chains) n += static_cast<int>(c.size());
  return n;
}

std::vector<int> Embedding::qubits() const {
  std::vector<int> q;
  for (const auto& [v, c] : chains) q.insert(q.end(), c.begin(), c.end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

namespace {

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

std::vector<std::vector<int>> logical_adjacency(const IsingModel& m) {
  std::vector<std::vector<int>> adj(m.n);
  for (const auto& [ij, v] : m.J) {
    adj[ij.first].push_back(ij.second);
    adj[ij.second].push_back(ij.first);
  }
  return adj;
}

bool chain_connected(const std::vector<int>& chain, const HardwareGraph& g) {
  if (chain.empty()) return false;
  std::set<int> members(chain.begin(), chain.end());
  std::set<int> seen{chain.front()};
  std::vector<int> stack{chain.front()};
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int r : g.neighbours(q))
      if (members.count(r) && seen.insert(r).second) stack.push_back(r);
  }
  return seen.size() == members.size();
}

std::optional<std::pair<int, int>> smallest_coupler(const std::vector<int>& a, const std::vector<int>& b,
                                                    const HardwareGraph& g) {
  std::optional<std::pair<int, int>> best;
  for (int x : a)
    for (int y : b)
      if (g.has_edge(x, y) && (!best || ordered(x, y) < ordered(best->first, best->second))) best = {x, y};
  return best;
}

// BFS spanning tree over the chain-induced subgraph, rooted at the lowest id.
std::vector<std::pair<int, int>> spanning_tree(const std::vector<int>& chain, const HardwareGraph& g) {
  std::set<int> members(chain.begin(), chain.end());
  std::vector<std::pair<int, int>> tree;
  std::set<int> seen{*members.begin()};
  std::queue<int> frontier;
  frontier.push(*members.begin());
  while (!frontier.empty()) {
    int q = frontier.front();
    frontier.pop();
    for (int r : g.neighbours(q))
      if (members.count(r) && seen.insert(r).second) {
        tree.push_back(ordered(q, r));
        frontier.push(r);
      }
  }
  return tree;
}

std::vector<std::string> structural_violations(const IsingModel& m, const Embedding& e, const HardwareGraph& g) {
  std::vector<std::string> out;
  std::map<int, int> owner;
  for (int v = 0; v < m.n; ++v) {
    auto it = e.chains.find(v);
    if (it == e.chains.end() || it->second.empty()) out.push_back("variable " + std::to_string(v) + " has no chain");
  }
  for (const auto& [v, chain] : e.chains) {
    if (v < 0 || v >= m.n) {
      out.push_back("chain for unknown variable " + std::to_string(v));
      continue;
    }
    for (int q : chain) {
      if (!g.usable(q)) out.push_back("qubit " + std::to_string(q) + " of variable " + std::to_string(v) + " is not usable");
      auto [it, fresh] = owner.emplace(q, v);
      if (!fresh && it->second != v)
        out.push_back("chains of variables " + std::to_string(it->second) + " and " + std::to_string(v) +
                      " overlap at qubit " + std::to_string(q));
    }
    if (!chain.empty() && !chain_connected(chain, g)) out.push_back("chain of variable " + std::to_string(v) + " is disconnected");
  }
  for (const auto& [ij, val] : m.J) {
    auto a = e.chains.find(ij.first), b = e.chains.find(ij.second);
    if (a == e.chains.end() || b == e.chains.end()) continue;
    std::string name = "(" + std::to_string(ij.first) + ", " + std::to_string(ij.second) + ")";
    if (auto as = e.edge_assign.find(ij); as != e.edge_assign.end()) {
      auto [x, y] = as->second;
      bool in_a = std::count(a->second.begin(), a->second.end(), x) > 0;
      bool in_b = std::count(b->second.begin(), b->second.end(), y) > 0;
      if (!in_a || !in_b || !g.has_edge(x, y))
        out.push_back("edge_assign for logical edge " + name + " references absent coupler (" + std::to_string(x) +
                      ", " + std::to_string(y) + ")");
    } else if (!smallest_coupler(a->second, b->second, g)) {
      out.push_back("logical edge " + name + " has no physical coupler");
    }
  }
  for (const auto& [ij, pq] : e.edge_assign)
    if (ij.first >= ij.second || m.coupling(ij.first, ij.second) == 0)
      out.push_back("edge_assign names (" + std::to_string(ij.first) + ", " + std::to_string(ij.second) +
                    ") which is not a logical edge with i < j");
  return out;
}

EmbeddedIsing build(const IsingModel& m, const Embedding& e, const HardwareGraph& g, FieldPlan fields,
                    const std::map<int, Rational>& gamma) {
  EmbeddedIsing out;
  out.embedding = e;
  out.embedding.gamma = gamma;
  out.qubits = e.qubits();
  out.owner.resize(out.qubits.size());
  for (std::size_t k = 0; k < out.qubits.size(); ++k) out.index[out.qubits[k]] = static_cast<int>(k);
  for (const auto& [v, chain] : e.chains)
    for (int q : chain) out.owner[out.index[q]] = v;

  IsingModel raw(static_cast<int>(out.qubits.size()));
  for (const auto& [v, chain] : e.chains) {
    if (fields == FieldPlan::root) {
      raw.h[out.index[*std::min_element(chain.begin(), chain.end())]] += m.h[v];
    } else {
      Rational share = m.h[v] / static_cast<std::int64_t>(chain.size());
      for (int q : chain) raw.h[out.index[q]] += share;
    }
  }
  for (const auto& [ij, val] : m.J) {
    std::pair<int, int> phys;
    if (auto it = e.edge_assign.find(ij); it != e.edge_assign.end())
      phys = it->second;
    else
      phys = *smallest_coupler(e.chains.at(ij.first), e.chains.at(ij.second), g);
    out.embedding.edge_assign[ij] = phys;
    raw.add_coupling(out.index[phys.first], out.index[phys.second], val);
  }
  Rational dropped(0);
  for (const auto& [v, chain] : e.chains) {
    if (chain.size() < 2) continue;
    const Rational& gam = gamma.at(v);
    for (auto [a, b] : spanning_tree(chain, g)) {
      raw.add_coupling(out.index[a], out.index[b], -gam);
      out.chain_couplers.push_back(ordered(out.index[a], out.index[b]));
      dropped += gam;
    }
  }
  Rational s = raw.max_abs_coefficient();
  if (s == 0) s = 1;
  out.model = raw;
  for (auto& v : out.model.h) v /= s;
  for (auto& [ij, v] : out.model.J) v /= s;
  out.model.scale = m.scale * s;
  out.model.offset = m.offset + m.scale * dropped;
  return out;
}

Rational logical_threshold(const IsingModel& m) {
  if (m.n > ising::kMaxExhaustiveSpins) return Rational(0);
  auto t = ising::energy_table(m);
  std::int64_t lo = *std::min_element(t.values.begin(), t.values.end());
  return std::max(Rational(0), m.scale * Rational(lo, t.denominator) + m.offset);
}

// Smallest raw Ising value v (over the common denominator) with binary energy > threshold.
bool broken_states_above(const EmbeddedIsing& emb, const Rational& threshold) {
  auto t = ising::energy_table(emb.model);
  Rational bound = (threshold - emb.model.offset) * t.denominator / emb.model.scale;
  for (std::uint64_t a = 0; a < t.values.size(); ++a)
    if (Rational(t.values[a]) <= bound && !emb.consistent(a)) return false;
  return true;
}

std::map<int, Rational> resolve_gamma(const IsingModel& m, const Embedding& e, const HardwareGraph& g,
                                      FieldPlan fields, const std::optional<Rational>& uniform) {
  std::map<int, Rational> gamma;
  bool need_auto = false;
  for (const auto& [v, chain] : e.chains) {
    if (chain.size() < 2) continue;
    if (uniform)
      gamma[v] = *uniform;
    else if (auto it = e.gamma.find(v); it != e.gamma.end())
      gamma[v] = it->second;
    else
      need_auto = true;
  }
  if (need_auto) {
    Rational a = auto_gamma(m, e, g, fields);
    for (const auto& [v, chain] : e.chains)
      if (chain.size() >= 2 && !gamma.count(v)) gamma[v] = a;
  }
  for (const auto& [v, gam] : gamma)
    if (gam <= 0) throw Error(ErrorKind::validation, "chain strength for variable " + std::to_string(v) + " must be positive");
  return gamma;
}

}  // namespace

bool EmbeddedIsing::consistent(std::uint64_t a) const {
  std::map<int, int> seen;
  for (std::size_t k = 0; k < owner.size(); ++k) {
    int bit = (a >> k) & 1u;
    auto [it, fresh] = seen.emplace(owner[k], bit);
    if (!fresh && it->second != bit) return false;
  }
  return true;
}

std::uint64_t EmbeddedIsing::lift(std::uint64_t logical) const {
  std::uint64_t a = 0;
  for (std::size_t k = 0; k < owner.size(); ++k)
    if ((logical >> owner[k]) & 1u) a |= std::uint64_t{1} << k;
  return a;
}

Rational auto_gamma(const IsingModel& m, const Embedding& e, const HardwareGraph& g, FieldPlan fields) {
  Rational threshold = logical_threshold(m);
  // Any broken chain costs at least 2 gamma on top of a physical part bounded by -L.
  Rational L(0);
  for (const auto& v : m.h) L += abs(v);
  for (const auto& [ij, v] : m.J) L += abs(v);
  Rational need = ((threshold - m.offset) / m.scale + L) / 2;
  std::int64_t halves = std::max<std::int64_t>(1, boost::rational_cast<std::int64_t>(need * 2) + 1);
  while (Rational(halves, 2) <= need) ++halves;
  Rational bound(halves, 2);

  std::set<int> fixed;
  for (const auto& [v, chain] : e.chains)
    if (chain.size() >= 2 && e.gamma.count(v)) fixed.insert(v);
  if (e.qubit_count() > kGammaSearchQubits) return bound;

  for (std::int64_t k = 1; Rational(k, 2) < bound; ++k) {
    std::map<int, Rational> gamma;
    for (const auto& [v, chain] : e.chains)
      if (chain.size() >= 2) gamma[v] = fixed.count(v) ? e.gamma.at(v) : Rational(k, 2);
    if (broken_states_above(build(m, e, g, fields, gamma), threshold)) return Rational(k, 2);
  }
  return bound;
}

EmbeddedIsing apply_embedding(const IsingModel& m, const Embedding& e, const HardwareGraph& g,
                              const ApplyOptions& options) {
  auto problems = structural_violations(m, e, g);
  if (!problems.empty()) throw Error(ErrorKind::validation, "invalid embedding: " + problems.front());
  return build(m, e, g, options.fields, resolve_gamma(m, e, g, options.fields, options.gamma));
}

Unembedded unembed(const std::vector<int>& spins, const EmbeddedIsing& emb, ChainPolicy policy) {
  if (spins.size() != emb.qubits.size())
    throw Error(ErrorKind::validation, "sample has " + std::to_string(spins.size()) + " spins, embedding uses " +
                                           std::to_string(emb.qubits.size()) + " qubits");
  Unembedded out;
  std::map<int, std::pair<int, int>> votes;  // logical -> (#up, #down)
  for (std::size_t k = 0; k < spins.size(); ++k) (spins[k] > 0 ? votes[emb.owner[k]].first : votes[emb.owner[k]].second)++;
  std::vector<int> logical(votes.empty() ? 0 : votes.rbegin()->first + 1, 1);
  for (const auto& [v, c] : votes) {
    if (c.first && c.second) ++out.broken_chains;
    logical[v] = c.first >= c.second ? 1 : -1;
  }
  if (policy == ChainPolicy::majority || out.broken_chains == 0) out.spins = std::move(logical);
  return out;
}

VerificationReport verify_embedding(const IsingModel& m, const Embedding& e, const HardwareGraph& g,
                                    const ApplyOptions& options) {
  VerificationReport r;
  r.violations = structural_violations(m, e, g);
  if (!r.violations.empty() || e.qubit_count() > kSpectrumCheckQubits) return r;

  EmbeddedIsing emb = apply_embedding(m, e, g, options);
  auto logical = ising::energy_table(m);
  auto physical = ising::energy_table(emb.model);
  r.spectrum_checked = true;

  Rational threshold = logical_threshold(m);
  std::size_t mismatched = 0, risky = 0;
  for (std::uint64_t a = 0; a < physical.values.size(); ++a) {
    Rational eb = emb.model.scale * physical.at(a) + emb.model.offset;
    if (emb.consistent(a)) {
      std::uint64_t la = 0;
      for (std::size_t k = 0; k < emb.owner.size(); ++k)
        if ((a >> k) & 1u) la |= std::uint64_t{1} << emb.owner[k];
      if (eb != m.scale * logical.at(la) + m.offset) ++mismatched;
    } else {
      if (!r.min_broken_energy || eb < *r.min_broken_energy) r.min_broken_energy = eb;
      if (eb <= threshold) ++risky;
    }
  }
  if (mismatched)
    r.violations.push_back(std::to_string(mismatched) + " consistent-chain states disagree with the logical energy");
  if (risky)
    r.violations.push_back("spectral risk: " + std::to_string(risky) + " broken-chain states at binary energy <= " +
                           to_string(threshold) + " (minimum " + to_string(*r.min_broken_energy) + ")");

  std::int64_t lmin = *std::min_element(logical.values.begin(), logical.values.end());
  std::int64_t pmin = *std::min_element(physical.values.begin(), physical.values.end());
  std::set<std::uint64_t> expected, found;
  for (std::uint64_t a = 0; a < logical.values.size(); ++a)
    if (logical.values[a] == lmin) expected.insert(emb.lift(a));
  for (std::uint64_t a = 0; a < physical.values.size(); ++a)
    if (physical.values[a] == pmin) found.insert(a);
  r.minimizers_match = expected == found;
  if (!r.minimizers_match) r.violations.push_back("physical minimizers do not map onto the logical minimizers");
  return r;
}

// ---------------------------------------------------------------------------
// Heuristic search

namespace {

class Placer {
 public:
  Placer(const IsingModel& m, const HardwareGraph& g, const std::map<int, std::vector<int>>& hint, std::mt19937_64& rng)
      : g_(g), adj_(logical_adjacency(m)), chains_(m.n), usage_(g.qubit_count(), 0), fixed_(g.qubit_count(), false),
        hinted_(m.n, false), rng_(rng) {
    base_ = std::max(2.0, static_cast<double>(g.qubit_count()));
    for (const auto& [v, chain] : hint) {
      chains_[v] = chain;
      hinted_[v] = true;
      for (int q : chain) {
        fixed_[q] = true;
        ++usage_[q];
      }
    }
  }

  bool hinted(int v) const { return hinted_[v]; }
  const std::vector<int>& chain(int v) const { return chains_[v]; }

  void remove(int v) {
    for (int q : chains_[v]) --usage_[q];
    chains_[v].clear();
  }

  bool place(int v) {
    std::vector<int> placed;
    for (int u : adj_[v])
      if (!chains_[u].empty()) placed.push_back(u);
    std::vector<int> chain;
    if (placed.empty()) {
      std::vector<int> best;
      double bw = kInf;
      for (int q = 0; q < g_.qubit_count(); ++q) {
        double w = weight(q);
        if (w < bw) {
          bw = w;
          best = {q};
        } else if (w == bw && w < kInf) {
          best.push_back(q);
        }
      }
      if (best.empty()) return false;
      chain = {pick(best)};
    } else {
      std::vector<std::vector<double>> dist;
      std::vector<std::vector<int>> pred;
      std::vector<bool> blocked(g_.qubit_count(), false);
      for (int u : placed)
        for (int q : chains_[u]) blocked[q] = true;
      for (int u : placed) {
        dist.emplace_back();
        pred.emplace_back();
        dijkstra(chains_[u], dist.back(), pred.back());
      }
      std::vector<int> best;
      double bc = kInf;
      for (int q = 0; q < g_.qubit_count(); ++q) {
        if (blocked[q] || weight(q) >= kInf) continue;
        double c = -(static_cast<double>(placed.size()) - 1) * weight(q);
        bool reach = true;
        for (const auto& d : dist) {
          if (d[q] >= kInf) {
            reach = false;
            break;
          }
          c += d[q];
        }
        if (!reach) continue;
        if (c < bc * (1 - 1e-12)) {
          bc = c;
          best = {q};
        } else if (c <= bc * (1 + 1e-12)) {
          best.push_back(q);
        }
      }
      if (best.empty()) return false;
      int root = pick(best);
      chain.push_back(root);
      for (std::size_t k = 0; k < placed.size(); ++k) {
        const auto& src = chains_[placed[k]];
        for (int p = pred[k][root]; p >= 0 && std::find(src.begin(), src.end(), p) == src.end(); p = pred[k][p])
          chain.push_back(p);
      }
      std::sort(chain.begin(), chain.end());
      chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
    }
    chains_[v] = chain;
    for (int q : chain) ++usage_[q];
    return true;
  }

  /// Variables that are unplaced or share a qubit with another chain.
  std::vector<int> conflicts() const {
    std::vector<int> out;
    for (std::size_t v = 0; v < chains_.size(); ++v) {
      bool bad = chains_[v].empty();
      for (int q : chains_[v]) bad = bad || usage_[q] > 1;
      if (bad) out.push_back(static_cast<int>(v));
    }
    return out;
  }

  void prune() {
    for (std::size_t v = 0; v < chains_.size(); ++v) {
      if (hinted_[v]) continue;
      bool changed = true;
      while (changed && chains_[v].size() > 1) {
        changed = false;
        for (auto it = chains_[v].rbegin(); it != chains_[v].rend(); ++it) {
          std::vector<int> trial = chains_[v];
          trial.erase(std::find(trial.begin(), trial.end(), *it));
          if (!chain_connected(trial, g_)) continue;
          bool keeps = true;
          for (int u : adj_[v]) keeps = keeps && smallest_coupler(trial, chains_[u], g_).has_value();
          if (!keeps) continue;
          --usage_[*it];
          chains_[v] = trial;
          changed = true;
          break;
        }
      }
    }
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double weight(int q) const {
    if (!g_.usable(q) || fixed_[q]) return kInf;
    return std::pow(base_, std::min(usage_[q], 8));
  }

  int pick(const std::vector<int>& options) {
    return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng_)];
  }

  void dijkstra(const std::vector<int>& sources, std::vector<double>& dist, std::vector<int>& pred) const {
    dist.assign(g_.qubit_count(), kInf);
    pred.assign(g_.qubit_count(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int s : sources) {
      dist[s] = 0;
      pq.push({0, s});
    }
    std::vector<bool> source(g_.qubit_count(), false);
    for (int s : sources) source[s] = true;
    while (!pq.empty()) {
      auto [d, q] = pq.top();
      pq.pop();
      if (d > dist[q]) continue;
      for (int r : g_.neighbours(q)) {
        if (source[r]) continue;
        double w = weight(r);
        if (w >= kInf) continue;
        if (d + w < dist[r]) {
          dist[r] = d + w;
          pred[r] = q;
          pq.push({dist[r], r});
        }
      }
    }
  }

  const HardwareGraph& g_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> chains_;
  std::vector<int> usage_;
  std::vector<bool> fixed_;
  std::vector<bool> hinted_;
  std::mt19937_64& rng_;
  double base_ = 2;
};

std::vector<int> expansion_order(const IsingModel& m, const std::vector<bool>& skip, std::mt19937_64& rng) {
  auto adj = logical_adjacency(m);
  for (auto& a : adj) std::shuffle(a.begin(), a.end(), rng);
  std::vector<int> verts(m.n);
  std::iota(verts.begin(), verts.end(), 0);
  std::shuffle(verts.begin(), verts.end(), rng);
  std::stable_sort(verts.begin(), verts.end(), [&](int a, int b) { return adj[a].size() > adj[b].size(); });
  std::vector<int> order;
  std::vector<bool> seen(m.n, false);
  for (int start : verts) {
    if (seen[start]) continue;
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      if (!skip[v]) order.push_back(v);
      for (int u : adj[v])
        if (!seen[u]) {
          seen[u] = true;
          q.push(u);
        }
    }
  }
  return order;
}

}  // namespace

Embedding embed(const IsingModel& m, const HardwareGraph& g, const EmbedOptions& options) {
  if (m.n < 1) throw Error(ErrorKind::validation, "nothing to embed");
  for (const auto& [v, chain] : options.hint) {
    if (v < 0 || v >= m.n) throw Error(ErrorKind::validation, "hint names unknown variable " + std::to_string(v));
    for (int q : chain)
      if (!g.usable(q)) throw Error(ErrorKind::validation, "hint uses unusable qubit " + std::to_string(q));
  }

  std::vector<int> best_conflicts;
  for (int attempt = 0; attempt < std::max(1, options.attempts); ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    Placer placer(m, g, options.hint, rng);
    std::vector<bool> skip(m.n, false);
    for (int v = 0; v < m.n; ++v) skip[v] = placer.hinted(v);
    auto order = expansion_order(m, skip, rng);

    for (int v : order) placer.place(v);
    auto conflicts = placer.conflicts();
    for (int round = 0; round < options.rounds && !conflicts.empty(); ++round) {
      for (int v : order) {
        placer.remove(v);
        placer.place(v);
      }
      conflicts = placer.conflicts();
    }
    if (conflicts.empty()) {
      placer.prune();
      Embedding e;
      for (int v = 0; v < m.n; ++v) e.chains[v] = placer.chain(v);
      if (structural_violations(m, e, g).empty()) return e;
      conflicts = {};
      for (int v = 0; v < m.n; ++v) conflicts.push_back(v);
    }
    if (best_conflicts.empty() || conflicts.size() < best_conflicts.size()) best_conflicts = conflicts;
  }
  std::ostringstream os;
  os << "no embedding found after " << options.attempts << " attempts; unplaced variables:";
  for (int v : best_conflicts) os << ' ' << v;
  throw Error(ErrorKind::embedding, os.str());
}

}  // namespace qafold::embedding
