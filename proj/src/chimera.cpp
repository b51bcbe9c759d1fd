#include "qafold/chimera.hpp"

#include <algorithm>
#include <string>

#include "qafold/errors.hpp"

namespace qafold::hardware {

int HardwareGraph::usable_count() const { return static_cast<int>(std::count(usable_.begin(), usable_.end(), true)); }

bool HardwareGraph::has_edge(int a, int b) const { return edges_.count(a < b ? std::pair{a, b} : std::pair{b, a}) > 0; }

HardwareGraph build_chimera(int M, int N, int K, const std::vector<int>& mask) {
  if (M < 1 || N < 1 || K < 1) throw Error(ErrorKind::validation, "Chimera dimensions must be positive");
  HardwareGraph g;
  g.M_ = M;
  g.N_ = N;
  g.K_ = K;
  const int total = g.qubit_count();
  g.usable_.assign(total, true);
  for (int q : mask) {
    if (q < 0 || q >= total)
      throw Error(ErrorKind::validation, "masked qubit " + std::to_string(q) + " outside 0.." + std::to_string(total - 1));
    g.usable_[q] = false;
  }
  g.masked_ = mask;
  std::sort(g.masked_.begin(), g.masked_.end());
  g.masked_.erase(std::unique(g.masked_.begin(), g.masked_.end()), g.masked_.end());

  g.adj_.assign(total, {});
  auto link = [&](int a, int b) {
    if (!g.usable_[a] || !g.usable_[b]) return;
    g.edges_.insert({std::min(a, b), std::max(a, b)});
    g.adj_[a].push_back(b);
    g.adj_[b].push_back(a);
  };
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < N; ++c)
      for (int k = 0; k < K; ++k) {
        for (int l = 0; l < K; ++l) link(g.id(r, c, 0, k), g.id(r, c, 1, l));
        if (r + 1 < M) link(g.id(r, c, 0, k), g.id(r + 1, c, 0, k));
        if (c + 1 < N) link(g.id(r, c, 1, k), g.id(r, c + 1, 1, k));
      }
  for (auto& a : g.adj_) std::sort(a.begin(), a.end());
  return g;
}

}  // namespace qafold::hardware
