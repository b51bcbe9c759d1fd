#pragma once

#include <set>
#include <utility>
#include <vector>

namespace qafold::hardware {

/// Chimera graph of M x N unit cells, each a K_{K,K}. Qubit ids are
/// ((row * N + col) * 2 + side) * K + k. Side 0 qubits couple to the cell
/// above and below, side 1 qubits to the cells left and right.
class HardwareGraph {
 public:
  int rows() const { return M_; }
  int cols() const { return N_; }
  int half_cell() const { return K_; }
  int qubit_count() const { return M_ * N_ * 2 * K_; }

  bool usable(int q) const { return q >= 0 && q < qubit_count() && usable_[q]; }
  int usable_count() const;
  const std::vector<int>& neighbours(int q) const { return adj_.at(q); }
  bool has_edge(int a, int b) const;
  const std::set<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& masked() const { return masked_; }

  int id(int row, int col, int side, int k) const { return ((row * N_ + col) * 2 + side) * K_ + k; }

  friend HardwareGraph build_chimera(int M, int N, int K, const std::vector<int>& mask);

 private:
  int M_ = 0, N_ = 0, K_ = 0;
  std::vector<bool> usable_;
  std::vector<int> masked_;
  std::vector<std::vector<int>> adj_;
  std::set<std::pair<int, int>> edges_;
};

HardwareGraph build_chimera(int M, int N, int K = 4, const std::vector<int>& mask = {});

}  // namespace qafold::hardware
