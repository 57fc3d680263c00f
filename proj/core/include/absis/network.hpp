#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace absis {

// Undirected contact graph over N agents. Graphs that are disjoint unions of
// cliques ("block" graphs, including the fully connected one) are stored as
// a partition, which makes infected-neighbor counting O(N) per sweep instead
// of O(edges); everything else uses flat adjacency lists. No self-loops, no
// parallel edges.
class Network {
public:
  static Network fully_connected(int n_agents);

  // One clique per distinct label; labels[i] is agent i's block. Every block
  // must have at least two members so the within-block degree is positive.
  static Network from_blocks(std::span<const int> labels);

  // rows x cols lattice with 8-neighbor (Moore) adjacency; wrap = toroidal.
  // Wrapping needs rows, cols >= 3 so neighbors stay distinct.
  static Network grid8(int rows, int cols, bool wrap);

  // Whitespace-separated pairs "a b", one edge per line; '#' starts a
  // comment. Node count is max index + 1. Duplicate edges collapse.
  static Network from_edge_list(const std::string& path);

  static Network from_edges(int n_agents, std::span<const std::pair<int, int>> edges);

  int size() const { return n_; }
  int degree(int agent) const;
  double inv_degree(int agent) const;  // 0 for isolated agents
  std::vector<int> neighbors(int agent) const;  // sorted

  // out[n] = number of infected neighbors of agent n. states and out must
  // have size N.
  void infected_neighbor_counts(std::span<const std::uint8_t> states,
                                std::span<int> out) const;

  bool block_structured() const { return is_block_; }
  int block_count() const { return static_cast<int>(block_size_.size()); }
  int block_of(int agent) const;  // -1 when not block structured
  std::span<const int> block_sizes() const { return block_size_; }

private:
  Network() = default;
  void finalize_blocks();
  void finalize_adjacency(std::vector<std::pair<int, int>> edges);

  int n_ = 0;
  bool is_block_ = false;

  // block representation
  std::vector<int> block_of_;
  std::vector<int> block_size_;

  // adjacency representation (CSR)
  std::vector<int> adj_;
  std::vector<std::size_t> adj_offset_;

  std::vector<int> degree_;
  std::vector<double> inv_degree_;
};

}  // namespace absis
