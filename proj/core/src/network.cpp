#include "absis/network.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace absis {

Network Network::fully_connected(int n_agents) {
  if (n_agents < 2)
    throw std::invalid_argument("Network: fully connected graph needs >= 2 agents");
  std::vector<int> labels(n_agents, 0);
  return from_blocks(labels);
}

Network Network::from_blocks(std::span<const int> labels) {
  if (labels.empty()) throw std::invalid_argument("Network: empty block labels");
  const int n = static_cast<int>(labels.size());
  const int max_label = *std::max_element(labels.begin(), labels.end());
  const int min_label = *std::min_element(labels.begin(), labels.end());
  if (min_label < 0) throw std::invalid_argument("Network: block labels must be >= 0");

  Network net;
  net.n_ = n;
  net.is_block_ = true;
  net.block_of_.assign(labels.begin(), labels.end());
  net.block_size_.assign(static_cast<std::size_t>(max_label) + 1, 0);
  for (const int b : labels) ++net.block_size_[b];
  for (const int s : net.block_size_)
    if (s < 2)
      throw std::invalid_argument(
          "Network: every block needs >= 2 members (labels must also be contiguous)");
  net.finalize_blocks();
  return net;
}

void Network::finalize_blocks() {
  degree_.resize(n_);
  inv_degree_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    degree_[i] = block_size_[block_of_[i]] - 1;
    inv_degree_[i] = 1.0 / degree_[i];
  }
}

Network Network::grid8(int rows, int cols, bool wrap) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("Network: grid needs rows, cols >= 1");
  if (wrap && (rows < 3 || cols < 3))
    throw std::invalid_argument("Network: wrapped grid needs rows, cols >= 3");
  const int n = rows * cols;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * 4);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int a = r * cols + c;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          int rr = r + dr, cc = c + dc;
          if (wrap) {
            rr = (rr + rows) % rows;
            cc = (cc + cols) % cols;
          } else if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) {
            continue;
          }
          const int b = rr * cols + cc;
          if (b > a) edges.emplace_back(a, b);
        }
      }
    }
  }
  Network net;
  net.n_ = n;
  net.finalize_adjacency(std::move(edges));
  return net;
}

Network Network::from_edges(int n_agents, std::span<const std::pair<int, int>> edges) {
  if (n_agents <= 0) throw std::invalid_argument("Network: n_agents must be positive");
  std::vector<std::pair<int, int>> cleaned;
  cleaned.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_agents || b >= n_agents)
      throw std::invalid_argument("Network: edge endpoint out of range");
    if (a == b) throw std::invalid_argument("Network: self-loops are not allowed");
    cleaned.emplace_back(std::min(a, b), std::max(a, b));
  }
  Network net;
  net.n_ = n_agents;
  net.finalize_adjacency(std::move(cleaned));
  return net;
}

Network Network::from_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open edge list");
  std::vector<std::pair<int, int>> edges;
  int max_node = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long a, b;
    if (!(ss >> a)) continue;  // blank line
    if (!(ss >> b)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two node indices");
    }
    std::string extra;
    if (ss >> extra)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": trailing tokens");
    if (a < 0 || b < 0)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": negative node index");
    if (a == b)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": self-loop");
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    max_node = std::max({max_node, static_cast<int>(a), static_cast<int>(b)});
  }
  if (edges.empty()) throw std::runtime_error(path + ": no edges");
  return from_edges(max_node + 1, edges);
}

void Network::finalize_adjacency(std::vector<std::pair<int, int>> edges) {
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  degree_.assign(n_, 0);
  for (const auto& [a, b] : edges) {
    ++degree_[a];
    ++degree_[b];
  }
  adj_offset_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int i = 0; i < n_; ++i) adj_offset_[i + 1] = adj_offset_[i] + degree_[i];
  adj_.resize(adj_offset_[n_]);
  std::vector<std::size_t> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
  for (const auto& [a, b] : edges) {
    adj_[cursor[a]++] = b;
    adj_[cursor[b]++] = a;
  }
  for (int i = 0; i < n_; ++i)
    std::sort(adj_.begin() + adj_offset_[i], adj_.begin() + adj_offset_[i + 1]);
  inv_degree_.resize(n_);
  for (int i = 0; i < n_; ++i)
    inv_degree_[i] = degree_[i] > 0 ? 1.0 / degree_[i] : 0.0;
}

int Network::degree(int agent) const {
  if (agent < 0 || agent >= n_) throw std::out_of_range("Network: agent index");
  return degree_[agent];
}

double Network::inv_degree(int agent) const { return inv_degree_[agent]; }

std::vector<int> Network::neighbors(int agent) const {
  if (agent < 0 || agent >= n_) throw std::out_of_range("Network: agent index");
  if (is_block_) {
    std::vector<int> out;
    out.reserve(degree_[agent]);
    const int b = block_of_[agent];
    for (int j = 0; j < n_; ++j)
      if (j != agent && block_of_[j] == b) out.push_back(j);
    return out;
  }
  return {adj_.begin() + adj_offset_[agent], adj_.begin() + adj_offset_[agent + 1]};
}

void Network::infected_neighbor_counts(std::span<const std::uint8_t> states,
                                       std::span<int> out) const {
  if (static_cast<int>(states.size()) != n_ || static_cast<int>(out.size()) != n_)
    throw std::invalid_argument("Network: state vector size mismatch");
  if (is_block_) {
    // clique: infected in own block, minus self
    int totals_buf[16];
    std::vector<int> totals_vec;
    int* totals = totals_buf;
    const int nb = block_count();
    if (nb > 16) {
      totals_vec.assign(nb, 0);
      totals = totals_vec.data();
    } else {
      std::fill(totals_buf, totals_buf + nb, 0);
    }
    for (int i = 0; i < n_; ++i) totals[block_of_[i]] += states[i];
    for (int i = 0; i < n_; ++i) out[i] = totals[block_of_[i]] - states[i];
    return;
  }
  for (int i = 0; i < n_; ++i) {
    int c = 0;
    for (std::size_t k = adj_offset_[i]; k < adj_offset_[i + 1]; ++k) c += states[adj_[k]];
    out[i] = c;
  }
}

int Network::block_of(int agent) const {
  if (agent < 0 || agent >= n_) throw std::out_of_range("Network: agent index");
  return is_block_ ? block_of_[agent] : -1;
}

}  // namespace absis
