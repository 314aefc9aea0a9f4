#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sbpairs/marketgraph.hpp"

namespace sbpairs {

// Flat numbering of the N(N+1) edge variables b[i][j], i != j, i,j in 0..N.
struct EdgeIndex {
  static int n_vars(int n_stocks) { return n_stocks * (n_stocks + 1); }
  static int var(int n_stocks, int i, int j) { return i * n_stocks + (j < i ? j : j - 1); }
  static std::pair<int, int> edge(int n_stocks, int v) {
    const int i = v / n_stocks;
    const int r = v % n_stocks;
    return {i, r < i ? r : r + 1};
  }
};

// Binary edge assignment over the (N+1)-node graph; the diagonal is unused.
class EdgeVars {
 public:
  EdgeVars() = default;
  explicit EdgeVars(int n_stocks);

  // Bit v of `mask` is edge variable v in EdgeIndex order (n_vars <= 64).
  static EdgeVars from_mask(int n_stocks, std::uint64_t mask);

  int n_stocks() const { return n_; }
  bool operator()(int i, int j) const { return b_[slot(i, j)] != 0; }
  void set(int i, int j, bool value = true) { b_[slot(i, j)] = value ? 1 : 0; }
  void clear();
  bool empty() const;
  std::vector<std::pair<int, int>> edges() const;

  bool operator==(const EdgeVars&) const = default;

 private:
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<std::uint8_t> b_;
};

// Pair identity used throughout: short leg first, long leg second.
struct Pair {
  int short_leg = 0;
  int long_leg = 0;
  auto operator<=>(const Pair&) const = default;
};

// Forbidden (short, long) pairs. Registering (s, l) sets t[l][s], so the
// penalty t[i][j] * b[0][j] * b[i][0] fires for cycles 0 -> s ... l -> 0.
class TabuList {
 public:
  TabuList() = default;
  explicit TabuList(int n_stocks);

  int n_stocks() const { return n_; }
  bool operator()(int i, int j) const { return t_[slot(i, j)] != 0; }
  void set(int i, int j, bool value = true) { t_[slot(i, j)] = value ? 1 : 0; }

  void add(Pair p) { set(p.long_leg, p.short_leg); }
  bool contains(Pair p) const { return (*this)(p.long_leg, p.short_leg); }
  std::vector<Pair> pairs() const;
  void clear();
  std::size_t count() const;

  bool operator==(const TabuList&) const = default;

 private:
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<std::uint8_t> t_;
};

struct QuboProblem {
  MarketGraph graph;
  TabuList tabu;
  double m_c = 1.0;
  double m_p = 1.0;

  int n_stocks() const { return graph.n_stocks(); }
  int n_vars() const { return EdgeIndex::n_vars(graph.n_stocks()); }
};

// m_c = 1, m_p = 1 + sum |w|. Any single violation then outweighs the best
// achievable cost improvement.
double default_penalty_weight(const MarketGraph& graph);
QuboProblem make_problem(MarketGraph graph, TabuList tabu);

// Cost sum w[i][j] b[i][j].
double eval_cost(const QuboProblem& q, const EdgeVars& x);
// Five-term constraint penalty with ordered-pair sums (non-negative integer).
double eval_penalty(const QuboProblem& q, const EdgeVars& x);
// m_c * cost + m_p * penalty.
double eval_total(const QuboProblem& q, const EdgeVars& x);

// H(b) = offset + sum_v linear[v] b_v + sum_{u<v} pair(u,v) b_u b_v, with
// b^2 folded into the linear part. Expanded term by term from the penalty
// definition; used by the Ising reference path, never by the fast solver.
struct QuboCoefficients {
  int n_vars = 0;
  double offset = 0.0;
  std::vector<double> linear;
  std::vector<double> pair;  // dense n_vars x n_vars, only u < v populated

  double& at(int u, int v) {
    if (u > v) std::swap(u, v);
    return pair[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_vars) + static_cast<std::size_t>(v)];
  }
  double at(int u, int v) const {
    if (u > v) std::swap(u, v);
    return pair[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_vars) + static_cast<std::size_t>(v)];
  }
  double evaluate(std::span<const std::uint8_t> bits) const;
};
QuboCoefficients expand_coefficients(const QuboProblem& q);

// E(s) = offset + sum_v h_v s_v + sum_{u<v} J_uv s_u s_v over spins s in {-1,+1},
// obtained from b = (1 + s) / 2. J is stored symmetric with a zero diagonal.
struct IsingModel {
  int n = 0;
  std::vector<double> J;
  std::vector<double> h;
  double offset = 0.0;

  double coupling(int u, int v) const {
    return J[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)];
  }
  double energy(std::span<const std::int8_t> spins) const;
};
IsingModel to_ising(const QuboCoefficients& c);
IsingModel to_ising(const QuboProblem& q);

std::vector<std::uint8_t> to_bits(const EdgeVars& x);
EdgeVars from_bits(int n_stocks, std::span<const std::uint8_t> bits);

// Graph dump: line `N,m_c,m_p` + values, line `i,j,w` + one row per edge.
void write_problem(std::ostream& out, const QuboProblem& q);
QuboProblem read_problem(std::istream& in);
QuboProblem load_problem(const std::string& path);
// Tabu file: header `i,j,t`, rows `i,j,1`.
void write_tabu(std::ostream& out, const TabuList& t);
TabuList read_tabu(std::istream& in, int n_stocks);

}  // namespace sbpairs
