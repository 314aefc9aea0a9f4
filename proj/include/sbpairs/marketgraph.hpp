#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sbpairs/feed.hpp"

namespace sbpairs {

// Dynamic time warping distance with |a_t - b_u| local cost, unbanded,
// steps {match, insert, delete}. Throws EmptySequence.
double dtw_distance(std::span<const double> a, std::span<const double> b);

// Pairwise similarity in [0,1] over stocks 1..N, symmetric.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(int n_stocks, double fill = 0.0);

  int n_stocks() const { return n_; }
  double operator()(int i, int j) const { return s_[idx(i, j)]; }
  void set(int i, int j, double value);  // sets both (i,j) and (j,i)

  // CSV `code_i,code_j,s`, one row per unordered pair.
  static SimilarityMatrix parse(std::istream& in, const Universe& universe);
  static SimilarityMatrix load(const std::string& path, const Universe& universe);
  void write(std::ostream& out, const Universe& universe) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<double> s_;
};

// histories[stock-1][day] is that stock's normalized price sequence on the
// day. Days are aligned by position and every stock must have the same
// number of days. s = 1 - mean_dtw / max(mean_dtw); all ones when every
// distance is zero.
using DailySequences = std::vector<std::vector<double>>;
SimilarityMatrix build_similarity(const std::vector<DailySequences>& histories);

// (N+1)-node directed graph, node 0 is the dummy with zero edges.
class MarketGraph {
 public:
  MarketGraph() = default;
  explicit MarketGraph(int n_stocks);

  int n_stocks() const { return n_; }
  int n_nodes() const { return n_ + 1; }
  double operator()(int i, int j) const {
    return w_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(j)];
  }
  void set(int i, int j, double w);
  std::span<const double> data() const { return w_; }

 private:
  int n_ = 0;
  std::vector<double> w_;
};

// w[i][j] = s[i][j] * (norm_ask[j] - norm_bid[i]). Throws IncompleteBook.
MarketGraph build_graph(const PriceBook& book, const SimilarityMatrix& sim);
// Same as above, overwriting `out` in place (no allocation once sized).
void build_graph_into(const PriceBook& book, const SimilarityMatrix& sim, MarketGraph& out);

}  // namespace sbpairs
