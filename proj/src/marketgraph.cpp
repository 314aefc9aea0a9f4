#include "sbpairs/marketgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "sbpairs/csv.hpp"
#include "sbpairs/error.hpp"

namespace sbpairs {

double dtw_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::empty_sequence, "dtw needs non-empty sequences");
  // Two rolling rows of the (|a|+1) x (|b|+1) table.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(b.size() + 1, kInf);
  std::vector<double> cur(b.size() + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double cost = std::abs(a[i - 1] - b[j - 1]);
      cur[j] = cost + std::min({prev[j - 1], prev[j], cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

SimilarityMatrix::SimilarityMatrix(int n_stocks, double fill)
    : n_(n_stocks), s_(static_cast<std::size_t>(n_stocks + 1) * static_cast<std::size_t>(n_stocks + 1), fill) {}

void SimilarityMatrix::set(int i, int j, double value) {
  s_[idx(i, j)] = value;
  s_[idx(j, i)] = value;
}

SimilarityMatrix SimilarityMatrix::parse(std::istream& in, const Universe& universe) {
  SimilarityMatrix sim(universe.size(), std::numeric_limits<double>::quiet_NaN());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto f = csv::split(trimmed);
    if (f.size() != 3) throw Error(Errc::malformed_record, "similarity line " + std::to_string(line_no));
    const auto s = csv::to_double(f[2]);
    if (!s) {
      if (line_no == 1) continue;  // header
      throw Error(Errc::malformed_record, "similarity line " + std::to_string(line_no));
    }
    if (*s < 0.0 || *s > 1.0)
      throw Error(Errc::malformed_record, "similarity out of [0,1] at line " + std::to_string(line_no));
    const int i = universe.index_of(f[0]);
    const int j = universe.index_of(f[1]);
    if (i == j) continue;
    sim.set(i, j, *s);
  }
  for (int i = 1; i <= sim.n_; ++i) {
    sim.s_[sim.idx(i, i)] = 0.0;
    for (int j = 1; j <= sim.n_; ++j)
      if (i != j && std::isnan(sim(i, j)))
        throw Error(Errc::missing_history,
                    "similarity missing for " + universe.at(i).code + "," + universe.at(j).code);
  }
  return sim;
}

SimilarityMatrix SimilarityMatrix::load(const std::string& path, const Universe& universe) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open similarity file " + path);
  return parse(in, universe);
}

void SimilarityMatrix::write(std::ostream& out, const Universe& universe) const {
  out << "code_i,code_j,s\n";
  for (int i = 1; i <= n_; ++i)
    for (int j = i + 1; j <= n_; ++j)
      out << universe.at(i).code << ',' << universe.at(j).code << ',' << csv::format_double((*this)(i, j)) << '\n';
}

SimilarityMatrix build_similarity(const std::vector<DailySequences>& histories) {
  const int n = static_cast<int>(histories.size());
  if (n == 0) throw Error(Errc::missing_history, "no stocks");
  const std::size_t days = histories.front().size();
  for (int k = 0; k < n; ++k) {
    const auto& h = histories[static_cast<std::size_t>(k)];
    if (h.empty() || h.size() != days)
      throw Error(Errc::missing_history, "stock " + std::to_string(k + 1) + " has " + std::to_string(h.size()) +
                                             " days, expected " + std::to_string(days));
    for (const auto& seq : h)
      if (seq.empty()) throw Error(Errc::missing_history, "empty daily sequence for stock " + std::to_string(k + 1));
  }

  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  std::vector<double> mean(pairs.size(), 0.0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& a = histories[static_cast<std::size_t>(pairs[p].first - 1)];
    const auto& b = histories[static_cast<std::size_t>(pairs[p].second - 1)];
    double sum = 0.0;
    for (std::size_t d = 0; d < days; ++d) sum += dtw_distance(a[d], b[d]);
    mean[p] = sum / static_cast<double>(days);
  }

  const double max_d = mean.empty() ? 0.0 : *std::max_element(mean.begin(), mean.end());
  SimilarityMatrix sim(n, 0.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double s = max_d > 0.0 ? 1.0 - mean[p] / max_d : 1.0;
    sim.set(pairs[p].first, pairs[p].second, std::clamp(s, 0.0, 1.0));
  }
  return sim;
}

MarketGraph::MarketGraph(int n_stocks)
    : n_(n_stocks), w_(static_cast<std::size_t>(n_stocks + 1) * static_cast<std::size_t>(n_stocks + 1), 0.0) {}

void MarketGraph::set(int i, int j, double w) {
  w_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(j)] = w;
}

MarketGraph build_graph(const PriceBook& book, const SimilarityMatrix& sim) {
  MarketGraph g(book.size());
  build_graph_into(book, sim, g);
  return g;
}

void build_graph_into(const PriceBook& book, const SimilarityMatrix& sim, MarketGraph& out) {
  const int n = book.size();
  if (sim.n_stocks() != n) throw Error(Errc::dimension_mismatch, "similarity size differs from book");
  if (!book.complete()) throw Error(Errc::incomplete_book, "some stock has never been quoted");
  if (out.n_stocks() != n) out = MarketGraph(n);
  for (int i = 1; i <= n; ++i) {
    const double bid_i = book.quote(i).norm_bid;
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      out.set(i, j, sim(i, j) * (book.quote(j).norm_ask - bid_i));
    }
  }
}

}  // namespace sbpairs
