#include "sbpairs/qubo.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "sbpairs/csv.hpp"
#include "sbpairs/error.hpp"

namespace sbpairs {

EdgeVars::EdgeVars(int n_stocks)
    : n_(n_stocks), b_(static_cast<std::size_t>(n_stocks + 1) * static_cast<std::size_t>(n_stocks + 1), 0) {}

EdgeVars EdgeVars::from_mask(int n_stocks, std::uint64_t mask) {
  EdgeVars x(n_stocks);
  const int n = EdgeIndex::n_vars(n_stocks);
  for (int v = 0; v < n && v < 64; ++v) {
    if ((mask >> v) & 1u) {
      const auto [i, j] = EdgeIndex::edge(n_stocks, v);
      x.set(i, j);
    }
  }
  return x;
}

void EdgeVars::clear() { std::fill(b_.begin(), b_.end(), 0); }

bool EdgeVars::empty() const {
  for (auto v : b_)
    if (v) return false;
  return true;
}

std::vector<std::pair<int, int>> EdgeVars::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i <= n_; ++i)
    for (int j = 0; j <= n_; ++j)
      if (i != j && (*this)(i, j)) out.emplace_back(i, j);
  return out;
}

TabuList::TabuList(int n_stocks)
    : n_(n_stocks), t_(static_cast<std::size_t>(n_stocks + 1) * static_cast<std::size_t>(n_stocks + 1), 0) {}

std::vector<Pair> TabuList::pairs() const {
  std::vector<Pair> out;
  for (int s = 1; s <= n_; ++s)
    for (int l = 1; l <= n_; ++l)
      if (s != l && contains({s, l})) out.push_back({s, l});
  return out;
}

void TabuList::clear() { std::fill(t_.begin(), t_.end(), 0); }

std::size_t TabuList::count() const {
  std::size_t n = 0;
  for (auto v : t_) n += v;
  return n;
}

double default_penalty_weight(const MarketGraph& graph) {
  double sum = 0.0;
  for (int i = 0; i <= graph.n_stocks(); ++i)
    for (int j = 0; j <= graph.n_stocks(); ++j)
      if (i != j) sum += std::abs(graph(i, j));
  return 1.0 + sum;
}

QuboProblem make_problem(MarketGraph graph, TabuList tabu) {
  QuboProblem q;
  q.m_c = 1.0;
  q.m_p = default_penalty_weight(graph);
  q.graph = std::move(graph);
  q.tabu = std::move(tabu);
  return q;
}

namespace {

void check_dims(const QuboProblem& q, const EdgeVars& x) {
  if (x.n_stocks() != q.graph.n_stocks() || q.tabu.n_stocks() != q.graph.n_stocks())
    throw Error(Errc::dimension_mismatch, "edge variables and problem sizes differ");
}

}  // namespace

double eval_cost(const QuboProblem& q, const EdgeVars& x) {
  check_dims(q, x);
  const int n = q.graph.n_stocks();
  double sum = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j && x(i, j)) sum += q.graph(i, j);
  return sum;
}

double eval_penalty(const QuboProblem& q, const EdgeVars& x) {
  check_dims(q, x);
  const int n = q.graph.n_stocks();
  std::int64_t out_conflicts = 0;
  std::int64_t in_conflicts = 0;
  std::int64_t imbalance = 0;
  std::int64_t opposite = 0;
  std::int64_t tabu = 0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      for (int k = 0; k <= n; ++k) {
        if (k == i || k == j) continue;
        out_conflicts += x(i, j) && x(i, k);
        in_conflicts += x(j, i) && x(k, i);
      }
    }
  }
  for (int i = 0; i <= n; ++i) {
    std::int64_t flow = 0;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      flow += x(i, j);
      flow -= x(j, i);
    }
    imbalance += flow * flow;
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) opposite += x(i, j) && x(j, i);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) tabu += q.tabu(i, j) && x(0, j) && x(i, 0);
  return static_cast<double>(out_conflicts + in_conflicts + imbalance + opposite + tabu);
}

double eval_total(const QuboProblem& q, const EdgeVars& x) {
  return q.m_c * eval_cost(q, x) + q.m_p * eval_penalty(q, x);
}

double QuboCoefficients::evaluate(std::span<const std::uint8_t> bits) const {
  double e = offset;
  for (int u = 0; u < n_vars; ++u) {
    if (!bits[static_cast<std::size_t>(u)]) continue;
    e += linear[static_cast<std::size_t>(u)];
    for (int v = u + 1; v < n_vars; ++v)
      if (bits[static_cast<std::size_t>(v)]) e += at(u, v);
  }
  return e;
}

QuboCoefficients expand_coefficients(const QuboProblem& q) {
  const int n = q.graph.n_stocks();
  QuboCoefficients c;
  c.n_vars = EdgeIndex::n_vars(n);
  c.linear.assign(static_cast<std::size_t>(c.n_vars), 0.0);
  c.pair.assign(static_cast<std::size_t>(c.n_vars) * static_cast<std::size_t>(c.n_vars), 0.0);
  auto var = [n](int i, int j) { return EdgeIndex::var(n, i, j); };
  // Product b_u b_v with coefficient k; b_u^2 = b_u.
  auto product = [&c](int u, int v, double k) {
    if (u == v)
      c.linear[static_cast<std::size_t>(u)] += k;
    else
      c.at(u, v) += k;
  };

  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) c.linear[static_cast<std::size_t>(var(i, j))] += q.m_c * q.graph(i, j);

  const double mp = q.m_p;
  // Out-degree and in-degree conflicts, ordered j != j'.
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        if (j == i || k == i || k == j) continue;
        product(var(i, j), var(i, k), mp);
        product(var(j, i), var(k, i), mp);
      }
  // Flow balance: (sum_out - sum_in)^2 per node.
  for (int i = 0; i <= n; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      terms.emplace_back(var(i, j), 1.0);
      terms.emplace_back(var(j, i), -1.0);
    }
    for (const auto& [u, cu] : terms)
      for (const auto& [v, cv] : terms) product(u, v, mp * cu * cv);
  }
  // Opposite edges, ordered.
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) product(var(i, j), var(j, i), mp);
  // Tabu pairs at the dummy node.
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j && q.tabu(i, j)) product(var(0, j), var(i, 0), mp);
  return c;
}

double IsingModel::energy(std::span<const std::int8_t> spins) const {
  double e = offset;
  for (int u = 0; u < n; ++u) {
    const double su = spins[static_cast<std::size_t>(u)];
    e += h[static_cast<std::size_t>(u)] * su;
    for (int v = u + 1; v < n; ++v) e += coupling(u, v) * su * spins[static_cast<std::size_t>(v)];
  }
  return e;
}

IsingModel to_ising(const QuboCoefficients& c) {
  IsingModel m;
  m.n = c.n_vars;
  m.J.assign(static_cast<std::size_t>(m.n) * static_cast<std::size_t>(m.n), 0.0);
  m.h.assign(static_cast<std::size_t>(m.n), 0.0);
  m.offset = c.offset;
  for (int u = 0; u < m.n; ++u) {
    const double a = c.linear[static_cast<std::size_t>(u)];
    m.h[static_cast<std::size_t>(u)] += a / 2.0;
    m.offset += a / 2.0;
    for (int v = u + 1; v < m.n; ++v) {
      const double k = c.at(u, v);
      if (k == 0.0) continue;
      m.J[static_cast<std::size_t>(u) * static_cast<std::size_t>(m.n) + static_cast<std::size_t>(v)] = k / 4.0;
      m.J[static_cast<std::size_t>(v) * static_cast<std::size_t>(m.n) + static_cast<std::size_t>(u)] = k / 4.0;
      m.h[static_cast<std::size_t>(u)] += k / 4.0;
      m.h[static_cast<std::size_t>(v)] += k / 4.0;
      m.offset += k / 4.0;
    }
  }
  return m;
}

IsingModel to_ising(const QuboProblem& q) { return to_ising(expand_coefficients(q)); }

std::vector<std::uint8_t> to_bits(const EdgeVars& x) {
  const int n = x.n_stocks();
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(EdgeIndex::n_vars(n)), 0);
  for (int v = 0; v < EdgeIndex::n_vars(n); ++v) {
    const auto [i, j] = EdgeIndex::edge(n, v);
    bits[static_cast<std::size_t>(v)] = x(i, j) ? 1 : 0;
  }
  return bits;
}

EdgeVars from_bits(int n_stocks, std::span<const std::uint8_t> bits) {
  EdgeVars x(n_stocks);
  const int n = EdgeIndex::n_vars(n_stocks);
  for (int v = 0; v < n; ++v) {
    if (!bits[static_cast<std::size_t>(v)]) continue;
    const auto [i, j] = EdgeIndex::edge(n_stocks, v);
    x.set(i, j);
  }
  return x;
}

void write_problem(std::ostream& out, const QuboProblem& q) {
  const int n = q.n_stocks();
  out << "N,m_c,m_p\n";
  out << n << ',' << csv::format_double(q.m_c) << ',' << csv::format_double(q.m_p) << '\n';
  out << "i,j,w\n";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) out << i << ',' << j << ',' << csv::format_double(q.graph(i, j)) << '\n';
}

QuboProblem read_problem(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto t = csv::trim(line);
      if (!t.empty() && t.front() != '#') return true;
    }
    return false;
  };
  auto fail = [&](const std::string& why) {
    return Error(Errc::malformed_record, "graph line " + std::to_string(line_no) + ": " + why);
  };

  if (!next_line()) throw fail("empty graph file");
  if (csv::trim(line).starts_with("N")) {
    if (!next_line()) throw fail("missing size row");
  }
  auto head = csv::split(csv::trim(line));
  if (head.size() != 3) throw fail("expected N,m_c,m_p");
  const auto n = csv::to_int<int>(head[0]);
  const auto mc = csv::to_double(head[1]);
  const auto mp = csv::to_double(head[2]);
  if (!n || *n < 1 || !mc || !mp || *mc <= 0.0 || *mp <= 0.0) throw fail("bad N,m_c,m_p values");

  QuboProblem q;
  q.graph = MarketGraph(*n);
  q.tabu = TabuList(*n);
  q.m_c = *mc;
  q.m_p = *mp;
  while (next_line()) {
    const auto f = csv::split(csv::trim(line));
    if (f.size() != 3) throw fail("expected i,j,w");
    const auto i = csv::to_int<int>(f[0]);
    const auto j = csv::to_int<int>(f[1]);
    const auto w = csv::to_double(f[2]);
    if (!i || !j || !w) {
      if (f[0] == "i") continue;
      throw fail("bad edge row");
    }
    if (*i < 0 || *j < 0 || *i > *n || *j > *n || *i == *j) throw fail("edge index out of range");
    if ((*i == 0 || *j == 0) && *w != 0.0) throw fail("dummy edges must be zero");
    q.graph.set(*i, *j, *w);
  }
  return q;
}

QuboProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open graph file " + path);
  return read_problem(in);
}

void write_tabu(std::ostream& out, const TabuList& t) {
  out << "i,j,t\n";
  for (int i = 1; i <= t.n_stocks(); ++i)
    for (int j = 1; j <= t.n_stocks(); ++j)
      if (i != j && t(i, j)) out << i << ',' << j << ",1\n";
}

TabuList read_tabu(std::istream& in, int n_stocks) {
  TabuList t(n_stocks);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto f = csv::split(trimmed);
    if (f.size() != 3) throw Error(Errc::malformed_record, "tabu line " + std::to_string(line_no));
    const auto i = csv::to_int<int>(f[0]);
    const auto j = csv::to_int<int>(f[1]);
    const auto v = csv::to_int<int>(f[2]);
    if (!i || !j || !v) {
      if (line_no == 1) continue;
      throw Error(Errc::malformed_record, "tabu line " + std::to_string(line_no));
    }
    if (*i < 1 || *j < 1 || *i > n_stocks || *j > n_stocks || *i == *j || (*v != 0 && *v != 1))
      throw Error(Errc::malformed_record, "tabu entry out of range at line " + std::to_string(line_no));
    t.set(*i, *j, *v == 1);
  }
  return t;
}

}  // namespace sbpairs
