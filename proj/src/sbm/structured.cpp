#include <cmath>

#include "sbm/step.hpp"
#include "sbpairs/sbm.hpp"

namespace sbpairs {

double coupling_sum_squares(const QuboProblem& problem) {
  // Pair coefficients q_uv of the expanded QUBO, in units of m_p:
  //   same tail or same head            +4
  //   head of one is tail of the other  -2 (opposite pairs included)
  //   tabu chain b_i0 * b_0j            -2 + T[i][j]
  // and J_uv = q_uv / 4 for both orderings, so sum_{u != v} J^2 = sum_{u<v} q^2 / 8.
  const double n = problem.n_stocks();
  const double nodes = n + 1.0;
  double sum_q2 = 0.0;
  sum_q2 += 2.0 * nodes * (n * (n - 1.0) / 2.0) * 16.0;
  sum_q2 += (nodes * n / 2.0) * 4.0;
  sum_q2 += nodes * n * (n - 1.0) * 4.0;
  const auto tabu = static_cast<double>(problem.tabu.count());
  sum_q2 += tabu * (1.0 - 4.0);
  return problem.m_p * problem.m_p * sum_q2 / 8.0;
}

float auto_c0(const QuboProblem& problem, float a0) {
  const double n = problem.n_vars();
  const double sum = coupling_sum_squares(problem);
  if (n > 1 && sum > 0.0) {
    const double mean = sum / (n * (n - 1.0));
    return static_cast<float>(a0 / (2.0 * std::sqrt(mean * n)));
  }
  return a0;
}

EdgeVars sb_run(const QuboProblem& problem, const SbParams& params, SbState state, const StepObserver& observer) {
  const int n = problem.n_stocks();
  const int nodes = n + 1;
  const int n_vars = problem.n_vars();
  detail::prepare_state(state, n_vars, params);
  const float c0 = params.c0 ? *params.c0 : params.c0_gain * auto_c0(problem, params.a0);

  const auto vars = static_cast<std::size_t>(n_vars);
  std::vector<int> tail(vars), head(vars), opposite(vars);
  std::vector<double> linear(vars);
  for (int v = 0; v < n_vars; ++v) {
    const auto [i, j] = EdgeIndex::edge(n, v);
    tail[static_cast<std::size_t>(v)] = i;
    head[static_cast<std::size_t>(v)] = j;
    opposite[static_cast<std::size_t>(v)] = EdgeIndex::var(n, j, i);
    // Constant part of dH/db: cost plus the +1 per endpoint from the flow square.
    linear[static_cast<std::size_t>(v)] = problem.m_c * problem.graph(i, j) + 2.0 * problem.m_p;
  }
  const bool any_tabu = problem.tabu.count() > 0;

  const double mp = problem.m_p;
  std::vector<double> b(vars), out_sum(static_cast<std::size_t>(nodes)), in_sum(static_cast<std::size_t>(nodes));
  std::vector<double> tabu_term(vars, 0.0);
  std::vector<float> field(static_cast<std::size_t>(params.machine_size), 0.0f);

  for (int k = 0; k < params.n_steps; ++k) {
    std::fill(out_sum.begin(), out_sum.end(), 0.0);
    std::fill(in_sum.begin(), in_sum.end(), 0.0);
    for (std::size_t v = 0; v < vars; ++v) {
      b[v] = 0.5 * (1.0 + static_cast<double>(state.x[v]));
      out_sum[static_cast<std::size_t>(tail[v])] += b[v];
      in_sum[static_cast<std::size_t>(head[v])] += b[v];
    }

    if (any_tabu) {
      // dH/db_0j += m_p sum_i T[i][j] b_i0 ; dH/db_i0 += m_p sum_j T[i][j] b_0j
      std::fill(tabu_term.begin(), tabu_term.end(), 0.0);
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
          if (i == j || !problem.tabu(i, j)) continue;
          const auto v0j = static_cast<std::size_t>(EdgeIndex::var(n, 0, j));
          const auto vi0 = static_cast<std::size_t>(EdgeIndex::var(n, i, 0));
          tabu_term[v0j] += b[vi0];
          tabu_term[vi0] += b[v0j];
        }
      }
    }

#pragma omp simd
    for (std::size_t v = 0; v < vars; ++v) {
      const auto i = static_cast<std::size_t>(tail[v]);
      const auto j = static_cast<std::size_t>(head[v]);
      const double r = out_sum[i] - b[v];  // other out-edges of i
      const double c = in_sum[j] - b[v];   // other in-edges of j
      const double g = linear[v] + mp * (4.0 * r + 4.0 * c - 2.0 * in_sum[i] - 2.0 * out_sum[j] +
                                         2.0 * b[static_cast<std::size_t>(opposite[v])] + tabu_term[v]);
      field[v] = static_cast<float>(-0.5 * g);
    }

    detail::symplectic_step(state, field, params, c0, k);
    if (observer) observer(state);
  }
  const auto bits = detail::decode_signs(state, n_vars);
  return from_bits(n, bits);
}

}  // namespace sbpairs
