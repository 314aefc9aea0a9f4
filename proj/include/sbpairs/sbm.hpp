#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sbpairs/qubo.hpp"

namespace sbpairs {

// Marsaglia xorshift32, shift triple (13, 17, 5). Throws ZeroState on 0.
std::uint32_t xorshift_next(std::uint32_t state);

class XorshiftRng {
 public:
  explicit XorshiftRng(std::uint32_t seed);

  std::uint32_t next() {
    state_ = xorshift_next(state_);
    return state_;
  }
  std::uint32_t state() const { return state_; }
  // Uniform in [lo, hi] from the top 24 bits of the next draw.
  float uniform(float lo, float hi);

 private:
  std::uint32_t state_;
};

struct SbParams {
  int n_steps = 50;
  float dt = 0.65f;
  float a0 = 1.0f;
  std::optional<float> c0;  // nullopt = auto
  float c0_gain = 1.0f;     // multiplies the auto value only
  int machine_size = 256;
};

struct SbState {
  std::vector<float> x;
  std::vector<float> y;
  int step = 0;
};

inline constexpr float kInitAmplitude = 0.1f;

// x uniform in [-0.1, 0.1] drawn in index order, y = 0.
SbState init_state(XorshiftRng& rng, int n_vars);

using StepObserver = std::function<void(const SbState&)>;

// c0 = a0 / (2 sqrt(mean(J^2) n)), mean over ordered off-diagonal couplings.
// Falls back to the field magnitudes when there are no couplings, and to a0
// when the model is identically zero.
float auto_c0(const IsingModel& model, float a0);
float auto_c0(const QuboProblem& problem, float a0);

// Sum of J_uv^2 over ordered u != v, computed from the problem structure.
double coupling_sum_squares(const QuboProblem& problem);

namespace reference {

// Serial ballistic SB over a dense spin model, kept as the ground truth for
// the structured kernel. Returns b_v = (1 + sign(x_v)) / 2, sign(0) = +1.
std::vector<std::uint8_t> sb_run(const IsingModel& model, const SbParams& params, SbState initial,
                                 const StepObserver& observer = {});

}  // namespace reference

// Ballistic SB on the path-search QUBO using the row/column structure of the
// couplings: O(N^2) work per step instead of O(N^4).
EdgeVars sb_run(const QuboProblem& problem, const SbParams& params, SbState initial,
                const StepObserver& observer = {});

struct SolveResult {
  EdgeVars best;
  double energy = 0.0;
  int best_restart = 0;
};

// Runs `restarts` independent SB trajectories from seeds drawn off `rng` and
// keeps the lowest eval_total (lowest restart index on ties). Restarts run
// in parallel when built with OpenMP; the result does not depend on it.
SolveResult solve_best_of(const QuboProblem& problem, const SbParams& params, XorshiftRng& rng, int restarts);

// Per-restart energies and decoded states, mainly for the benchmark harness.
std::vector<SolveResult> solve_all(const QuboProblem& problem, const SbParams& params, XorshiftRng& rng,
                                   int restarts);

}  // namespace sbpairs
