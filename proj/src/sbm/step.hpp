#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sbpairs/error.hpp"
#include "sbpairs/sbm.hpp"

namespace sbpairs::detail {

inline void prepare_state(SbState& state, int n_vars, const SbParams& params) {
  if (params.n_steps < 1 || !(params.dt > 0.0f) || !(params.a0 > 0.0f))
    throw Error(Errc::invalid_config, "SB needs n_steps >= 1, dt > 0, a0 > 0");
  if (params.machine_size < n_vars)
    throw Error(Errc::invalid_config, "machine_size " + std::to_string(params.machine_size) + " < " +
                                          std::to_string(n_vars) + " variables");
  const auto machine = static_cast<std::size_t>(params.machine_size);
  if (state.x.size() > machine || state.y.size() != state.x.size())
    throw Error(Errc::dimension_mismatch, "initial state does not fit the machine");
  // Padding spins start at rest and carry no couplings.
  state.x.resize(machine, 0.0f);
  state.y.resize(machine, 0.0f);
  state.step = 0;
}

// One symplectic-Euler step of ballistic SB: momentum from the current
// positions, then positions from the new momentum, then inelastic walls.
inline void symplectic_step(SbState& state, std::span<const float> field, const SbParams& params, float c0,
                            int k) {
  const float a0 = params.a0;
  const float dt = params.dt;
  const float pump = a0 * static_cast<float>(k) / static_cast<float>(params.n_steps);
  const float detune = a0 - pump;
  float* x = state.x.data();
  float* y = state.y.data();
  const float* f = field.data();
  const std::size_t m = state.x.size();
#pragma omp simd
  for (std::size_t v = 0; v < m; ++v) {
    y[v] += (-detune * x[v] + c0 * f[v]) * dt;
    x[v] += a0 * y[v] * dt;
    if (x[v] > 1.0f) {
      x[v] = 1.0f;
      y[v] = 0.0f;
    } else if (x[v] < -1.0f) {
      x[v] = -1.0f;
      y[v] = 0.0f;
    }
  }
  state.step = k + 1;
}

inline std::vector<std::uint8_t> decode_signs(const SbState& state, int n_vars) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_vars));
  for (std::size_t v = 0; v < bits.size(); ++v) bits[v] = state.x[v] >= 0.0f ? 1 : 0;
  return bits;
}

}  // namespace sbpairs::detail
