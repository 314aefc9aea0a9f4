#include <cmath>

#include "sbm/step.hpp"
#include "sbpairs/error.hpp"
#include "sbpairs/sbm.hpp"

namespace sbpairs {

float auto_c0(const IsingModel& model, float a0) {
  const int n = model.n;
  double sum_j2 = 0.0;
  for (double j : model.J) sum_j2 += j * j;
  if (n > 1 && sum_j2 > 0.0) {
    const double mean = sum_j2 / (static_cast<double>(n) * static_cast<double>(n - 1));
    return static_cast<float>(a0 / (2.0 * std::sqrt(mean * n)));
  }
  double sum_h2 = 0.0;
  for (double h : model.h) sum_h2 += h * h;
  if (n > 0 && sum_h2 > 0.0) return static_cast<float>(a0 / (2.0 * std::sqrt(sum_h2)));
  return a0;
}

namespace reference {

std::vector<std::uint8_t> sb_run(const IsingModel& model, const SbParams& params, SbState state,
                                 const StepObserver& observer) {
  const int n = model.n;
  detail::prepare_state(state, n, params);
  const float c0 = params.c0 ? *params.c0 : params.c0_gain * auto_c0(model, params.a0);
  const auto machine = static_cast<std::size_t>(params.machine_size);
  std::vector<float> field(machine, 0.0f);
  constexpr double kAncilla = 1.0;  // clamped oscillator carrying the h terms

  for (int k = 0; k < params.n_steps; ++k) {
    for (int v = 0; v < n; ++v) {
      double acc = model.h[static_cast<std::size_t>(v)] * kAncilla;
      const double* row = &model.J[static_cast<std::size_t>(v) * static_cast<std::size_t>(n)];
      for (int u = 0; u < n; ++u) acc += row[u] * static_cast<double>(state.x[static_cast<std::size_t>(u)]);
      field[static_cast<std::size_t>(v)] = static_cast<float>(-acc);
    }
    detail::symplectic_step(state, field, params, c0, k);
    if (observer) observer(state);
  }
  return detail::decode_signs(state, n);
}

}  // namespace reference
}  // namespace sbpairs
