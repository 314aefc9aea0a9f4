#include "sbpairs/error.hpp"
#include "sbpairs/sbm.hpp"

namespace sbpairs {

std::vector<SolveResult> solve_all(const QuboProblem& problem, const SbParams& params, XorshiftRng& rng,
                                   int restarts) {
  if (restarts < 1) throw Error(Errc::invalid_config, "restarts must be >= 1");
  // Seeds are split off the caller's stream up front so the outcome is the
  // same for any thread count.
  std::vector<std::uint32_t> seeds(static_cast<std::size_t>(restarts));
  for (auto& s : seeds) s = rng.next();

  std::vector<SolveResult> results(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(static) if (restarts > 1)
  for (int r = 0; r < restarts; ++r) {
    XorshiftRng local(seeds[static_cast<std::size_t>(r)]);
    auto& out = results[static_cast<std::size_t>(r)];
    out.best = sb_run(problem, params, init_state(local, params.machine_size));
    out.energy = eval_total(problem, out.best);
    out.best_restart = r;
  }
  return results;
}

SolveResult solve_best_of(const QuboProblem& problem, const SbParams& params, XorshiftRng& rng, int restarts) {
  auto results = solve_all(problem, params, rng, restarts);
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].energy < results[best].energy) best = r;
  return std::move(results[best]);
}

}  // namespace sbpairs
