#include "sbpairs/error.hpp"
#include "sbpairs/sbm.hpp"

namespace sbpairs {

std::uint32_t xorshift_next(std::uint32_t s) {
  if (s == 0) throw Error(Errc::zero_state, "xorshift state must be nonzero");
  s ^= s << 13;
  s ^= s >> 17;
  s ^= s << 5;
  return s;
}

XorshiftRng::XorshiftRng(std::uint32_t seed) : state_(seed) {
  if (seed == 0) throw Error(Errc::zero_state, "xorshift seed must be nonzero");
}

float XorshiftRng::uniform(float lo, float hi) {
  const float unit = static_cast<float>(next() >> 8) * (1.0f / 16777215.0f);
  return lo + (hi - lo) * unit;
}

SbState init_state(XorshiftRng& rng, int n_vars) {
  SbState s;
  s.x.resize(static_cast<std::size_t>(n_vars));
  s.y.assign(static_cast<std::size_t>(n_vars), 0.0f);
  for (auto& xi : s.x) xi = rng.uniform(-kInitAmplitude, kInitAmplitude);
  return s;
}

}  // namespace sbpairs
