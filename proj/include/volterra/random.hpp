#pragma once

#include <array>
#include <cstdint>

namespace volterra {

// Philox4x32-10 counter-based generator. Draw number `index` of stream
// `stream` under `seed` uses counter (index / 2, stream) and key seed; each
// block yields two 53-bit uniforms.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  // Uniform on the open interval (0, 1).
  double uniform(std::uint64_t index) const;
  // Standard normal by inverse CDF.
  double normal(std::uint64_t index) const;
  // Fills out[k] = normal(first + k), k < count.
  void normals(std::uint64_t first, double* out, std::size_t count) const;

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

double normal_quantile(double u);

}  // namespace volterra
