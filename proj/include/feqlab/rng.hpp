#pragma once

/// @file rng.hpp
/// Counter-based random streams: Philox4x32-10 keyed by the master seed with
/// a (stream, index, step) counter, uniform doubles from the high 53 bits,
/// and standard-normal draws via the inverse normal CDF.  Every draw is a
/// pure function of (seed, stream, index, step), so results are independent
/// of evaluation order.

#include <array>
#include <cstdint>

namespace feqlab::rng {

/// Stream families; keeps W, B, and the scalar xi draws disjoint by construction.
enum class Stream : std::uint32_t { W = 0, B = 1, Xi = 2 };

/// One application of the Philox4x32 10-round bijection.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Uniform double in the open interval (0, 1) from two 32-bit words.
double uniform_open(std::uint32_t hi, std::uint32_t lo);

/// Inverse of the standard normal CDF (Wichura's PPND16 rational
/// approximations; accurate to full double precision for p in (0,1)).
double normal_quantile(double p);

/// Standard normal CDF (via erfc).
double normal_cdf(double x);

/// The (seed, stream, index, step) -> N(0,1) map used for all simulation.
double normal_draw(std::uint64_t seed, Stream stream, std::uint64_t index, std::uint32_t step);

} // namespace feqlab::rng
