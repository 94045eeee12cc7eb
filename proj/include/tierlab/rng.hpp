#pragma once

#include <cstdint>

namespace tierlab {

// xoshiro256++ with splitmix64 seeding. Spelled out so any implementation in
// any language can reproduce the byte stream from the same 64-bit seed:
//
//   seeding: four splitmix64 outputs from the seed
//     splitmix64: z = (state += 0x9E3779B97F4A7C15);
//                 z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                 z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                 return z ^ (z >> 31);
//   next():  result = rotl(s0 + s3, 23) + s0
//            t = s1 << 17
//            s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t
//            s3 = rotl(s3, 45)
//
//   uniform01(): (next() >> 11) * 2^-53, in [0, 1)
//   gaussian():  Box-Muller on two fresh uniforms, cosine branch only:
//                u1 = ((next() >> 11) + 1) * 2^-53   (in (0, 1])
//                u2 = (next() >> 11) * 2^-53
//                return sqrt(-2 ln u1) * cos(2 pi u2)
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  double uniform01();
  double gaussian();  // mean 0, sd 1; consumes exactly two next() calls

 private:
  std::uint64_t s_[4];
};

}  // namespace tierlab
