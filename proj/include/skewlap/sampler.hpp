// Exact i.i.d. sampling from skew-symmetric approximations via sign
// perturbation of Gaussian draws: with z0 ~ N(0, Omega) and z1 ~ U[0,1],
// location + sgn(F(alpha(z0)) - z1) z0 has the target density.
//
// Reproducibility contract: the generator is std::mt19937_64 seeded directly
// with the 64-bit seed. Uniforms are (x >> 11) * 2^-53 in [0,1). Standard
// normals come from Box-Muller pairs over that stream; each draw consumes
// ceil(k/2) pairs (an odd-dimensional draw discards the spare normal) and
// then one uniform for the sign. This pipeline is fixed so that seeded
// output is identical across platforms.
#pragma once

#include "skewlap/marginal.hpp"
#include "skewlap/skew.hpp"
#include "skewlap/types.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace skewlap {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Box-Muller pair from two uniforms; first uniform shifted into (0,1].
    void normal_pair(double& a, double& b);

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// splitmix64 of the replicate index XORed into the base seed; documented
// stream-splitting for parallel replicates.
std::uint64_t split_seed(std::uint64_t base_seed, std::uint64_t index);

struct SampleBatch {
    Matrix points;          // m x k, one draw per row
    std::uint64_t seed = 0;
    std::string approx_id;  // provenance of the source approximation
};

SampleBatch sample(const SkewSymmetricApprox& approx, int m, std::uint64_t seed);
SampleBatch sample(const MarginalApprox& approx, int m, std::uint64_t seed);

}  // namespace skewlap
