#include "skewlap/sampler.hpp"

#include <cmath>

namespace skewlap {

void Rng::normal_pair(double& a, double& b) {
    const double u1 = 1.0 - uniform();  // (0,1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    a = r * std::cos(phi);
    b = r * std::sin(phi);
}

std::uint64_t split_seed(std::uint64_t base_seed, std::uint64_t index) {
    std::uint64_t z = index + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return base_seed ^ z;
}

namespace {

// Common sign-flip loop over any (location, chol, odd polynomial, F) tuple.
template <typename AlphaFn, typename CdfFn>
Matrix sign_flip_sample(const Vector& location, const Matrix& chol_lower, AlphaFn&& alpha,
                        CdfFn&& cdf, int m, std::uint64_t seed) {
    if (m < 1) throw DomainError("sample count must be at least 1");
    const int k = static_cast<int>(location.size());
    Rng rng(seed);
    Matrix out(m, k);
    Vector eps(k), z0(k);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j + 1 < k; j += 2) rng.normal_pair(eps[j], eps[j + 1]);
        if (k % 2 == 1) {
            double spare;
            rng.normal_pair(eps[k - 1], spare);
        }
        z0.noalias() = chol_lower * eps;
        const double z1 = rng.uniform();
        const double sign = cdf(alpha(z0)) - z1 >= 0.0 ? 1.0 : -1.0;  // sgn(0) = +1
        out.row(i) = (location + sign * z0).transpose();
    }
    return out;
}

}  // namespace

SampleBatch sample(const SkewSymmetricApprox& approx, int m, std::uint64_t seed) {
    SampleBatch batch;
    batch.seed = seed;
    batch.approx_id = to_string(approx.provenance);
    batch.points = sign_flip_sample(
        approx.center, approx.chol_lower(), [&](const Vector& u) { return approx.alpha(u); },
        [&](double x) { return approx.skewing.cdf(x); }, m, seed);
    return batch;
}

SampleBatch sample(const MarginalApprox& approx, int m, std::uint64_t seed) {
    SampleBatch batch;
    batch.seed = seed;
    batch.approx_id = "marginal_skew_modal";
    batch.points = sign_flip_sample(
        approx.center, approx.chol_lower(), [&](const Vector& u) { return approx.alpha(u); },
        [&](double x) { return approx.skewing.cdf(x); }, m, seed);
    return batch;
}

}  // namespace skewlap
