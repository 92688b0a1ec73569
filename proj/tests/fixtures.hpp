// Shared fixtures for the approximation-level test suites.
#pragma once

#include "skewlap/map.hpp"
#include "skewlap/model.hpp"

#include <random>

namespace fixtures {

using namespace skewlap;

inline DataSet exp_data() {
    Vector x(4);
    x << 0.5, 0.25, 0.5, 0.75;
    return DataSet::from_responses(x);
}

inline DataSet poisson_data() {
    Vector x(3);
    x << 1, 2, 0;
    return DataSet::from_responses(x);
}

// Synthetic binary-regression rows with an intercept column.
inline DataSet binary_data(int n, int dim, unsigned seed, const Vector& theta_true,
                           bool probit_link = true) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    Matrix z(n, dim);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        z(i, 0) = 1.0;
        for (int j = 1; j < dim; ++j) z(i, j) = normal(gen);
        const double w = z.row(i).dot(theta_true);
        const double p = probit_link ? 0.5 * std::erfc(-w * 0.7071067811865475)
                                     : 1.0 / (1.0 + std::exp(-w));
        y[i] = unif(gen) < p ? 1.0 : 0.0;
    }
    return DataSet::from_regression(y, z);
}

// Gaussian likelihood (unit variance) + Gaussian prior: quadratic kernel,
// identically zero third derivative.
inline ModelSpec gaussian_model(int dim, double tau2) {
    ModelSpec m;
    m.dim = dim;
    m.kind = "gaussian_fixture";
    m.in_domain = [](const Vector&) { return true; };
    m.loglik = [dim](const Vector& th, const DataSet& d) {
        double acc = 0.0;
        for (int i = 0; i < d.n(); ++i) {
            const double r = d.responses[i] - th.sum() / dim;
            acc -= 0.5 * r * r;
        }
        return acc;
    };
    m.logprior = [tau2](const Vector& th) { return -0.5 * th.squaredNorm() / tau2; };
    m.loglik_grad = [dim](const Vector& th, const DataSet& d) {
        const double resid = d.responses.sum() - d.n() * th.sum() / dim;
        return Vector(Vector::Constant(dim, resid / dim));
    };
    m.loglik_hess = [dim](const Vector&, const DataSet& d) {
        return Matrix(-Matrix::Constant(dim, dim, static_cast<double>(d.n()) / (dim * dim)));
    };
    m.loglik_third = [dim](const Vector&, const DataSet&) { return SymTensor3(dim); };
    m.logprior_grad = [tau2](const Vector& th) { return Vector(-th / tau2); };
    m.logprior_hess = [tau2, dim](const Vector&) {
        return Matrix(-Matrix::Identity(dim, dim) / tau2);
    };
    return m;
}

// Tight-tolerance MAP for tests that pin parameter values to 1e-12.
inline MapResult map_of(const ModelSpec& m, const DataSet& d) {
    MapOptions opts;
    opts.tol = 1e-13;
    return find_map(m, d, opts);
}

}  // namespace fixtures
