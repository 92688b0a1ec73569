#include "skewlap/map.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace skewlap {

namespace {

bool admissible(const ModelSpec& model, const Vector& theta) {
    return !model.in_domain || model.in_domain(theta);
}

double kernel_at(const ModelSpec& model, const Vector& theta, const DataSet& data) {
    return model.loglik(theta, data) + model.logprior(theta);
}

}  // namespace

MapResult find_map(const ModelSpec& model, const DataSet& data, const MapOptions& opts) {
    model.validate(data);
    if (!(opts.tol > 0.0)) throw DomainError("find_map requires tol > 0");

    Vector theta = opts.init ? *opts.init
                             : (model.default_init ? model.default_init(data)
                                                   : Vector(Vector::Zero(model.dim)));
    model.require_admissible(theta);

    const int d = model.dim;
    constexpr double armijo = 1e-4;
    constexpr int max_halvings = 50;

    MapResult res;
    res.n = data.n();

    double kernel = kernel_at(model, theta, data);
    res.kernel_trace.push_back(kernel);

    int iter = 0;
    bool converged = false;
    Vector grad;
    Matrix hess;

    while (true) {
        DerivativeBundle db = derivatives(model, theta, data, 2, /*include_prior=*/true);
        grad = db.grad;
        hess = db.hessian;

        const double gnorm = grad.lpNorm<Eigen::Infinity>();
        if (gnorm <= opts.tol * std::max(1.0, std::abs(kernel))) {
            converged = true;
            break;
        }
        if (iter >= opts.max_iter) break;

        // Newton direction on the maximization problem: solve J step = grad
        // with J = -hess; Levenberg damping until the direction ascends.
        Matrix J = -hess;
        Vector step;
        double lambda = 0.0;
        while (true) {
            Eigen::LLT<Matrix> llt(J + lambda * Matrix::Identity(d, d));
            if (llt.info() == Eigen::Success) {
                step = llt.solve(grad);
                if (grad.dot(step) > 0.0) break;
            }
            lambda = lambda == 0.0 ? 1e-6 : 2.0 * lambda;
            if (!std::isfinite(lambda) || lambda > 1e30)
                throw IndefiniteHessian("could not form an ascent direction");
        }

        // Backtracking: halve on Armijo failure or on leaving the domain.
        const double slope = grad.dot(step);
        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h < max_halvings; ++h) {
            Vector cand = theta + alpha * step;
            if (admissible(model, cand)) {
                const double cand_kernel = kernel_at(model, cand, data);
                if (std::isfinite(cand_kernel) && cand_kernel >= kernel + armijo * alpha * slope) {
                    theta = std::move(cand);
                    kernel = cand_kernel;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        ++iter;
        if (!accepted) break;  // line search exhausted; report best point
        res.kernel_trace.push_back(kernel);
    }

    // Curvature certificate at the final point.
    DerivativeBundle db = derivatives(model, theta, data, 2, /*include_prior=*/true);
    res.theta_hat = theta;
    res.grad_norm = db.grad.lpNorm<Eigen::Infinity>();
    res.observed_info = -db.hessian;
    res.observed_info = 0.5 * (res.observed_info + res.observed_info.transpose().eval());
    res.iterations = iter;
    res.converged = converged;
    res.kernel_value = kernel;

    Eigen::LLT<Matrix> llt(Matrix(res.observed_info / res.n));
    if (llt.info() != Eigen::Success)
        throw IndefiniteHessian("observed information at the MAP is not positive definite");
    res.chol_lower = llt.matrixL();
    return res;
}

}  // namespace skewlap
