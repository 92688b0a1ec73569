#include "skewlap/model.hpp"

#include <cmath>
#include <limits>

namespace skewlap {

void ModelSpec::require_admissible(const Vector& theta) const {
    if (theta.size() != dim)
        throw DomainError("theta has dimension " + std::to_string(theta.size()) +
                          ", model expects " + std::to_string(dim));
    if (in_domain && !in_domain(theta)) throw DomainError("theta outside the model domain");
}

void ModelSpec::validate(const DataSet& data) const {
    if (check_data) check_data(data);
}

double log_posterior_kernel(const ModelSpec& model, const Vector& theta, const DataSet& data) {
    model.require_admissible(theta);
    model.validate(data);
    return model.loglik(theta, data) + model.logprior(theta);
}

namespace {

// Truncation/rounding balance: the rounding side scales with the evaluation
// noise floor eps * max(1, |f|), not bare machine epsilon.
double fd_step(int order, double coord, double f_scale) {
    static const double eps = std::numeric_limits<double>::epsilon();
    return std::pow(eps * f_scale, 1.0 / (order + 2)) * std::max(1.0, std::abs(coord));
}

double checked_eval(const std::function<double(const Vector&)>& f, const Vector& x) {
    const double v = f(x);
    if (!std::isfinite(v))
        throw NonFiniteEvaluation("finite-difference stencil point gave a non-finite value");
    return v;
}

// Composition of central first-difference operators, one per requested
// coordinate; repeated coordinates compose naturally.
double stencil(const std::function<double(const Vector&)>& f, Vector x,
               const std::vector<int>& coords, const std::vector<double>& steps, std::size_t k) {
    if (k == coords.size()) return checked_eval(f, x);
    const int c = coords[k];
    const double h = steps[k];
    x[c] += h;
    const double up = stencil(f, x, coords, steps, k + 1);
    x[c] -= 2.0 * h;
    const double dn = stencil(f, x, coords, steps, k + 1);
    return up - dn;
}

double central_diff_plain(const std::function<double(const Vector&)>& f, const Vector& x,
                          const std::vector<int>& coords, const std::vector<double>& steps) {
    double denom = 1.0;
    for (double h : steps) denom *= 2.0 * h;
    return stencil(f, x, coords, steps, 0) / denom;
}

// One Richardson level over the composed central stencil removes the h^2
// truncation term; link functions with fast-growing higher derivatives need
// it to stay inside the 1e-5 verification tolerance.
double central_diff(const std::function<double(const Vector&)>& f, const Vector& x,
                    const std::vector<int>& coords, const std::vector<double>& steps) {
    std::vector<double> doubled(steps);
    for (double& h : doubled) h *= 2.0;
    const double fine = central_diff_plain(f, x, coords, steps);
    const double coarse = central_diff_plain(f, x, coords, doubled);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

DerivativeBundle finite_diff_derivatives(const std::function<double(const Vector&)>& f_raw,
                                         const Vector& theta, int order, double step) {
    if (order < 1 || order > 4) throw UnsupportedOrder("finite differences support orders 1..4");
    const int d = static_cast<int>(theta.size());

    // Central stencils annihilate constants, so differencing against the
    // center value is exact; the center value also sets the noise floor for
    // the step choice.
    const double f0 = checked_eval(f_raw, theta);
    const std::function<double(const Vector&)> f = [&f_raw, f0](const Vector& x) {
        return f_raw(x) - f0;
    };
    const double f_scale = std::max(1.0, std::abs(f0));

    auto step_for = [&](int s) { return step > 0.0 ? step : fd_step(order, theta[s], f_scale); };

    DerivativeBundle b;
    b.point = theta;
    b.grad = Vector::Zero(d);
    b.hessian = Matrix::Zero(d, d);
    b.third = SymTensor3(d);

    for (int s = 0; s < d; ++s) b.grad[s] = central_diff(f, theta, {s}, {step_for(s)});

    if (order >= 2) {
        for (int s = 0; s < d; ++s) {
            for (int t = s; t < d; ++t) {
                const double v = central_diff(f, theta, {s, t}, {step_for(s), step_for(t)});
                b.hessian(s, t) = v;
                b.hessian(t, s) = v;
            }
        }
    }
    if (order >= 3) {
        for (int l = 0; l < d; ++l)
            for (int t = 0; t <= l; ++t)
                for (int s = 0; s <= t; ++s)
                    b.third.at(s, t, l) =
                        central_diff(f, theta, {s, t, l}, {step_for(s), step_for(t), step_for(l)});
    }
    if (order >= 4) {
        SymTensor4 fourth(d);
        for (int k = 0; k < d; ++k)
            for (int l = 0; l <= k; ++l)
                for (int t = 0; t <= l; ++t)
                    for (int s = 0; s <= t; ++s)
                        fourth.at(s, t, l, k) = central_diff(
                            f, theta, {s, t, l, k},
                            {step_for(s), step_for(t), step_for(l), step_for(k)});
        b.fourth = std::move(fourth);
    }
    return b;
}

DerivativeBundle derivatives(const ModelSpec& model, const Vector& theta, const DataSet& data,
                             int max_order, bool include_prior, FiniteDiffPolicy fd) {
    if (max_order < 1 || max_order > 4) throw UnsupportedOrder("derivative order must be 1..4");
    model.require_admissible(theta);
    model.validate(data);

    const bool have_analytic =
        model.loglik_grad && model.loglik_hess && (max_order < 3 || model.loglik_third) &&
        (max_order < 4 || model.loglik_fourth);

    DerivativeBundle b;
    if (have_analytic) {
        b.point = theta;
        b.grad = model.loglik_grad(theta, data);
        b.hessian = max_order >= 2 ? model.loglik_hess(theta, data)
                                   : Matrix::Zero(model.dim, model.dim);
        b.third = max_order >= 3 ? model.loglik_third(theta, data) : SymTensor3(model.dim);
        if (max_order >= 4) b.fourth = model.loglik_fourth(theta, data);
    } else {
        if (fd == FiniteDiffPolicy::forbid)
            throw UnsupportedOrder("analytic derivatives of order " + std::to_string(max_order) +
                                   " unavailable and finite differencing disabled");
        auto f = [&](const Vector& x) {
            if (model.in_domain && !model.in_domain(x))
                return -std::numeric_limits<double>::infinity();
            return model.loglik(x, data);
        };
        b = finite_diff_derivatives(f, theta, max_order);
        if (max_order < 2) b.hessian = Matrix::Zero(model.dim, model.dim);
        if (max_order < 3) b.third = SymTensor3(model.dim);
    }

    if (include_prior) {
        if (model.logprior_grad) {
            b.grad += model.logprior_grad(theta);
        } else {
            auto fp = [&](const Vector& x) { return model.logprior(x); };
            b.grad += finite_diff_derivatives(fp, theta, 1).grad;
        }
        if (max_order >= 2) {
            if (model.logprior_hess) {
                b.hessian += model.logprior_hess(theta);
            } else {
                auto fp = [&](const Vector& x) { return model.logprior(x); };
                b.hessian += finite_diff_derivatives(fp, theta, 2).hessian;
            }
        }
        b.includes_prior = true;
    }
    return b;
}

}  // namespace skewlap
