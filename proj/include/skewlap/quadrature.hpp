// Adaptive Simpson quadrature, one-dimensional and tensor-product nested, plus
// a cumulative-distribution grid used by sampler goodness-of-fit checks.
#pragma once

#include "skewlap/types.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace skewlap {

struct QuadratureOptions {
    double tol = 1e-6;
    int max_depth = 48;   // per-interval bisection cap; throws ResolutionExceeded beyond
    int min_panels = 32;  // initial uniform split; guards against sparse integrands
                          // fooling the first Simpson estimate
};

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts = {});

// Integrates f over a d-dimensional box (d = box.size(), d <= 3) by nesting
// adaptive Simpson passes, innermost coordinate last.
double integrate_box(const std::function<double(const Vector&)>& f,
                     const std::vector<std::pair<double, double>>& box,
                     const QuadratureOptions& opts = {});

// Piecewise cumulative integral of exp(log_pdf) on a uniform grid; eval()
// interpolates linearly between grid nodes. Used as a CDF oracle.
class CdfGrid {
public:
    CdfGrid(const std::function<double(double)>& log_pdf, double lo, double hi, int panels);
    double operator()(double x) const;
    double total_mass() const { return cum_.back(); }

private:
    double lo_, hi_, h_;
    std::vector<double> cum_;
};

}  // namespace skewlap
