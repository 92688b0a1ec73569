#include "skewlap/quadrature.hpp"

#include <cmath>

namespace skewlap {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw ResolutionExceeded("adaptive Simpson refinement cap reached");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts) {
    if (!(b > a)) return 0.0;
    const int panels = std::max(1, opts.min_panels);
    const double h = (b - a) / panels;
    const double panel_tol = opts.tol / panels;
    double total = 0.0;
    double fa = f(a);
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = i + 1 == panels ? b : x0 + h;
        const double fm = f(0.5 * (x0 + x1));
        const double fb = f(x1);
        const double whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, x0, x1, fa, fm, fb, whole, panel_tol, 0, opts.max_depth);
        fa = fb;
    }
    return total;
}

namespace {

double integrate_rec(const std::function<double(const Vector&)>& f,
                     const std::vector<std::pair<double, double>>& box, Vector& point,
                     std::size_t k, const QuadratureOptions& opts) {
    const auto [lo, hi] = box[k];
    if (k + 1 == box.size()) {
        auto g = [&](double x) {
            point[static_cast<int>(k)] = x;
            return f(point);
        };
        return adaptive_simpson(g, lo, hi, opts);
    }
    // Outer coordinates integrate the nested result; loosen the inner
    // tolerance relative to the interval width to keep cost bounded.
    QuadratureOptions inner = opts;
    inner.tol = opts.tol / std::max(1.0, hi - lo);
    auto g = [&](double x) {
        point[static_cast<int>(k)] = x;
        return integrate_rec(f, box, point, k + 1, inner);
    };
    return adaptive_simpson(g, lo, hi, opts);
}

}  // namespace

double integrate_box(const std::function<double(const Vector&)>& f,
                     const std::vector<std::pair<double, double>>& box,
                     const QuadratureOptions& opts) {
    if (box.empty()) throw DomainError("integration box is empty");
    Vector point(static_cast<int>(box.size()));
    return integrate_rec(f, box, point, 0, opts);
}

CdfGrid::CdfGrid(const std::function<double(double)>& log_pdf, double lo, double hi, int panels)
    : lo_(lo), hi_(hi), h_((hi - lo) / panels) {
    cum_.resize(panels + 1);
    cum_[0] = 0.0;
    auto pdf = [&](double x) { return std::exp(log_pdf(x)); };
    double left = pdf(lo);
    for (int i = 0; i < panels; ++i) {
        const double a = lo_ + i * h_;
        const double mid = pdf(a + 0.5 * h_);
        const double right = pdf(a + h_);
        cum_[i + 1] = cum_[i] + h_ / 6.0 * (left + 4.0 * mid + right);
        left = right;
    }
}

double CdfGrid::operator()(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return cum_.back();
    const double t = (x - lo_) / h_;
    const int i = std::min(static_cast<int>(t), static_cast<int>(cum_.size()) - 2);
    const double frac = t - i;
    return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
}

}  // namespace skewlap
