#include "skewlap/diagnostics.hpp"

#include "fixtures.hpp"
#include "skewlap/special.hpp"

#include <doctest.h>

#include <cmath>

using namespace skewlap;

namespace {

const SkewingFunction kProbit = SkewingFunction::probit();

std::function<double(const Vector&)> normal_logpdf(double mu, double var) {
    return [mu, var](const Vector& x) {
        return -0.5 * kLog2Pi - 0.5 * std::log(var) - 0.5 * (x[0] - mu) * (x[0] - mu) / var;
    };
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("tv of identical densities is zero") {
    auto p = normal_logpdf(0.0, 1.0);
    const auto est = tv_quadrature(p, p, {{-12.0, 12.0}});
    CHECK(std::abs(est.value) < 1e-10);
    CHECK(est.slack < 1e-7);
}

TEST_CASE("tv quadrature rejects dimensions above three") {
    auto p = [](const Vector&) { return -4.0; };
    const std::vector<std::pair<double, double>> box(4, {0.0, 1.0});
    CHECK_THROWS_AS(tv_quadrature(p, p, box), DomainError);
}

TEST_CASE("tv of equal-variance gaussians matches 2 Phi(delta/2) - 1") {
    const auto est =
        tv_quadrature(normal_logpdf(0.0, 1.0), normal_logpdf(1.0, 1.0), {{-14.0, 15.0}});
    const double expect = 2.0 * std_normal_cdf(0.5) - 1.0;
    CHECK(est.value == doctest::Approx(expect).epsilon(1e-6));
    CHECK(est.value == doctest::Approx(0.38292).epsilon(1e-4));
}

TEST_CASE("refinement cap raises ResolutionExceeded") {
    // a needle sitting on a panel boundary: sampled, but unresolvable with
    // zero extra bisection depth
    auto needle = [](const Vector& x) { return -1e6 * x[0] * x[0]; };
    auto flat = [](const Vector&) { return -100.0; };
    QuadratureOptions opts;
    opts.tol = 1e-14;
    opts.max_depth = 0;
    opts.min_panels = 2;
    CHECK_THROWS_AS(tv_quadrature(needle, flat, {{-1.0, 1.0}}, opts), ResolutionExceeded);

    CHECK_THROWS_AS(adaptive_simpson([](double x) { return std::exp(-1e8 * x * x); }, -1.0,
                                     1.0, QuadratureOptions{1e-14, 0, 2}),
                    ResolutionExceeded);
}

TEST_CASE("tv is symmetric and satisfies the triangle inequality on fixtures") {
    const std::vector<std::function<double(const Vector&)>> dens = {
        normal_logpdf(0.0, 1.0), normal_logpdf(0.7, 1.4), normal_logpdf(-0.4, 0.6)};
    const std::vector<std::pair<double, double>> box = {{-16.0, 16.0}};
    double d01 = tv_quadrature(dens[0], dens[1], box).value;
    double d10 = tv_quadrature(dens[1], dens[0], box).value;
    double d12 = tv_quadrature(dens[1], dens[2], box).value;
    double d02 = tv_quadrature(dens[0], dens[2], box).value;
    CHECK(d01 == doctest::Approx(d10).epsilon(1e-9));
    CHECK(d02 <= d01 + d12 + 1e-9);
}

TEST_CASE("tv in two dimensions against the product-form analytic value") {
    // Independent coordinates shifted in one: TV equals the 1-d value.
    auto p = [](const Vector& x) {
        return -kLog2Pi - 0.5 * (x[0] * x[0] + x[1] * x[1]);
    };
    auto q = [](const Vector& x) {
        return -kLog2Pi - 0.5 * ((x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1]);
    };
    const auto est = tv_quadrature(p, q, {{-10.0, 11.0}, {-10.0, 10.0}},
                                   QuadratureOptions{1e-6, 40});
    CHECK(est.value == doctest::Approx(2.0 * std_normal_cdf(0.5) - 1.0).epsilon(1e-4));
}

TEST_CASE("exact posteriors from conjugacy") {
    const auto exp_post =
        exact_posterior("exponential_expprior", fixtures::exp_data(), Vector::Constant(1, 1.0));
    CHECK(exp_post.shape == doctest::Approx(5.0));
    CHECK(exp_post.rate == doctest::Approx(3.0));
    CHECK(exp_post.mean() == doctest::Approx(5.0 / 3.0));

    Vector ab(2);
    ab << 2.0, 1.0;
    const auto gp_post = exact_posterior("gamma_poisson", fixtures::poisson_data(), ab);
    CHECK(gp_post.shape == doctest::Approx(5.0));
    CHECK(gp_post.rate == doctest::Approx(4.0));
    // mode agrees with the MAP from the optimizer
    const MapResult map = fixtures::map_of(gamma_poisson(2.0, 1.0), fixtures::poisson_data());
    CHECK(gp_post.mode() == doctest::Approx(map.theta_hat[0]).epsilon(1e-9));

    DataSet empty;
    empty.responses = Vector();
    CHECK_THROWS_AS(exact_posterior("exponential_expprior", empty, Vector::Constant(1, 1.0)),
                    UnsupportedModel);
    CHECK_THROWS_AS(
        exact_posterior("probit_gaussian", fixtures::exp_data(), Vector::Constant(1, 25.0)),
        UnsupportedModel);
}

TEST_CASE("gamma density integrates to one and cdf matches quadrature") {
    const ExactPosterior g{5.0, 3.0};
    const double mass = adaptive_simpson([&](double x) { return std::exp(g.log_pdf(x)); }, 1e-12,
                                         g.quantile(1.0 - 1e-13), QuadratureOptions{1e-10, 48});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    for (double x : {0.3, 1.0, 5.0 / 3.0, 3.0}) {
        const double cdf_quad = adaptive_simpson(
            [&](double t) { return std::exp(g.log_pdf(t)); }, 1e-12, x,
            QuadratureOptions{1e-10, 48});
        CHECK(g.cdf(x) == doctest::Approx(cdf_quad).epsilon(1e-8));
        CHECK(g.quantile(g.cdf(x)) == doctest::Approx(x).epsilon(1e-8));
    }
}

TEST_CASE("tv ordering on the exponential fixture: skew-modal beats gaussian") {
    const ModelSpec m = exponential_expprior(1.0);
    const DataSet d = fixtures::exp_data();
    const MapResult map = fixtures::map_of(m, d);
    const auto exact = exact_posterior(m.kind, d, m.prior_params);
    const auto skew = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);
    const auto gauss = build_gaussian_laplace(map, Parametrization::theta_scale);
    const double tv_skew = tv_exact_vs_approx(exact, skew).value;
    const double tv_gauss = tv_exact_vs_approx(exact, gauss).value;
    CHECK(tv_skew < tv_gauss);
    CHECK(tv_gauss < 1.0);
    CHECK(tv_skew > 0.0);
}

TEST_CASE("functional error of an approximation against its own sampler is noise") {
    const ModelSpec m = exponential_expprior(1.0);
    const DataSet d = fixtures::exp_data();
    const MapResult map = fixtures::map_of(m, d);
    const auto a = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);
    SampleBatch reference = sample(a, 200000, 1);
    const auto rep = functional_error(a, reference, identity_functional(), 200000, 2);
    REQUIRE(rep.standard_error.has_value());
    CHECK(rep.fmae[0] <= 3.0 * (*rep.standard_error)[0]);
    CHECK(rep.method == "monte_carlo");
}

TEST_CASE("exponential fixture: gaussian posterior-mean error is 1/3, skew-modal smaller") {
    const ModelSpec m = exponential_expprior(1.0);
    const DataSet d = fixtures::exp_data();
    const MapResult map = fixtures::map_of(m, d);
    const auto exact = exact_posterior(m.kind, d, m.prior_params);
    const auto gauss = build_gaussian_laplace(map, Parametrization::theta_scale);
    const auto skew = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);

    const int n_draws = 1000000;
    const auto rep_g = functional_error(gauss, exact, identity_functional(), n_draws, 9);
    const auto rep_s = functional_error(skew, exact, identity_functional(), n_draws, 9);
    // exact mean 5/3 vs gaussian mean 4/3
    CHECK(rep_g.fmae[0] == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    CHECK(rep_s.fmae[0] < rep_g.fmae[0]);
}

TEST_CASE("even functionals: skew-modal and gaussian agree in expectation") {
    const ModelSpec m = exponential_expprior(1.0);
    const DataSet d = fixtures::exp_data();
    const MapResult map = fixtures::map_of(m, d);
    const auto gauss = build_gaussian_laplace(map, Parametrization::theta_scale);
    const auto skew = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);
    const double center = map.theta_hat[0];
    Functional even = [center](const Vector& x) {
        return Vector(Vector::Constant(1, (x[0] - center) * (x[0] - center)));
    };
    const int n_draws = 1000000;
    const auto rep_g = functional_error(gauss, sample(skew, n_draws, 77), even, n_draws, 78);
    // E[(x-center)^2] identical for both: the difference is pure noise
    CHECK(rep_g.fmae[0] <= 4.0 * (*rep_g.standard_error)[0]);
}

TEST_CASE("ave_pr: identical sample sets give zero, disjoint ones do not") {
    Vector theta_true(3);
    theta_true << 0.3, 0.8, -0.5;
    const DataSet d = fixtures::binary_data(27, 3, 3, theta_true);
    const ModelSpec m = probit_gaussian(25.0, 3);
    const MapResult map = fixtures::map_of(m, d);
    const auto a = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);
    const auto g = build_gaussian_laplace(map, Parametrization::theta_scale);
    const Matrix draws_a = sample(a, 20000, 5).points;
    const Matrix draws_g = sample(g, 20000, 6).points;
    CHECK(ave_pr(m.kind, d, draws_a, draws_a) == 0.0);
    const double v = ave_pr(m.kind, d, draws_a, draws_g);
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK_THROWS_AS(ave_pr(m.kind, d, Matrix(0, 3), draws_g), EmptyReference);
}

TEST_CASE("bound calculator: unit inputs") {
    BoundInputs b;
    b.n = 333.0;
    b.d = 1;
    const auto res = nonasymptotic_bound(b);
    CHECK(res.c1_star == 4.0);  // 4/3 + 2/3 + 2 exactly
    CHECK(res.c2_star == doctest::Approx(14.321).epsilon(1e-3 / 14.321));
    CHECK(res.c2_star ==
          doctest::Approx(16.0 / 3.0 + 512.0 / 81.0 + 8.0 / 3.0).epsilon(1e-12));
    CHECK(res.m_n == doctest::Approx(std::sqrt(std::log(333.0))).epsilon(1e-12));
}

TEST_CASE("bound calculator: high-dimensional regime is flagged") {
    BoundInputs b;
    b.d = 135;
    b.n = 333.0;
    const auto res = nonasymptotic_bound(b);
    CHECK_FALSE(res.precondition_n_large);
    CHECK_FALSE(res.valid);
    REQUIRE(!res.failed.empty());
    CHECK(res.failed[0] == "n_large");
    CHECK(res.bound > 0.0);  // reported regardless
}

TEST_CASE("bound calculator: the remainder settles at 2 c2* for large n") {
    BoundInputs b;
    b.c0 = 3.0;  // exponents 1 - eta1 c0 and 1 - c0 c5 d / 2 both negative
    b.d = 2;
    double prev_gap = 1e300;
    for (double n : {1e8, 1e12, 1e16}) {
        b.n = n;
        const auto res = nonasymptotic_bound(b);
        const double normalized =
            res.bound * b.n / (std::pow(b.c0 * std::log(b.n), 3) * std::pow(b.d, 3));
        const double gap = std::abs(normalized - 2.0 * res.c2_star);
        CHECK(gap < prev_gap);  // monotone approach to the limit
        prev_gap = gap;
        if (n >= 1e16) CHECK(normalized == doctest::Approx(2.0 * res.c2_star).epsilon(1e-4));
    }
    b.n = 1e12;
    const auto res = nonasymptotic_bound(b);
    CHECK(res.valid);
}

TEST_CASE("bound calculator rejects nonsense inputs") {
    BoundInputs b;
    b.L3 = -1.0;
    CHECK_THROWS_AS(nonasymptotic_bound(b), DomainError);
    BoundInputs b2;
    b2.eta_bar1 = 3.0;
    b2.eta_bar2 = 1.0;
    CHECK_THROWS_AS(nonasymptotic_bound(b2), DomainError);
}

}  // TEST_SUITE
