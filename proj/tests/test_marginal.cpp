#include "skewlap/marginal.hpp"

#include "fixtures.hpp"
#include "skewlap/quadrature.hpp"
#include "skewlap/sampler.hpp"
#include "skewlap/special.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace skewlap;

namespace {

const SkewingFunction kProbit = SkewingFunction::probit();

// Synthetic model whose derivatives at the MAP are fully controlled: the
// marginal construction only reads J (through MapResult) and the third
// tensor, so constants suffice.
struct SyntheticPosterior {
    ModelSpec model;
    DataSet data;
    MapResult map;
};

SyntheticPosterior synthetic(const Matrix& observed_info, const SymTensor3& third, double n) {
    const int d = static_cast<int>(observed_info.rows());
    SyntheticPosterior s{ModelSpec{}, DataSet::from_responses(Vector::Ones(4)), MapResult{}};
    s.model.dim = d;
    s.model.kind = "synthetic";
    s.model.in_domain = [](const Vector&) { return true; };
    s.model.loglik = [](const Vector&, const DataSet&) { return 0.0; };
    s.model.logprior = [](const Vector&) { return 0.0; };
    s.model.loglik_grad = [d](const Vector&, const DataSet&) { return Vector(Vector::Zero(d)); };
    s.model.loglik_hess = [observed_info](const Vector&, const DataSet&) {
        return Matrix(-observed_info);
    };
    s.model.loglik_third = [third](const Vector&, const DataSet&) { return third; };
    s.map.theta_hat = Vector::Zero(d);
    s.map.observed_info = observed_info;
    s.map.converged = true;
    s.map.n = n;
    s.map.chol_lower = Eigen::LLT<Matrix>(Matrix(observed_info / n)).matrixL();
    return s;
}

Matrix random_spd(int d, unsigned seed, double scale) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> normal;
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = normal(gen);
    return Matrix(a * a.transpose() + scale * Matrix::Identity(d, d));
}

SymTensor3 random_sym3(int d, unsigned seed, double scale) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> normal;
    SymTensor3 t(d);
    for (double& v : t.raw()) v = scale * normal(gen);
    return t;
}

}  // namespace

TEST_SUITE("marginal") {

TEST_CASE("full index set reproduces the joint construction") {
    const ModelSpec m = exponential_expprior(1.0);
    const DataSet d = fixtures::exp_data();
    const MapResult map = fixtures::map_of(m, d);
    const auto joint = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);
    const auto marg =
        build_marginal_skew_modal(m, d, map, {0}, kProbit, Parametrization::theta_scale);

    CHECK(marg.nu1[0] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(marg.nu3.at(0, 0, 0) == doctest::Approx(3.375).epsilon(1e-10));
    for (double theta : {0.4, 1.0, 4.0 / 3.0, 2.0, 3.1}) {
        const Vector p = Vector::Constant(1, theta);
        CHECK(marg.log_density(p) == doctest::Approx(joint.log_density(p)).epsilon(1e-12));
    }
}

TEST_CASE("full index set in higher dimension matches joint pointwise") {
    Vector theta_true(3);
    theta_true << 0.3, 0.8, -0.5;
    const DataSet d = fixtures::binary_data(100, 3, 11, theta_true);
    const ModelSpec m = probit_gaussian(25.0, 3);
    const MapResult map = fixtures::map_of(m, d);
    const auto joint = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);
    const auto marg =
        build_marginal_skew_modal(m, d, map, {0, 1, 2}, kProbit, Parametrization::theta_scale);
    std::mt19937 gen(4);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 100; ++i) {
        Vector p = map.theta_hat;
        for (int j = 0; j < 3; ++j) p[j] += 0.3 * normal(gen);
        CHECK(marg.log_density(p) == doctest::Approx(joint.log_density(p)).epsilon(1e-12));
    }
}

TEST_CASE("nu coefficients against the explicit four-term expansion") {
    // Independent oracle: materialize Lambda and the Schur complement, then
    // assemble nu1/nu3 with literal loops over the (C, complement) splits.
    const int d = 4;
    const std::vector<int> C = {0, 2};
    const std::vector<int> Cb = {1, 3};
    const double n = 60.0;
    const Matrix J = random_spd(d, 91, 2.0);
    const SymTensor3 T = random_sym3(d, 92, 1.0);
    auto s = synthetic(J, T, n);
    const auto marg = build_marginal_skew_modal(s.model, s.data, s.map, C, kProbit,
                                                Parametrization::h_scale);

    const Matrix omega_hat = Matrix(J / n).inverse();
    Matrix occ(2, 2), obc(2, 2), obb(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            occ(i, j) = omega_hat(C[i], C[j]);
            obc(i, j) = omega_hat(Cb[i], C[j]);
            obb(i, j) = omega_hat(Cb[i], Cb[j]);
        }
    const Matrix lambda = obc * occ.inverse();
    const Matrix schur = obb - obc * occ.inverse() * obc.transpose();

    for (int si = 0; si < 2; ++si) {
        double expect = 0.0;
        for (int ri = 0; ri < 2; ++ri)
            for (int vi = 0; vi < 2; ++vi)
                expect += 3.0 * T.at(C[si], Cb[ri], Cb[vi]) * schur(ri, vi);
        for (int ri = 0; ri < 2; ++ri)
            for (int vi = 0; vi < 2; ++vi)
                for (int ki = 0; ki < 2; ++ki)
                    expect += 3.0 * T.at(Cb[ri], Cb[vi], Cb[ki]) * schur(ri, vi) * lambda(ki, si);
        CHECK(marg.nu1[si] == doctest::Approx(expect).epsilon(1e-10));
    }

    // Raw four-term assembly pins each Lambda contraction to fixed slots, so
    // its entries are not permutation symmetric; symmetrize before comparing
    // (the polynomial value is unchanged, checked below).
    auto raw = [&](int si, int ti, int li) {
        double expect = T.at(C[si], C[ti], C[li]);
        for (int ri = 0; ri < 2; ++ri)
            expect += 3.0 * T.at(C[si], C[ti], Cb[ri]) * lambda(ri, li);
        for (int ri = 0; ri < 2; ++ri)
            for (int vi = 0; vi < 2; ++vi)
                expect += 3.0 * T.at(C[si], Cb[ri], Cb[vi]) * lambda(ri, ti) * lambda(vi, li);
        for (int ri = 0; ri < 2; ++ri)
            for (int vi = 0; vi < 2; ++vi)
                for (int ki = 0; ki < 2; ++ki)
                    expect += T.at(Cb[ri], Cb[vi], Cb[ki]) * lambda(ri, si) * lambda(vi, ti) *
                              lambda(ki, li);
        return expect;
    };
    for (int si = 0; si < 2; ++si)
        for (int ti = 0; ti < 2; ++ti)
            for (int li = 0; li < 2; ++li) {
                const double sym = (raw(si, ti, li) + raw(si, li, ti) + raw(ti, si, li) +
                                    raw(ti, li, si) + raw(li, si, ti) + raw(li, ti, si)) /
                                   6.0;
                CHECK(marg.nu3.at(si, ti, li) == doctest::Approx(sym).epsilon(1e-9));
            }

    // value invariance: raw assembly and symmetrized tensor give the same cubic
    std::mt19937 gen(3);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 10; ++rep) {
        Vector u(2);
        u << normal(gen), normal(gen);
        double raw_poly = 0.0;
        for (int si = 0; si < 2; ++si)
            for (int ti = 0; ti < 2; ++ti)
                for (int li = 0; li < 2; ++li) raw_poly += raw(si, ti, li) * u[si] * u[ti] * u[li];
        CHECK(marg.nu3.contract3(u) == doctest::Approx(raw_poly).epsilon(1e-9));
    }
}

TEST_CASE("block-diagonal information kills every Lambda term") {
    const int d = 3;
    Matrix J = Matrix::Zero(d, d);
    J(0, 0) = 2.0;
    J(1, 1) = 3.0;
    J(2, 2) = 1.5;
    J(1, 2) = J(2, 1) = 0.4;  // coupling inside the complement only
    const SymTensor3 T = random_sym3(d, 55, 1.0);
    const double n = 40.0;
    auto s = synthetic(J, T, n);
    const auto marg = build_marginal_skew_modal(s.model, s.data, s.map, {0}, kProbit,
                                                Parametrization::h_scale);
    // nu3 = T restricted to C
    CHECK(marg.nu3.at(0, 0, 0) == doctest::Approx(T.at(0, 0, 0)).epsilon(1e-12));
    // nu1_s = 3 T_{srv} schur_{rv} with schur the complement covariance
    const Matrix omega_hat = Matrix(J / n).inverse();
    double expect = 0.0;
    for (int r = 1; r < d; ++r)
        for (int v = 1; v < d; ++v) expect += 3.0 * T.at(0, r, v) * omega_hat(r, v);
    CHECK(marg.nu1[0] == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("nu3 is permutation symmetric after assembly (d = 4 full expansion)") {
    const Matrix J = random_spd(4, 71, 2.5);
    const SymTensor3 T = random_sym3(4, 72, 0.7);
    auto s = synthetic(J, T, 80.0);
    const auto marg = build_marginal_skew_modal(s.model, s.data, s.map, {0, 1, 3}, kProbit,
                                                Parametrization::h_scale);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                CHECK(marg.nu3.at(a, b, c) == marg.nu3.at(b, a, c));
                CHECK(marg.nu3.at(a, b, c) == marg.nu3.at(c, b, a));
            }
}

TEST_CASE("gaussian conditional moment identities against Monte Carlo") {
    const int d = 3;
    const std::vector<int> C = {0};
    const Matrix J = random_spd(d, 31, 2.0);
    const double n = 50.0;
    const Matrix omega_hat = Matrix(J / n).inverse();
    Matrix occ(1, 1), obc(2, 1), obb(2, 2);
    occ(0, 0) = omega_hat(0, 0);
    for (int i = 0; i < 2; ++i) {
        obc(i, 0) = omega_hat(i + 1, 0);
        for (int j = 0; j < 2; ++j) obb(i, j) = omega_hat(i + 1, j + 1);
    }
    const Matrix lambda = obc * occ.inverse();
    const Matrix schur = obb - obc * occ.inverse() * obc.transpose();
    const Matrix chol = Eigen::LLT<Matrix>(schur).matrixL();

    const Vector hc = Vector::Constant(1, 0.8);
    const Vector mean = lambda * hc;

    const int n_draws = 400000;
    Rng rng(7);
    Vector m1 = Vector::Zero(2);
    Matrix m2 = Matrix::Zero(2, 2);
    double m3 = 0.0, m3_sq = 0.0;  // E[h_1 h_1 h_2] and its square accumulator
    for (int i = 0; i < n_draws; ++i) {
        Vector eps(2);
        rng.normal_pair(eps[0], eps[1]);
        const Vector h = mean + chol * eps;
        m1 += h;
        m2 += h * h.transpose();
        const double t = h[0] * h[0] * h[1];
        m3 += t;
        m3_sq += t * t;
    }
    m1 /= n_draws;
    m2 /= n_draws;
    m3 /= n_draws;
    m3_sq /= n_draws;

    for (int r = 0; r < 2; ++r) {
        const double se = std::sqrt(schur(r, r) / n_draws);
        CHECK(std::abs(m1[r] - mean[r]) <= 4.0 * se);
    }
    for (int r = 0; r < 2; ++r)
        for (int v = 0; v < 2; ++v) {
            // crude variance bound for the product moment
            const double se = 4.0 * std::sqrt((schur(r, r) + mean[r] * mean[r]) *
                                              (schur(v, v) + mean[v] * mean[v]) / n_draws);
            CHECK(std::abs(m2(r, v) - (schur(r, v) + mean[r] * mean[v])) <= 4.0 * se);
        }
    // E[h_r h_v h_k] = mu_r mu_v mu_k + mu_r schur_vk + mu_v schur_rk + mu_k schur_rv
    const double expect3 = mean[0] * mean[0] * mean[1] + 2.0 * mean[0] * schur(0, 1) +
                           mean[1] * schur(0, 0);
    const double se3 = std::sqrt(std::max(0.0, m3_sq - m3 * m3) / n_draws);
    CHECK(std::abs(m3 - expect3) <= 4.0 * se3);
}

TEST_CASE("closed-form marginal vs quadrature marginalization of the joint, d = 2 probit") {
    Vector theta_true(2);
    theta_true << 0.4, 0.9;
    const DataSet d = fixtures::binary_data(10, 2, 21, theta_true);
    const ModelSpec m = probit_gaussian(25.0, 2);
    const MapResult map = fixtures::map_of(m, d);
    const auto joint = build_skew_modal(m, d, map, kProbit, Parametrization::theta_scale);
    const auto marg =
        build_marginal_skew_modal(m, d, map, {0}, kProbit, Parametrization::theta_scale);

    const double s1 = std::sqrt(joint.omega(0, 0));
    const double s2 = std::sqrt(joint.omega(1, 1));
    const int grid = 400;
    double tv = 0.0;
    const double lo = map.theta_hat[0] - 8.0 * s1, hi = map.theta_hat[0] + 8.0 * s1;
    const double step = (hi - lo) / grid;
    for (int i = 0; i <= grid; ++i) {
        const double t1 = lo + i * step;
        const double closed = std::exp(marg.log_density(Vector::Constant(1, t1)));
        const double integrated = adaptive_simpson(
            [&](double t2) {
                Vector p(2);
                p << t1, t2;
                return std::exp(joint.log_density(p));
            },
            map.theta_hat[1] - 10.0 * s2, map.theta_hat[1] + 10.0 * s2,
            QuadratureOptions{1e-9, 48});
        const double w = (i == 0 || i == grid) ? 0.5 : 1.0;  // trapezoid
        tv += 0.5 * w * step * std::abs(closed - integrated);
    }
    CHECK(tv <= 0.01);
}

TEST_CASE("monte-carlo marginalization of the joint agrees with the closed form") {
    // Random synthetic posteriors, d = 3, C = {0, 1}: sample the joint
    // skew-modal, histogram the C block, and compare cell masses with the
    // closed-form marginal integrated per cell.
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const Matrix J = random_spd(3, 900 + seed, 3.0);
        const SymTensor3 T = random_sym3(3, 950 + seed, 0.8);
        const double n = 64.0;
        auto s = synthetic(J, T, n);
        const auto joint = build_skew_modal(s.model, s.data, s.map, kProbit,
                                            Parametrization::h_scale);
        const auto marg = build_marginal_skew_modal(s.model, s.data, s.map, {0, 1}, kProbit,
                                                    Parametrization::h_scale);

        const int n_draws = 1000000;
        const SampleBatch batch = sample(joint, n_draws, 10'000 + seed);

        const double a1 = std::sqrt(marg.omega_cc(0, 0)), a2 = std::sqrt(marg.omega_cc(1, 1));
        const int bins = 24;
        const double lo1 = -4.0 * a1, lo2 = -4.0 * a2;
        const double w1 = 8.0 * a1 / bins, w2 = 8.0 * a2 / bins;
        Matrix hist = Matrix::Zero(bins, bins);
        int inside = 0;
        for (int i = 0; i < n_draws; ++i) {
            const int b1 = static_cast<int>(std::floor((batch.points(i, 0) - lo1) / w1));
            const int b2 = static_cast<int>(std::floor((batch.points(i, 1) - lo2) / w2));
            if (b1 < 0 || b1 >= bins || b2 < 0 || b2 >= bins) continue;
            hist(b1, b2) += 1.0;
            ++inside;
        }
        double tv = 0.0;
        for (int b1 = 0; b1 < bins; ++b1)
            for (int b2 = 0; b2 < bins; ++b2) {
                // Simpson on the cell for the closed-form mass
                double mass = 0.0;
                const double x0 = lo1 + b1 * w1, y0 = lo2 + b2 * w2;
                const double fx[3] = {x0, x0 + 0.5 * w1, x0 + w1};
                const double fy[3] = {y0, y0 + 0.5 * w2, y0 + w2};
                const double wq[3] = {1.0, 4.0, 1.0};
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        Vector p(2);
                        p << fx[a], fy[b];
                        mass += wq[a] * wq[b] * std::exp(marg.log_density(p));
                    }
                mass *= w1 * w2 / 36.0;
                tv += std::abs(hist(b1, b2) / n_draws - mass);
            }
        tv = 0.5 * (tv + (1.0 - static_cast<double>(inside) / n_draws));
        CHECK(tv < 0.02);
    }
}

TEST_CASE("marginal density basics") {
    const Matrix J = random_spd(3, 12, 2.0);
    const SymTensor3 T = random_sym3(3, 13, 0.6);
    auto s = synthetic(J, T, 70.0);
    const auto marg = build_marginal_skew_modal(s.model, s.data, s.map, {1}, kProbit,
                                                Parametrization::h_scale);

    // at the center the skewing factor is exactly 1/2
    const double expect =
        -0.5 * kLog2Pi - 0.5 * std::log(marg.omega_cc(0, 0));
    CHECK(marg.log_density(marg.center) == doctest::Approx(expect).epsilon(1e-12));

    // reflection identity with the linear + cubic odd polynomial
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const double sd = std::sqrt(marg.omega_cc(0, 0));
    for (int i = 0; i < 100; ++i) {
        const Vector v = Vector::Constant(1, u(gen) * sd);
        const double sum = std::exp(marg.log_density(marg.center + v)) +
                           std::exp(marg.log_density(marg.center - v));
        const double gauss2 =
            2.0 * std::exp(-0.5 * kLog2Pi - 0.5 * std::log(marg.omega_cc(0, 0)) -
                           0.5 * v[0] * v[0] / marg.omega_cc(0, 0));
        CHECK(sum == doctest::Approx(gauss2).epsilon(1e-12));
    }

    // normalization, d_C = 1
    const double mass = adaptive_simpson(
        [&](double t) { return std::exp(marg.log_density(Vector::Constant(1, t))); },
        -12.0 * sd, 12.0 * sd, QuadratureOptions{1e-9, 48});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("bad index sets are rejected") {
    const ModelSpec m = exponential_expprior(1.0);
    const DataSet d = fixtures::exp_data();
    const MapResult map = fixtures::map_of(m, d);
    CHECK_THROWS_AS(
        build_marginal_skew_modal(m, d, map, {}, kProbit, Parametrization::theta_scale),
        BadIndexSet);
    CHECK_THROWS_AS(
        build_marginal_skew_modal(m, d, map, {0, 0}, kProbit, Parametrization::theta_scale),
        BadIndexSet);
    CHECK_THROWS_AS(
        build_marginal_skew_modal(m, d, map, {1}, kProbit, Parametrization::theta_scale),
        BadIndexSet);
}

}  // TEST_SUITE
