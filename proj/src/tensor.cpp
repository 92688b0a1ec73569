#include "skewlap/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace skewlap {

namespace {

inline void sort3(int& s, int& t, int& l) {
    if (s > t) std::swap(s, t);
    if (t > l) std::swap(t, l);
    if (s > t) std::swap(s, t);
}

inline void sort4(int& s, int& t, int& l, int& k) {
    if (s > t) std::swap(s, t);
    if (l > k) std::swap(l, k);
    if (s > l) std::swap(s, l);
    if (t > k) std::swap(t, k);
    if (t > l) std::swap(t, l);
}

}  // namespace

std::size_t SymTensor3::index(int s, int t, int l) const {
    sort3(s, t, l);
    // entries with max index < l form a tetrahedral block, then a triangular
    // block for fixed l, then the row offset s.
    return static_cast<std::size_t>(l) * (l + 1) * (l + 2) / 6 +
           static_cast<std::size_t>(t) * (t + 1) / 2 + s;
}

int SymTensor3::multiplicity(int s, int t, int l) {
    if (s == t && t == l) return 1;
    if (s == t || t == l || s == l) return 3;
    return 6;
}

double SymTensor3::contract3(const Vector& u) const {
    double acc = 0.0;
    std::size_t idx = 0;
    for (int l = 0; l < dim_; ++l) {
        const double ul = u[l];
        for (int t = 0; t <= l; ++t) {
            const double ut = u[t];
            for (int s = 0; s <= t; ++s) {
                acc += multiplicity(s, t, l) * v_[idx++] * u[s] * ut * ul;
            }
        }
    }
    return acc;
}

Vector SymTensor3::contract2(const Vector& a, const Vector& b) const {
    Vector w = Vector::Zero(dim_);
    // Distribute each unique entry over the distinct permutations of its
    // index triple: slot one holds the free index, slots two and three take
    // a and b respectively. a and b need not be equal.
    std::size_t idx = 0;
    for (int l = 0; l < dim_; ++l) {
        for (int t = 0; t <= l; ++t) {
            for (int s = 0; s <= t; ++s) {
                const double val = v_[idx++];
                if (val == 0.0) continue;
                if (s == t && t == l) {
                    w[s] += val * a[s] * b[s];
                } else if (s == t) {  // (s, s, l)
                    w[s] += val * (a[s] * b[l] + a[l] * b[s]);
                    w[l] += val * a[s] * b[s];
                } else if (t == l) {  // (s, t, t)
                    w[s] += val * a[t] * b[t];
                    w[t] += val * (a[s] * b[t] + a[t] * b[s]);
                } else {
                    w[s] += val * (a[t] * b[l] + a[l] * b[t]);
                    w[t] += val * (a[s] * b[l] + a[l] * b[s]);
                    w[l] += val * (a[s] * b[t] + a[t] * b[s]);
                }
            }
        }
    }
    return w;
}

Vector SymTensor3::contract_matrix(const Matrix& m) const {
    Vector w = Vector::Zero(dim_);
    std::size_t idx = 0;
    for (int l = 0; l < dim_; ++l) {
        for (int t = 0; t <= l; ++t) {
            for (int s = 0; s <= t; ++s) {
                const double val = v_[idx++];
                if (val == 0.0) continue;
                if (s == t && t == l) {
                    w[s] += val * m(s, s);
                } else if (s == t) {
                    w[s] += val * (m(s, l) + m(l, s));
                    w[l] += val * m(s, s);
                } else if (t == l) {
                    w[s] += val * m(t, t);
                    w[t] += val * (m(s, t) + m(t, s));
                } else {
                    w[s] += val * (m(t, l) + m(l, t));
                    w[t] += val * (m(s, l) + m(l, s));
                    w[l] += val * (m(s, t) + m(t, s));
                }
            }
        }
    }
    return w;
}

std::array<double, 4> SymTensor3::ray_coefficients(const Vector& base, const Vector& dir) const {
    // contract3(base + r dir) = T(b,b,b) + 3 T(b,b,d) r + 3 T(b,d,d) r^2 + T(d,d,d) r^3.
    std::array<double, 4> c{};
    c[0] = contract3(base);
    c[1] = 3.0 * contract2(base, base).dot(dir);
    c[2] = 3.0 * contract2(dir, dir).dot(base);
    c[3] = contract3(dir);
    return c;
}

double SymTensor3::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

SymTensor3& SymTensor3::operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
}

SymTensor3 SymTensor3::operator*(double c) const {
    SymTensor3 out(*this);
    out *= c;
    return out;
}

SymTensor3& SymTensor3::operator+=(const SymTensor3& other) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += other.v_[i];
    return *this;
}

std::size_t SymTensor4::index(int s, int t, int l, int k) const {
    sort4(s, t, l, k);
    return static_cast<std::size_t>(k) * (k + 1) * (k + 2) * (k + 3) / 24 +
           static_cast<std::size_t>(l) * (l + 1) * (l + 2) / 6 +
           static_cast<std::size_t>(t) * (t + 1) / 2 + s;
}

int SymTensor4::multiplicity(int s, int t, int l, int k) {
    // 4! / prod(run length!) for the sorted tuple.
    int runs[4] = {1, 0, 0, 0};
    int r = 0;
    int idx[4] = {s, t, l, k};
    for (int i = 1; i < 4; ++i) {
        if (idx[i] == idx[i - 1]) {
            ++runs[r];
        } else {
            runs[++r] = 1;
        }
    }
    static const int fact[5] = {1, 1, 2, 6, 24};
    int denom = 1;
    for (int i = 0; i <= r; ++i) denom *= fact[runs[i]];
    return 24 / denom;
}

double SymTensor4::contract4(const Vector& u) const {
    double acc = 0.0;
    std::size_t idx = 0;
    for (int k = 0; k < dim_; ++k)
        for (int l = 0; l <= k; ++l)
            for (int t = 0; t <= l; ++t)
                for (int s = 0; s <= t; ++s)
                    acc += multiplicity(s, t, l, k) * v_[idx++] * u[s] * u[t] * u[l] * u[k];
    return acc;
}

double SymTensor4::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace skewlap
