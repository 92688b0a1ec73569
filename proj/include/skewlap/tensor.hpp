// Symmetric rank-3 and rank-4 tensors in unique-entry storage.
//
// A symmetric order-k tensor over R^d is stored as its d(d+1)...(d+k-1)/k!
// unique entries with sorted index tuples. Contractions expand index
// multiplicities analytically instead of materialising the full d^k array.
#pragma once

#include "skewlap/types.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace skewlap {

class SymTensor3 {
public:
    SymTensor3() : dim_(0) {}
    explicit SymTensor3(int dim) : dim_(dim), v_(unique_count(dim), 0.0) {}

    static std::size_t unique_count(int d) {
        return static_cast<std::size_t>(d) * (d + 1) * (d + 2) / 6;
    }

    int dim() const { return dim_; }
    std::size_t size() const { return v_.size(); }

    // Entry accessors accept indices in any order.
    double& at(int s, int t, int l) { return v_[index(s, t, l)]; }
    double at(int s, int t, int l) const { return v_[index(s, t, l)]; }

    // Number of distinct permutations of a sorted index triple: 1, 3 or 6.
    static int multiplicity(int s, int t, int l);

    // sum_{s,t,l} T_stl u_s u_t u_l over the full tensor.
    double contract3(const Vector& u) const;

    // w_s = sum_{t,l} T_stl a_t b_l over the full tensor.
    Vector contract2(const Vector& a, const Vector& b) const;

    // trace over a matrix in two slots: w_s = sum_{t,l} T_stl m_tl.
    Vector contract_matrix(const Matrix& m) const;

    // Coefficients (c0..c3) of r -> contract3(base + r*dir), a cubic in r.
    // Lets quadrature loops evaluate along a ray without re-contracting.
    std::array<double, 4> ray_coefficients(const Vector& base, const Vector& dir) const;

    double max_abs() const;

    SymTensor3& operator*=(double c);
    SymTensor3 operator*(double c) const;
    SymTensor3& operator+=(const SymTensor3& other);

    const std::vector<double>& raw() const { return v_; }
    std::vector<double>& raw() { return v_; }

    // Visits every unique entry as (s <= t <= l, value).
    template <typename F>
    void for_each(F&& f) const {
        std::size_t idx = 0;
        for (int l = 0; l < dim_; ++l)
            for (int t = 0; t <= l; ++t)
                for (int s = 0; s <= t; ++s) f(s, t, l, v_[idx++]);
    }

private:
    std::size_t index(int s, int t, int l) const;

    int dim_;
    std::vector<double> v_;
};

class SymTensor4 {
public:
    SymTensor4() : dim_(0) {}
    explicit SymTensor4(int dim) : dim_(dim), v_(unique_count(dim), 0.0) {}

    static std::size_t unique_count(int d) {
        return static_cast<std::size_t>(d) * (d + 1) * (d + 2) * (d + 3) / 24;
    }

    int dim() const { return dim_; }
    std::size_t size() const { return v_.size(); }

    double& at(int s, int t, int l, int k) { return v_[index(s, t, l, k)]; }
    double at(int s, int t, int l, int k) const { return v_[index(s, t, l, k)]; }

    static int multiplicity(int s, int t, int l, int k);

    // sum T_stlk u_s u_t u_l u_k over the full tensor.
    double contract4(const Vector& u) const;

    double max_abs() const;

private:
    std::size_t index(int s, int t, int l, int k) const;

    int dim_;
    std::vector<double> v_;
};

}  // namespace skewlap
