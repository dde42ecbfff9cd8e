#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "dbr/core.hpp"

namespace dbr {

/// Dense univariate polynomial over the complex numbers, coefficients stored
/// in ascending degree order. The representation is kept trimmed: the leading
/// stored coefficient is nonzero, and the zero polynomial stores nothing.
class ComplexPoly {
public:
    ComplexPoly() = default;
    ComplexPoly(std::initializer_list<Complex> c) : c_(c) { trim(); }
    explicit ComplexPoly(std::vector<Complex> c) : c_(std::move(c)) { trim(); }

    static ComplexPoly one() { return ComplexPoly{Complex(1.0)}; }

    static ComplexPoly monomial(int k, Complex a = Complex(1.0)) {
        std::vector<Complex> c(static_cast<size_t>(k) + 1, Complex(0.0));
        c.back() = a;
        return ComplexPoly(std::move(c));
    }

    /// Monic polynomial with the given roots.
    static ComplexPoly from_roots(const std::vector<Complex>& roots) {
        ComplexPoly p = one();
        for (Complex r : roots) p = p * ComplexPoly{-r, Complex(1.0)};
        return p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 if zero
    bool is_zero() const { return c_.empty(); }

    Complex coeff(int j) const {
        return (j >= 0 && j < static_cast<int>(c_.size())) ? c_[j] : Complex(0.0);
    }
    const std::vector<Complex>& coeffs() const { return c_; }

    Complex operator()(Complex z) const {
        Complex acc(0.0);
        for (size_t j = c_.size(); j-- > 0;) acc = acc * z + c_[j];
        return acc;
    }

    ComplexPoly derivative() const {
        if (c_.size() <= 1) return ComplexPoly();
        std::vector<Complex> d(c_.size() - 1);
        for (size_t j = 1; j < c_.size(); ++j) d[j - 1] = double(j) * c_[j];
        return ComplexPoly(std::move(d));
    }

    /// z * p, as a coefficient shift.
    ComplexPoly shift_up() const {
        if (is_zero()) return ComplexPoly();
        std::vector<Complex> c;
        c.reserve(c_.size() + 1);
        c.push_back(Complex(0.0));
        c.insert(c.end(), c_.begin(), c_.end());
        return ComplexPoly(std::move(c));
    }

    /// Coefficient-wise conjugate p*(z) = sum conj(p_j) z^j, so that
    /// p*(conj(z)) = conj(p(z)).
    ComplexPoly conj_coeffs() const {
        std::vector<Complex> c(c_);
        for (Complex& v : c) v = std::conj(v);
        return ComplexPoly(std::move(c));
    }

    double norm1() const {
        double s = 0.0;
        for (Complex v : c_) s += std::abs(v);
        return s;
    }

    double norm2() const {
        double s = 0.0;
        for (Complex v : c_) s += std::norm(v);
        return std::sqrt(s);
    }

    friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
        std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()), Complex(0.0));
        for (size_t j = 0; j < a.c_.size(); ++j) c[j] += a.c_[j];
        for (size_t j = 0; j < b.c_.size(); ++j) c[j] += b.c_[j];
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
        std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()), Complex(0.0));
        for (size_t j = 0; j < a.c_.size(); ++j) c[j] += a.c_[j];
        for (size_t j = 0; j < b.c_.size(); ++j) c[j] -= b.c_[j];
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator-(const ComplexPoly& a) { return a * Complex(-1.0); }

    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
        if (a.is_zero() || b.is_zero()) return ComplexPoly();
        std::vector<Complex> c(a.c_.size() + b.c_.size() - 1, Complex(0.0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator*(const ComplexPoly& a, Complex s) {
        std::vector<Complex> c(a.c_);
        for (Complex& v : c) v *= s;
        return ComplexPoly(std::move(c));
    }
    friend ComplexPoly operator*(Complex s, const ComplexPoly& a) { return a * s; }

    bool operator==(const ComplexPoly& o) const { return c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
    }

    std::vector<Complex> c_;
};

/// Coefficients of p(z + lambda), i.e. the Taylor expansion of p about
/// lambda, computed by repeated synthetic division. O(deg^2).
inline ComplexPoly taylor_shift(const ComplexPoly& p, Complex lambda) {
    if (p.is_zero()) return p;
    std::vector<Complex> w(p.coeffs());
    const size_t n = w.size();
    for (size_t j = 0; j + 1 < n; ++j)
        for (size_t k = n - 1; k > j; --k) w[k - 1] += lambda * w[k];
    return ComplexPoly(std::move(w));
}

/// Quotient of p by (z - lambda); *remainder receives p(lambda).
inline ComplexPoly synthetic_divide(const ComplexPoly& p, Complex lambda,
                                    Complex* remainder = nullptr) {
    if (p.is_zero()) {
        if (remainder) *remainder = Complex(0.0);
        return p;
    }
    const auto& c = p.coeffs();
    std::vector<Complex> q(c.size() - 1);
    Complex carry(0.0);
    for (size_t j = c.size(); j-- > 1;) {
        carry = c[j] + lambda * carry;
        q[j - 1] = carry;
    }
    if (remainder) *remainder = c[0] + lambda * carry;
    return ComplexPoly(std::move(q));
}

/// Exact quotient p / (z - lambda)^m. Each stage's remainder must vanish to
/// within rel_tol * |p|_2; otherwise the division is not exact and an Error
/// is raised.
inline ComplexPoly divide_linear_power(const ComplexPoly& p, Complex lambda, int m,
                                       double rel_tol = 1e-9) {
    ComplexPoly q = p;
    const double scale = std::max(1.0, p.norm2());
    for (int s = 0; s < m; ++s) {
        Complex rem;
        q = synthetic_divide(q, lambda, &rem);
        if (std::abs(rem) > rel_tol * scale)
            throw Error("divide_linear_power: nonzero remainder " +
                        std::to_string(std::abs(rem)));
    }
    return q;
}

} // namespace dbr
