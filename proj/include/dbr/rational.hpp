#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "dbr/complex_poly.hpp"
#include "dbr/core.hpp"
#include "dbr/root_finder.hpp"

namespace dbr {

/// Rational function num/den whose denominator is zero-free on the closed
/// unit disk, so the function is holomorphic on a neighbourhood of the disk
/// and its Taylor series at 0 converges geometrically. The denominator is
/// normalized to have a positive real constant coefficient.
class StableRational {
public:
    StableRational(ComplexPoly num, ComplexPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error("StableRational: zero denominator");
        if (den_.degree() >= 1) {
            RootSet rs = poly_roots(den_);
            den_radius_ = std::abs(rs.roots.front());
            if (!(den_radius_ > 1.0))
                throw Error("StableRational: denominator root inside the closed unit disk");
        }
        Complex d0 = den_.coeff(0);
        Complex rot = std::conj(d0) / std::abs(d0);
        num_ = num_ * rot;
        den_ = den_ * rot;
        std::vector<Complex> dc(den_.coeffs());
        dc[0] = Complex(dc[0].real());
        den_ = ComplexPoly(std::move(dc));
    }

    static StableRational polynomial(ComplexPoly p) {
        return StableRational(std::move(p), ComplexPoly::one());
    }

    const ComplexPoly& num() const { return num_; }
    const ComplexPoly& den() const { return den_; }
    bool is_polynomial() const { return den_.degree() == 0; }

    /// Smallest modulus among denominator roots (infinite for polynomials).
    double den_radius() const { return den_radius_; }

    Complex operator()(Complex z) const { return num_(z) / den_(z); }

    /// f - v as a rational with the same denominator.
    StableRational sub_const(Complex v) const {
        StableRational r(*this);
        r.num_ = num_ - v * den_;
        return r;
    }

    friend StableRational operator*(const ComplexPoly& p, const StableRational& f) {
        StableRational r(f);
        r.num_ = p * f.num_;
        return r;
    }

    friend StableRational operator*(Complex s, const StableRational& f) {
        StableRational r(f);
        r.num_ = s * f.num_;
        return r;
    }

    /// First `count` Taylor coefficients at the origin, by the division
    /// recurrence c_k = (num_k - sum_{j>=1} den_j c_{k-j}) / den_0.
    std::vector<Complex> taylor(int count) const {
        std::vector<Complex> c;
        c.reserve(count);
        taylor_extend(c, count);
        return c;
    }

    /// Extends an existing prefix of Taylor coefficients in place.
    void taylor_extend(std::vector<Complex>& c, int count) const {
        const Complex d0 = den_.coeff(0);
        const int dd = den_.degree();
        for (int k = static_cast<int>(c.size()); k < count; ++k) {
            Complex acc = num_.coeff(k);
            for (int j = 1; j <= std::min(k, dd); ++j) acc -= den_.coeff(j) * c[k - j];
            c.push_back(acc / d0);
        }
    }

private:
    ComplexPoly num_, den_;
    double den_radius_ = std::numeric_limits<double>::infinity();
};

} // namespace dbr
