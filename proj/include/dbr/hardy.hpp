#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dbr/complex_poly.hpp"
#include "dbr/core.hpp"
#include "dbr/rational.hpp"

namespace dbr {

/// Finitely atomic positive measure on the closed unit disk.
struct AtomicMeasure {
    std::vector<Complex> atoms;
    std::vector<double> weights;

    AtomicMeasure(std::vector<Complex> a, std::vector<double> w)
        : atoms(std::move(a)), weights(std::move(w)) {
        if (atoms.size() != weights.size())
            throw Error("AtomicMeasure: atom/weight count mismatch");
        if (atoms.empty()) throw Error("AtomicMeasure: no atoms");
        for (auto& z : atoms) {
            double m = std::abs(z);
            if (m > 1.0 + 1e-12)
                throw Error("AtomicMeasure: atom outside the closed unit disk");
            if (m > 1.0) z /= m;
        }
        for (double w : weights)
            if (!(w > 0.0)) throw Error("AtomicMeasure: weights must be positive");
        for (size_t i = 0; i < atoms.size(); ++i)
            for (size_t j = i + 1; j < atoms.size(); ++j)
                if (std::abs(atoms[i] - atoms[j]) <= 1e-12)
                    throw Error("AtomicMeasure: atoms must be distinct");
    }

    size_t size() const { return atoms.size(); }
};

/// H^2 inner product <f, g> = sum_k f_k conj(g_k). Truncation is extended in
/// blocks until the last block's absolute contribution certifies a geometric
/// tail below 1e-16 relative; the error stays well under 1e-12 (1 + |result|).
inline Complex h2_inner(const StableRational& f, const StableRational& g) {
    if (f.is_polynomial() && g.is_polynomial()) {
        const ComplexPoly pf = f.num() * Complex(1.0 / f.den().coeff(0).real());
        const ComplexPoly pg = g.num() * Complex(1.0 / g.den().coeff(0).real());
        Complex acc(0.0);
        int d = std::min(pf.degree(), pg.degree());
        for (int k = 0; k <= d; ++k) acc += pf.coeff(k) * std::conj(pg.coeff(k));
        return acc;
    }
    const int block = 64;
    int target = std::max({256, f.num().degree() + f.den().degree() + 16,
                           g.num().degree() + g.den().degree() + 16});
    std::vector<Complex> cf, cg;
    Complex acc(0.0);
    int done = 0;
    constexpr int cap = 1 << 22;
    while (true) {
        f.taylor_extend(cf, target);
        g.taylor_extend(cg, target);
        double tail_probe = 0.0;
        for (int k = done; k < target; ++k) {
            acc += cf[k] * std::conj(cg[k]);
            if (k >= target - block) tail_probe += std::abs(cf[k]) * std::abs(cg[k]);
        }
        done = target;
        if (tail_probe <= 1e-16 * (1.0 + std::abs(acc))) return acc;
        if (target >= cap)
            throw Error("h2_inner: truncation cap exceeded (denominator roots too "
                        "close to the circle)");
        target = std::min(cap, 2 * target);
    }
}

/// Local Dirichlet pairing at lambda in the closed disk:
/// <(f - f(lambda))/(z - lambda), (g - g(lambda))/(z - lambda)>_{H^2}.
inline Complex local_dirichlet(const StableRational& f, const StableRational& g,
                               Complex lambda) {
    if (std::abs(lambda) > 1.0 + 1e-12)
        throw Error("local_dirichlet: base point outside the closed unit disk");
    auto quotient = [&](const StableRational& h) {
        StableRational shifted = h.sub_const(h(lambda));
        ComplexPoly qn = divide_linear_power(shifted.num(), lambda, 1);
        return StableRational(std::move(qn), shifted.den());
    };
    return h2_inner(quotient(f), quotient(g));
}

inline double local_dirichlet(const StableRational& f, Complex lambda) {
    return local_dirichlet(f, f, lambda).real();
}

/// Higher-order local Dirichlet data at lambda: the Taylor polynomial of f at
/// lambda up to order m-1, the exact quotient h = (f - T)/(z - lambda)^m, and
/// the squared H^2 norm of h.
struct HigherOrderDirichlet {
    ComplexPoly taylor_poly;
    StableRational quotient;
    double value;
};

namespace detail {

/// Taylor polynomial of f at lambda to order m-1, as a polynomial in z.
inline ComplexPoly taylor_polynomial(const StableRational& f, Complex lambda, int m) {
    ComplexPoly ns = taylor_shift(f.num(), lambda);
    ComplexPoly ds = taylor_shift(f.den(), lambda);
    // Series division to m terms; ds(0) = den(lambda) != 0 on the closed disk.
    std::vector<Complex> t(m, Complex(0.0));
    const Complex d0 = ds.coeff(0);
    for (int k = 0; k < m; ++k) {
        Complex acc = ns.coeff(k);
        for (int j = 1; j <= std::min(k, ds.degree()); ++j) acc -= ds.coeff(j) * t[k - j];
        t[k] = acc / d0;
    }
    return taylor_shift(ComplexPoly(std::move(t)), -lambda);
}

inline StableRational higher_order_quotient(const StableRational& f, Complex lambda,
                                            int m) {
    const ComplexPoly T = taylor_polynomial(f, lambda, m);
    const ComplexPoly N = f.num() - T * f.den();
    ComplexPoly hn = divide_linear_power(N, lambda, m);
    return StableRational(std::move(hn), f.den());
}

} // namespace detail

inline HigherOrderDirichlet local_dirichlet_m(const StableRational& f, Complex lambda,
                                              int m) {
    if (m < 1) throw Error("local_dirichlet_m: order must be positive");
    if (std::abs(lambda) > 1.0 + 1e-12)
        throw Error("local_dirichlet_m: base point outside the closed unit disk");
    ComplexPoly T = detail::taylor_polynomial(f, lambda, m);
    StableRational h = detail::higher_order_quotient(f, lambda, m);
    double value = h2_inner(h, h).real();
    return HigherOrderDirichlet{std::move(T), std::move(h), value};
}

/// Polarized higher-order pairing <h_f, h_g> with both quotients at the same
/// base point and order.
inline Complex local_dirichlet_m_pair(const StableRational& f, const StableRational& g,
                                      Complex lambda, int m) {
    return h2_inner(detail::higher_order_quotient(f, lambda, m),
                    detail::higher_order_quotient(g, lambda, m));
}

/// Inner product of the harmonically weighted Dirichlet space attached to an
/// atomic measure: <f, g>_{H^2} + sum_i w_i D_{lambda_i}(f, g).
inline Complex dmu_inner(const StableRational& f, const StableRational& g,
                         const AtomicMeasure& mu) {
    Complex acc = h2_inner(f, g);
    for (size_t i = 0; i < mu.size(); ++i)
        acc += mu.weights[i] * local_dirichlet(f, g, mu.atoms[i]);
    return acc;
}

inline double dmu_norm2(const StableRational& f, const AtomicMeasure& mu) {
    return dmu_inner(f, f, mu).real();
}

} // namespace dbr
