#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dbr/complex_poly.hpp"
#include "dbr/core.hpp"

namespace dbr {

/// All roots of a polynomial, ordered by (modulus, argument in [0, 2pi)),
/// together with the certified residual
///   max_i |p(z_i)| / (|lead| * max(1, |z_i|)^deg).
struct RootSet {
    std::vector<Complex> roots;
    double residual = 0.0;
};

namespace detail {

inline double root_residual(const ComplexPoly& p, const std::vector<Complex>& roots) {
    const double lead = std::abs(p.coeff(p.degree()));
    double worst = 0.0;
    for (Complex r : roots) {
        double denom = lead * std::pow(std::max(1.0, std::abs(r)), p.degree());
        worst = std::max(worst, std::abs(p(r)) / denom);
    }
    return worst;
}

inline void sort_roots(std::vector<Complex>& roots) {
    auto arg2pi = [](Complex z) {
        double a = std::arg(z);
        if (a < 0.0) a += 2.0 * pi;
        return a;
    };
    std::sort(roots.begin(), roots.end(), [&](Complex a, Complex b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return arg2pi(a) < arg2pi(b);
    });
}

inline std::vector<Complex> companion_roots(const ComplexPoly& p) {
    const int d = p.degree();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    const Complex lead = p.coeff(d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = Complex(1.0);
    for (int i = 0; i < d; ++i) C(i, d - 1) = -p.coeff(i) / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success)
        throw Error("poly_roots: companion eigenvalue iteration failed");
    std::vector<Complex> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

// A few Newton steps per root, keeping the iterate with the smallest |p|.
// Drives simple roots down to the evaluation-noise floor; never regresses.
inline void newton_polish(const ComplexPoly& p, std::vector<Complex>& x, int rounds = 4) {
    const ComplexPoly dp = p.derivative();
    for (Complex& r : x) {
        Complex best = r;
        double best_abs = std::abs(p(r));
        Complex cur = r;
        for (int it = 0; it < rounds; ++it) {
            Complex dv = dp(cur);
            if (dv == Complex(0.0)) break;
            cur -= p(cur) / dv;
            double a = std::abs(p(cur));
            if (a < best_abs) {
                best_abs = a;
                best = cur;
            }
        }
        r = best;
    }
}

inline bool aberth(const ComplexPoly& p, std::vector<Complex>& x, int max_iter) {
    const int d = p.degree();
    const ComplexPoly dp = p.derivative();
    const double lead = std::abs(p.coeff(d));
    for (int it = 0; it < max_iter; ++it) {
        double worst_step = 0.0;
        for (int i = 0; i < d; ++i) {
            Complex pv = p(x[i]);
            double sc = lead * std::pow(std::max(1.0, std::abs(x[i])), d);
            if (std::abs(pv) <= 1e-15 * sc) continue;
            Complex ratio = pv / dp(x[i]);
            Complex sum(0.0);
            for (int j = 0; j < d; ++j)
                if (j != i) sum += Complex(1.0) / (x[i] - x[j]);
            Complex denom = Complex(1.0) - ratio * sum;
            Complex step = (std::abs(denom) < 1e-300) ? ratio : ratio / denom;
            x[i] -= step;
            worst_step = std::max(worst_step, std::abs(step) / std::max(1.0, std::abs(x[i])));
        }
        if (worst_step < 1e-15) return true;
    }
    return false;
}

} // namespace detail

/// Roots by Aberth-Ehrlich simultaneous iteration with a companion-matrix
/// fallback. Roots at the origin are split off exactly first. Throws Error
/// if the certified residual stays above `tol` on both paths.
inline RootSet poly_roots(const ComplexPoly& p, double tol = 1e-10, int max_iter = 200) {
    if (p.degree() < 1) throw Error("poly_roots: degree must be at least 1");

    // Factor out exact roots at zero.
    size_t nz = 0;
    while (p.coeff(static_cast<int>(nz)) == Complex(0.0)) ++nz;
    std::vector<Complex> reduced(p.coeffs().begin() + nz, p.coeffs().end());
    ComplexPoly q(std::move(reduced));

    std::vector<Complex> roots(nz, Complex(0.0));
    if (q.degree() >= 1) {
        const int d = q.degree();
        // Initial guesses on a circle sized by the coefficient magnitudes.
        double r = 0.0;
        const Complex lead = q.coeff(d);
        for (int j = 0; j < d; ++j)
            r = std::max(r, 2.0 * std::pow(std::abs(q.coeff(j) / lead), 1.0 / double(d - j)));
        if (r == 0.0) r = 1.0;
        std::vector<Complex> x(d);
        for (int i = 0; i < d; ++i)
            x[i] = std::polar(r, 2.0 * pi * double(i) / double(d) + 0.4);

        bool ok = detail::aberth(q, x, max_iter);
        detail::newton_polish(q, x);
        if (!ok || detail::root_residual(q, x) > tol) {
            std::vector<Complex> y = detail::companion_roots(q);
            detail::newton_polish(q, y);
            if (detail::root_residual(q, y) < detail::root_residual(q, x)) x = std::move(y);
        }
        roots.insert(roots.end(), x.begin(), x.end());
    }

    detail::sort_roots(roots);
    double res = detail::root_residual(p, roots);
    if (res > tol) {
        std::ostringstream os;
        os << "poly_roots: certified residual " << std::scientific << res
           << " exceeds tolerance " << tol << " (degree " << p.degree() << ")";
        throw Error(os.str());
    }
    return RootSet{std::move(roots), res};
}

} // namespace dbr
