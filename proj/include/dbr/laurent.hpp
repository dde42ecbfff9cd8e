#pragma once

#include <cmath>
#include <vector>

#include "dbr/complex_poly.hpp"
#include "dbr/core.hpp"
#include "dbr/root_finder.hpp"

namespace dbr {

/// Banded Laurent expression R(z) = sum_{|k| <= n} r_k z^k restricted to the
/// unit circle, with the Hermitian symmetry r_{-k} = conj(r_k). Only the
/// nonnegative half of the band is stored, so the symmetry holds exactly by
/// representation; r_0 is checked to be real.
class HermitianLaurent {
public:
    explicit HermitianLaurent(std::vector<Complex> upper) : c_(std::move(upper)) {
        if (c_.empty()) throw Error("HermitianLaurent: empty coefficient band");
        double scale = 0.0;
        for (Complex v : c_) scale = std::max(scale, std::abs(v));
        if (std::abs(c_[0].imag()) > 1e-12 * std::max(1.0, scale))
            throw Error("HermitianLaurent: r_0 is not real");
        c_[0] = Complex(c_[0].real());
        while (c_.size() > 1 && c_.back() == Complex(0.0)) c_.pop_back();
    }

    int band() const { return static_cast<int>(c_.size()) - 1; }

    Complex coeff(int k) const {
        int a = std::abs(k);
        if (a >= static_cast<int>(c_.size())) return Complex(0.0);
        return k >= 0 ? c_[a] : std::conj(c_[a]);
    }

    /// Value at a point of the unit circle; real by symmetry.
    double eval(Complex z_on_circle) const {
        Complex acc(c_[0]);
        Complex zk(1.0);
        for (size_t k = 1; k < c_.size(); ++k) {
            zk *= z_on_circle;
            acc += c_[k] * zk + std::conj(c_[k] * zk);
        }
        return acc.real();
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (Complex v : c_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::vector<Complex> c_;
};

namespace detail {

/// Band of |z - lambda|^2 on the circle: (1 + |lambda|^2) - conj(lambda) z - lambda z^{-1}.
inline std::vector<Complex> modulus_factor(Complex lambda) {
    return {Complex(1.0 + std::norm(lambda)), -std::conj(lambda)};
}

/// Convolution of two Hermitian bands given by their upper halves. Works on
/// the full band internally and folds back.
inline std::vector<Complex> band_mul(const std::vector<Complex>& a,
                                     const std::vector<Complex>& b) {
    int na = static_cast<int>(a.size()) - 1, nb = static_cast<int>(b.size()) - 1;
    auto full = [](const std::vector<Complex>& u) {
        int n = static_cast<int>(u.size()) - 1;
        std::vector<Complex> f(2 * n + 1);
        for (int k = -n; k <= n; ++k)
            f[k + n] = (k >= 0) ? u[k] : std::conj(u[-k]);
        return f;
    };
    std::vector<Complex> fa = full(a), fb = full(b);
    std::vector<Complex> fc(fa.size() + fb.size() - 1, Complex(0.0));
    for (size_t i = 0; i < fa.size(); ++i)
        for (size_t j = 0; j < fb.size(); ++j) fc[i + j] += fa[i] * fb[j];
    int nc = na + nb;
    std::vector<Complex> upper(nc + 1);
    for (int k = 0; k <= nc; ++k) upper[k] = fc[k + nc];
    return upper;
}

/// One Newton-type refinement sweep for the spectral factor: with
/// e = R/|q|^2 - 1 small on the circle, the causal half-projection delta
/// (half of the constant term plus the positive-frequency part) satisfies
/// e ~ delta + conj(delta), and q (1 + delta) halves the defect quadratically.
inline ComplexPoly wilson_refine(const ComplexPoly& q, const HermitianLaurent& R,
                                 int sweeps) {
    ComplexPoly cur = q;
    const int n = q.degree();
    if (n < 1) return cur;
    const int N = 1024;
    std::vector<Complex> zs(N), ev(N);
    for (int g = 0; g < N; ++g) zs[g] = std::polar(1.0, 2.0 * pi * g / N);
    for (int s = 0; s < sweeps; ++s) {
        for (int g = 0; g < N; ++g)
            ev[g] = Complex(R.eval(zs[g]) / std::norm(cur(zs[g])) - 1.0);
        std::vector<Complex> delta(n + 1, Complex(0.0));
        for (int g = 0; g < N; ++g) {
            Complex zpow(1.0);
            for (int k = 0; k <= n; ++k) {
                delta[k] += ev[g] * std::conj(zpow);
                zpow *= zs[g];
            }
        }
        for (auto& d : delta) d /= double(N);
        delta[0] /= 2.0;
        ComplexPoly next = cur + cur * ComplexPoly(std::move(delta));
        // Refinement never raises the degree; drop the small overflow terms.
        std::vector<Complex> truncated(next.coeffs().begin(),
                                       next.coeffs().begin() +
                                           std::min<size_t>(next.coeffs().size(), n + 1));
        cur = ComplexPoly(std::move(truncated));
    }
    return cur;
}

} // namespace detail

/// Boundary modulus band
///   R(z) = prod_i |z - lambda_i|^2 + sum_i w_i prod_{j != i} |z - lambda_j|^2
/// on the unit circle, for atoms lambda_i in the closed disk with weights w_i > 0.
inline HermitianLaurent laurent_modulus_product(const std::vector<Complex>& atoms,
                                                const std::vector<double>& weights) {
    if (atoms.size() != weights.size())
        throw Error("laurent_modulus_product: atom/weight count mismatch");
    if (atoms.empty()) throw Error("laurent_modulus_product: no atoms");
    const size_t n = atoms.size();
    std::vector<Complex> acc = {Complex(1.0)};
    for (Complex a : atoms) acc = detail::band_mul(acc, detail::modulus_factor(a));
    for (size_t i = 0; i < n; ++i) {
        if (!(weights[i] > 0.0))
            throw Error("laurent_modulus_product: weights must be positive");
        std::vector<Complex> part = {Complex(weights[i])};
        for (size_t j = 0; j < n; ++j)
            if (j != i) part = detail::band_mul(part, detail::modulus_factor(atoms[j]));
        if (part.size() > acc.size()) acc.resize(part.size(), Complex(0.0));
        for (size_t k = 0; k < part.size(); ++k) acc[k] += part[k];
    }
    return HermitianLaurent(std::move(acc));
}

struct FejerRieszOptions {
    int grid = 256;           // residual check points on the circle
    double residual_tol = 1e-10;  // relative to max |R|
    double circle_margin = 1e-8;  // forbidden zone for roots around |z| = 1
};

/// Spectral factor q of a strictly positive band: |q(z)|^2 = R(z) on the
/// circle, q zero-free on the closed disk, q(0) real and positive. Roots of
/// z^band * R pair as (zeta, 1/conj(zeta)); the outer ones build q and the
/// scale is fixed by the leading band coefficient.
inline ComplexPoly fejer_riesz(const HermitianLaurent& R,
                               const FejerRieszOptions& opt = {}) {
    const double rmax = [&] {
        double m = 0.0;
        for (int g = 0; g < opt.grid; ++g)
            m = std::max(m, std::abs(R.eval(std::polar(1.0, 2.0 * pi * g / opt.grid))));
        return m;
    }();
    for (int g = 0; g < opt.grid; ++g) {
        double v = R.eval(std::polar(1.0, 2.0 * pi * g / opt.grid));
        if (!(v > 1e-12 * rmax))
            throw Error("fejer_riesz: band is not strictly positive on the circle");
    }

    const int n = R.band();
    ComplexPoly q;
    if (n == 0) {
        q = ComplexPoly{Complex(std::sqrt(R.coeff(0).real()))};
    } else {
        // L(z) = z^n R(z), a polynomial of degree 2n with L(0) != 0.
        std::vector<Complex> lc(2 * n + 1);
        for (int k = -n; k <= n; ++k) lc[k + n] = R.coeff(k);
        ComplexPoly L(std::move(lc));
        RootSet rs = poly_roots(L, 1e-9);
        std::vector<Complex> outer;
        for (Complex z : rs.roots) {
            double m = std::abs(z);
            if (std::abs(m - 1.0) <= opt.circle_margin)
                throw Error("fejer_riesz: root on the unit circle; factorization degenerate");
            if (m > 1.0) outer.push_back(z);
        }
        if (static_cast<int>(outer.size()) != n)
            throw Error("fejer_riesz: root pairing failed (" +
                        std::to_string(outer.size()) + " outer roots, expected " +
                        std::to_string(n) + ")");
        double prod_mod = 1.0;
        for (Complex z : outer) prod_mod *= std::abs(z);
        const double gamma_mod = std::sqrt(std::abs(R.coeff(n)) / prod_mod);
        ComplexPoly monic = ComplexPoly::from_roots(outer);
        Complex at0 = monic(Complex(0.0));
        q = std::polar(gamma_mod, -std::arg(at0)) * monic;

        // Clustered root pairs limit the direct construction to ~1e-11
        // relative accuracy; a few Newton sweeps restore machine precision.
        ComplexPoly refined = detail::wilson_refine(q, R, 4);
        bool safe = true;
        try {
            for (Complex zr : poly_roots(refined, 1e-8).roots)
                if (!(std::abs(zr) > 1.0)) safe = false;
        } catch (const Error&) {
            safe = false;
        }
        if (safe) q = refined;

        // Phase chosen so q(0) > 0; the constant coefficient is forced
        // exactly real after the rotation.
        std::vector<Complex> qc((std::polar(1.0, -std::arg(q(Complex(0.0)))) * q).coeffs());
        qc[0] = Complex(qc[0].real());
        q = ComplexPoly(std::move(qc));
    }

    // Certify |q|^2 = R on a grid.
    double worst = 0.0;
    for (int g = 0; g < opt.grid; ++g) {
        Complex z = std::polar(1.0, 2.0 * pi * g / opt.grid);
        worst = std::max(worst, std::abs(std::norm(q(z)) - R.eval(z)));
    }
    if (worst > opt.residual_tol * rmax)
        throw Error("fejer_riesz: residual " + std::to_string(worst) +
                    " exceeds tolerance");
    return q;
}

} // namespace dbr
