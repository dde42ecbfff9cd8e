#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "complex_poly.hpp"
#include "core.hpp"
#include "defect.hpp"
#include "hardy.hpp"
#include "rational.hpp"

// Circle distributions with polynomial Fourier generators, ordered tuples of
// them, and the weighted Dirichlet integrals they induce on polynomials. A
// tuple assigns the quadratic form sum_i D_{mu_i, i}(f); the families built
// here realize expansive higher-order isometric shifts with finite defect
// rank, and plug into the defect calculus through make_inner_product.

namespace dbr {

namespace detail {

/// b^e by binary powering, e >= 0. Exact for b in {1, -1} and stays within a
/// few ulps of the unit circle for unimodular b and moderate e.
inline Complex ipow(Complex b, long long e) {
    Complex r(1.0);
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

/// C(k, d) as a double. Each partial product is itself a binomial
/// coefficient, so the value is exact whenever it fits the mantissa.
inline double choose_real(long long k, int d) {
    double r = 1.0;
    for (int t = 1; t <= d; ++t) r = r * double(k - d + t) / double(t);
    return r;
}

/// P(k) for Newton-basis coefficients, P(k) = sum_d a[d] * C(k, d).
inline Complex newton_eval(const std::vector<Complex>& a, long long k) {
    Complex s(0.0);
    for (int d = 0; d < static_cast<int>(a.size()); ++d)
        s += a[d] * choose_real(k, d);
    return s;
}

/// Newton coefficients of the unique polynomial of degree < s.size() through
/// the samples s(0), s(1), ... at consecutive integers; pure forward
/// differences, so integer samples fit exactly.
inline std::vector<Complex> newton_fit(std::vector<Complex> s) {
    std::vector<Complex> a;
    a.reserve(s.size());
    while (!s.empty()) {
        a.push_back(s.front());
        for (std::size_t t = 0; t + 1 < s.size(); ++t) s[t] = s[t + 1] - s[t];
        s.pop_back();
    }
    return a;
}

} // namespace detail

/// One atomic term of a generator: the polynomial P, stored in the Newton
/// binomial basis P(k) = sum_d newton[d] * C(k, d), attached to a point on
/// the unit circle.
struct DistributionTerm {
    Complex atom;
    std::vector<Complex> newton;
};

/// Distribution on the unit circle described by its Fourier generator
///     mu_hat(k) = weight * [k == 0] + sum_t P_t(k) * conj(atom_t)^k, k >= 0,
/// extended by mu_hat(-k) = conj(mu_hat(k)). This covers finite combinations
/// of P(D) applied to point masses plus a Lebesgue part, where D multiplies
/// mu_hat(k) by |k|; evaluation is on demand from the generator data.
class CircleDistribution {
public:
    CircleDistribution() = default;

    static CircleDistribution lebesgue(double weight = 1.0) {
        CircleDistribution d;
        d.weight_ = weight;
        return d;
    }

    static CircleDistribution point_mass(Complex atom, Complex mass = Complex(1.0)) {
        return polynomial_term(atom, {mass});
    }

    static CircleDistribution polynomial_term(Complex atom, std::vector<Complex> newton) {
        if (std::abs(std::abs(atom) - 1.0) > 1e-9)
            throw Error("CircleDistribution: atom must lie on the unit circle");
        while (!newton.empty() && newton.back() == Complex(0.0)) newton.pop_back();
        CircleDistribution d;
        if (!newton.empty()) d.terms_.push_back({atom, std::move(newton)});
        return d;
    }

    double lebesgue_weight() const { return weight_; }
    const std::vector<DistributionTerm>& terms() const { return terms_; }
    bool is_zero() const { return weight_ == 0.0 && terms_.empty(); }

    /// Largest polynomial degree among the terms; 0 when there is none, so
    /// measures report order 0.
    int order() const {
        int o = 0;
        for (const auto& t : terms_)
            o = std::max(o, static_cast<int>(t.newton.size()) - 1);
        return o;
    }

    /// True when the generator visibly describes a nonnegative measure:
    /// constant terms with nonnegative mass and nonnegative Lebesgue weight.
    bool is_nonnegative_measure() const {
        if (weight_ < 0.0) return false;
        for (const auto& t : terms_) {
            if (t.newton.size() != 1) return false;
            Complex mass = t.newton[0];
            if (std::abs(mass.imag()) > 1e-12 * (1.0 + std::abs(mass)) || mass.real() < 0.0)
                return false;
        }
        return true;
    }

    Complex fourier(long long k) const {
        if (k < 0) return std::conj(fourier(-k));
        Complex s(k == 0 ? weight_ : 0.0);
        for (const auto& t : terms_)
            s += detail::newton_eval(t.newton, k) * detail::ipow(std::conj(t.atom), k);
        return s;
    }

    CircleDistribution& operator+=(const CircleDistribution& o) {
        weight_ += o.weight_;
        for (const auto& t : o.terms_) add_term(t);
        return *this;
    }

    friend CircleDistribution operator+(CircleDistribution a, const CircleDistribution& b) {
        a += b;
        return a;
    }

private:
    void add_term(const DistributionTerm& t) {
        for (auto& mine : terms_) {
            if (std::abs(mine.atom - t.atom) <= 1e-12) {
                if (mine.newton.size() < t.newton.size()) mine.newton.resize(t.newton.size());
                for (std::size_t d = 0; d < t.newton.size(); ++d) mine.newton[d] += t.newton[d];
                while (!mine.newton.empty() && mine.newton.back() == Complex(0.0))
                    mine.newton.pop_back();
                return;
            }
        }
        terms_.push_back(t);
    }

    double weight_ = 0.0;
    std::vector<DistributionTerm> terms_;
};

/// Ordered tuple (mu_0, ..., mu_{n-1}) whose induced quadratic form on
/// polynomials is sum_i D_{mu_i, i}(f). Entry 0 must be normalized Lebesgue
/// measure, which pins the normalization ||1||^2 = 1.
struct TupleSpec {
    std::vector<CircleDistribution> entries;

    explicit TupleSpec(std::vector<CircleDistribution> e) : entries(std::move(e)) {
        if (entries.empty()) throw Error("TupleSpec: tuple is empty");
        const CircleDistribution& m0 = entries.front();
        if (!m0.terms().empty() || std::abs(m0.lebesgue_weight() - 1.0) > 1e-12)
            throw Error("TupleSpec: entry 0 must be normalized Lebesgue measure");
    }

    int length() const { return static_cast<int>(entries.size()); }
};

/// m x m integer matrix with entries
///   M(j1, j2) = sum_{l=0}^{N-1} (-1)^(N-1-l) C(N-1,l) C(l+j1, m-1) C(l+k+j2, m-1).
/// Pairing it against the monomial vector of an atom polynomial produces the
/// order-N moment of the atom's tuple; see rank_one_tuple.
struct HMatrix {
    int N, k, m;
    std::vector<std::vector<long long>> entries;
};

inline HMatrix hmatrix(int N, int k, int m) {
    if (N < 1 || k < 0 || m < 1)
        throw Error("hmatrix: need N >= 1, k >= 0, m >= 1");
    constexpr __int128 max64 = 0x7fffffffffffffffLL;
    HMatrix h{N, k, m,
              std::vector<std::vector<long long>>(m, std::vector<long long>(m, 0))};
    for (int j1 = 0; j1 < m; ++j1) {
        for (int j2 = 0; j2 < m; ++j2) {
            __int128 s = 0;
            for (int l = 0; l < N; ++l) {
                __int128 t = static_cast<__int128>(binom_ll(N - 1, l)) *
                             binom_ll(l + j1, m - 1);
                t *= binom_ll(l + k + j2, m - 1);
                s += ((N - 1 - l) & 1) ? -t : t;
            }
            if (s > max64 || s < -max64)
                throw Error("hmatrix: entry exceeds 64-bit range");
            h.entries[j1][j2] = static_cast<long long>(s);
        }
    }
    return h;
}

/// <M x, x> = sum_{j1,j2} M(j1,j2) x_{j1} conj(x_{j2}).
inline Complex hmatrix_pair(const HMatrix& h, const std::vector<Complex>& x) {
    if (static_cast<int>(x.size()) != h.m)
        throw Error("hmatrix_pair: vector length does not match matrix size");
    Complex s(0.0);
    for (int j1 = 0; j1 < h.m; ++j1)
        for (int j2 = 0; j2 < h.m; ++j2)
            s += double(h.entries[j1][j2]) * x[j1] * std::conj(x[j2]);
    return s;
}

namespace detail {

/// Generators contributed by a single circle atom with polynomial p and
/// order m: a vector of length 2m whose slot i >= 1 holds the distribution
/// with moments <M_i(k) x, x> * conj(lambda)^k, x_j = c_j lambda^j. Each
/// moment sequence is a polynomial in k of degree <= 2m-2; it is fitted by
/// forward differences and re-verified on extra samples.
inline std::vector<CircleDistribution> atom_tuple_part(Complex lambda,
                                                       const ComplexPoly& p, int m) {
    std::vector<Complex> x(m, Complex(0.0));
    for (int j = 0; j < m; ++j) x[j] = p.coeff(j) * ipow(lambda, j);
    std::vector<CircleDistribution> out(2 * m);
    const int fit = 2 * m - 1;
    const int extra = 6;
    for (int i = 1; i <= 2 * m - 1; ++i) {
        std::vector<Complex> s(fit + extra);
        double scale = 0.0;
        for (int k = 0; k < fit + extra; ++k) {
            s[k] = hmatrix_pair(hmatrix(i, k, m), x);
            scale = std::max(scale, std::abs(s[k]));
        }
        std::vector<Complex> a =
            newton_fit(std::vector<Complex>(s.begin(), s.begin() + fit));
        const double tol = 1e-11 * (1.0 + scale);
        while (!a.empty() && std::abs(a.back()) <= tol) a.pop_back();
        for (int k = fit; k < fit + extra; ++k)
            if (std::abs(newton_eval(a, k) - s[k]) > 1e-8 * (1.0 + scale))
                throw Error("atom_tuple_part: moments failed polynomial verification");
        if (!a.empty())
            out[i] = CircleDistribution::polynomial_term(lambda, std::move(a));
    }
    return out;
}

/// The last entry of a constructed tuple must be a nonnegative measure:
/// order-0 terms with real nonnegative masses.
inline void check_leading_measure(const TupleSpec& t) {
    for (const auto& term : t.entries.back().terms()) {
        Complex mass = term.newton.size() == 1 ? term.newton[0] : Complex(0.0);
        if (term.newton.size() != 1 ||
            std::abs(mass.imag()) > 1e-9 * (1.0 + std::abs(mass)) ||
            mass.real() < -1e-9 * (1.0 + std::abs(mass)))
            throw Error("tuple: leading entry is not a nonnegative measure");
    }
}

} // namespace detail

/// Length-2m tuple generated by one atom lambda on the circle and one
/// polynomial p with deg p <= m-1, p(lambda) != 0. Slot i carries the
/// moments mu_hat_i(k) = <M_i(k) x, x> * conj(lambda)^k recognized as a
/// polynomial in k times conj(lambda)^k.
inline TupleSpec rank_one_tuple(Complex lambda, const ComplexPoly& p, int m) {
    if (m < 1) throw Error("rank_one_tuple: order must be at least 1");
    if (std::abs(std::abs(lambda) - 1.0) > 1e-9)
        throw Error("rank_one_tuple: atom must lie on the unit circle");
    if (p.degree() > m - 1)
        throw Error("rank_one_tuple: polynomial degree must be below the order");
    if (std::abs(p(lambda)) <= 1e-12 * (1.0 + p.norm1()))
        throw Error("rank_one_tuple: polynomial must not vanish at the atom");
    std::vector<CircleDistribution> e = detail::atom_tuple_part(lambda, p, m);
    e[0] = CircleDistribution::lebesgue(1.0);
    TupleSpec t(std::move(e));
    detail::check_leading_measure(t);
    return t;
}

/// One atom of a multi-atom tuple: its own order m and polynomials
/// p_1, ..., p_n with n <= m, deg p_i <= m-1, and p_1 nonvanishing at the
/// atom.
struct TupleAtom {
    Complex lambda;
    int m = 1;
    std::vector<ComplexPoly> polys;
};

/// Tuple of length 2 * max(m_j) summing the contributions of several
/// distinct atoms; each atom is expanded with its own order m_j, so atoms of
/// lower order populate only the lower slots.
inline TupleSpec multi_tuple(const std::vector<TupleAtom>& atoms) {
    if (atoms.empty()) throw Error("multi_tuple: no atoms");
    int m = 0;
    for (const TupleAtom& a : atoms) {
        if (a.m < 1) throw Error("multi_tuple: order must be at least 1");
        if (std::abs(std::abs(a.lambda) - 1.0) > 1e-9)
            throw Error("multi_tuple: atoms must lie on the unit circle");
        if (a.polys.empty() || static_cast<int>(a.polys.size()) > a.m)
            throw Error("multi_tuple: need between 1 and m polynomials per atom");
        for (const ComplexPoly& p : a.polys) {
            if (p.is_zero()) throw Error("multi_tuple: zero polynomial");
            if (p.degree() > a.m - 1)
                throw Error("multi_tuple: polynomial degree must be below the order");
        }
        if (std::abs(a.polys[0](a.lambda)) <= 1e-12 * (1.0 + a.polys[0].norm1()))
            throw Error("multi_tuple: first polynomial must not vanish at the atom");
        m = std::max(m, a.m);
    }
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            if (std::abs(atoms[i].lambda - atoms[j].lambda) <= 1e-12)
                throw Error("multi_tuple: atoms must be distinct");

    std::vector<CircleDistribution> e(2 * m);
    e[0] = CircleDistribution::lebesgue(1.0);
    for (const TupleAtom& a : atoms)
        for (const ComplexPoly& p : a.polys) {
            std::vector<CircleDistribution> part =
                detail::atom_tuple_part(a.lambda, p, a.m);
            for (std::size_t i = 1; i < part.size(); ++i) e[i] += part[i];
        }
    TupleSpec t(std::move(e));
    detail::check_leading_measure(t);
    return t;
}

namespace detail {

/// Sample value of the closed-form generator in slot i of the order-m
/// local-space tuple: C(i-1, m-1) * prod_{j=i+1-m}^{m-1} (k+j) / (2m-1-i)!,
/// exact in integers (the product runs over 2m-1-i consecutive values).
inline long long dlambda_sample(int i, int k, int m) {
    constexpr __int128 max64 = 0x7fffffffffffffffLL;
    __int128 num = 1;
    for (int j = i + 1 - m; j <= m - 1; ++j) num *= (k + j);
    __int128 fact = 1;
    for (int t = 2; t <= 2 * m - 1 - i; ++t) fact *= t;
    if (num % fact != 0)
        throw Error("dlambda_sample: nonintegral value");
    __int128 v = (num / fact) * binom_ll(i - 1, m - 1);
    if (v > max64 || v < -max64)
        throw Error("dlambda_sample: value exceeds 64-bit range");
    return static_cast<long long>(v);
}

} // namespace detail

/// Closed-form tuple of the order-m local space at a circle point: slots
/// 1..m-1 vanish, slot i for m <= i <= 2m-2 carries a polynomial of degree
/// 2m-1-i at the atom, and the last slot is the constant C(2m-2, m-1) point
/// mass. Agrees with rank_one_tuple(lambda, 1, m).
inline TupleSpec dlambda_closed_form(Complex lambda, int m) {
    if (m < 1) throw Error("dlambda_closed_form: order must be at least 1");
    if (std::abs(std::abs(lambda) - 1.0) > 1e-9)
        throw Error("dlambda_closed_form: atom must lie on the unit circle");
    std::vector<CircleDistribution> e(2 * m);
    e[0] = CircleDistribution::lebesgue(1.0);
    for (int i = m; i <= 2 * m - 2; ++i) {
        const int deg = 2 * m - 1 - i;
        std::vector<Complex> s(deg + 5);
        for (int k = 0; k < static_cast<int>(s.size()); ++k)
            s[k] = double(detail::dlambda_sample(i, k, m));
        std::vector<Complex> a =
            detail::newton_fit(std::vector<Complex>(s.begin(), s.begin() + deg + 1));
        for (int k = deg + 1; k < static_cast<int>(s.size()); ++k)
            if (detail::newton_eval(a, k) != s[k])
                throw Error("dlambda_closed_form: generator failed verification");
        e[i] = CircleDistribution::polynomial_term(lambda, std::move(a));
    }
    e[2 * m - 1] = CircleDistribution::point_mass(
        lambda, double(binom_ll(2 * m - 2, m - 1)));
    return TupleSpec(std::move(e));
}

/// Exact check of the alternating binomial identity
///   sum_{l=m-1}^{i-1} (-1)^(i-1-l) C(i-m, i-1-l) C(l+k, m-1)
///     = C(m+k-1, 2m-1-i)
/// for all 0 <= k <= k_max; requires m <= i <= 2m-1.
inline bool binomial_identity_check(int m, int i, int k_max) {
    if (m < 1 || i < m || i > 2 * m - 1)
        throw Error("binomial_identity_check: need m <= i <= 2m-1");
    for (int k = 0; k <= k_max; ++k) {
        __int128 lhs = 0;
        for (int l = m - 1; l <= i - 1; ++l) {
            __int128 t = static_cast<__int128>(binom_ll(i - m, i - 1 - l)) *
                         binom_ll(l + k, m - 1);
            lhs += ((i - 1 - l) & 1) ? -t : t;
        }
        if (lhs != static_cast<__int128>(binom_ll(m + k - 1, 2 * m - 1 - i)))
            return false;
    }
    return true;
}

/// Polarized weighted Dirichlet integral of order i. For i >= 1,
///   D_{mu,i}(f, g) = sum_{j,j' >= i} f_j conj(g_{j'}) (j)_i (j')_i
///                    mu_hat(j'-j) / (i! (M)_i),   M = max(j, j'):
/// the angular integral of |f^(i)|^2 P_mu (1-|z|^2)^(i-1) pairs coefficient
/// frequencies with the generator, and the remaining radial integral of
/// rho^(2M-2i+1) (1-rho^2)^(i-1) is a Beta value whose factorials cancel
/// into 1 / (i! (M)_i). Order 0 is the boundary L^2 limit, supported for
/// Lebesgue weights only.
inline Complex dirichlet_pair(const CircleDistribution& mu, int i,
                              const ComplexPoly& f, const ComplexPoly& g) {
    if (i < 0) throw Error("dirichlet_pair: order must be nonnegative");
    if (i == 0) {
        if (!mu.terms().empty())
            throw Error("dirichlet_pair: order 0 is supported for Lebesgue weights only");
        Complex s(0.0);
        for (int j = 0; j <= std::min(f.degree(), g.degree()); ++j)
            s += f.coeff(j) * std::conj(g.coeff(j));
        return mu.lebesgue_weight() * s;
    }
    double ifact = 1.0;
    for (int t = 2; t <= i; ++t) ifact *= t;
    Complex s(0.0);
    for (int j = i; j <= f.degree(); ++j) {
        if (f.coeff(j) == Complex(0.0)) continue;
        for (int jp = i; jp <= g.degree(); ++jp) {
            if (g.coeff(jp) == Complex(0.0)) continue;
            const int M = std::max(j, jp);
            const double w = falling_factorial(j, i) * falling_factorial(jp, i) /
                             (ifact * falling_factorial(M, i));
            s += f.coeff(j) * std::conj(g.coeff(jp)) * w * mu.fourier(jp - j);
        }
    }
    return s;
}

inline double dirichlet_integral(const CircleDistribution& mu, int i,
                                 const ComplexPoly& f) {
    const double v = dirichlet_pair(mu, i, f, f).real();
    if (mu.is_nonnegative_measure() && v < -1e-10 * (1.0 + f.norm2()))
        throw Error("dirichlet_integral: negative value for a nonnegative measure");
    return v;
}

inline Complex vecmu_inner(const TupleSpec& t, const ComplexPoly& f,
                           const ComplexPoly& g) {
    Complex s(0.0);
    for (int i = 0; i < t.length(); ++i) s += dirichlet_pair(t.entries[i], i, f, g);
    return s;
}

inline double vecmu_norm(const TupleSpec& t, const ComplexPoly& f) {
    double s = 0.0;
    for (int i = 0; i < t.length(); ++i) s += dirichlet_integral(t.entries[i], i, f);
    return s;
}

/// Both sides of the norm identity for the rank-one tuple: the tuple norm of
/// f against the Hardy norm plus the order-m local integral of p*f at the
/// atom. Agreement is the caller's assertion.
struct NormCrossCheck {
    double lhs, rhs;
};

inline NormCrossCheck norm_crosscheck(Complex lambda, const ComplexPoly& p, int m,
                                      const ComplexPoly& f) {
    TupleSpec t = rank_one_tuple(lambda, p, m);
    const double lhs = vecmu_norm(t, f);
    StableRational F = StableRational::polynomial(f);
    const double rhs = h2_inner(F, F).real() +
                       local_dirichlet_m(StableRational::polynomial(p * f), lambda, m).value;
    return {lhs, rhs};
}

/// The tuple's quadratic form packaged for the defect calculus.
inline InnerProduct make_inner_product(TupleSpec t) {
    return InnerProduct(
        [t = std::move(t)](const ComplexPoly& f, const ComplexPoly& g) {
            return vecmu_inner(t, f, g);
        },
        "tuple");
}

/// Truncation-level allowability certificate: positive semidefiniteness of
/// the monomial Gram up to degree N, and the least C with
/// ||z f||^2 <= C ||f||^2 over that truncation (a generalized eigenvalue of
/// the shifted Gram against the Gram). Says nothing beyond degree N.
struct AllowabilityCertificate {
    int truncation;
    double scale;
    double min_eigenvalue;
    double shift_bound;
    bool positive_semidefinite;
};

inline AllowabilityCertificate allowability_certificate(const TupleSpec& t, int N = 30) {
    if (N < 1) throw Error("allowability_certificate: truncation must be positive");
    std::vector<ComplexPoly> mono;
    mono.reserve(N + 2);
    for (int k = 0; k <= N + 1; ++k) mono.push_back(ComplexPoly::monomial(k));
    Eigen::MatrixXcd G(N + 1, N + 1), S(N + 1, N + 1);
    for (int a = 0; a <= N; ++a)
        for (int b = 0; b <= N; ++b) {
            G(a, b) = vecmu_inner(t, mono[b], mono[a]);
            S(a, b) = vecmu_inner(t, mono[b + 1], mono[a + 1]);
        }
    G = ((G + G.adjoint()) / 2.0).eval();
    S = ((S + S.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    if (es.info() != Eigen::Success)
        throw Error("allowability_certificate: eigensolver failed");
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(N);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    AllowabilityCertificate cert{N, scale, lo,
                                 std::numeric_limits<double>::quiet_NaN(),
                                 lo >= -1e-8 * scale};
    if (lo > 1e-12 * scale) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(S, G);
        if (ges.info() == Eigen::Success)
            cert.shift_bound = ges.eigenvalues().maxCoeff();
    }
    return cert;
}

} // namespace dbr
