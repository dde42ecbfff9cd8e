#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dbr/tuples.hpp"

using dbr::CircleDistribution;
using dbr::Complex;
using dbr::ComplexPoly;
using dbr::InnerProduct;
using dbr::StableRational;
using dbr::TupleAtom;
using dbr::TupleSpec;

namespace {

std::mt19937_64 rng_for(uint64_t salt) { return std::mt19937_64(0x7a61e5 ^ salt); }

ComplexPoly rand_poly(std::mt19937_64& g, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    int d = deg(g);
    std::vector<Complex> c(d + 1);
    for (Complex& v : c) v = Complex(box(g), box(g));
    c[d] += Complex(2.0);
    return ComplexPoly(std::move(c));
}

Complex rand_unimodular(std::mt19937_64& g) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * dbr::pi);
    return std::polar(1.0, ang(g));
}

Complex rand_root_of_unity(std::mt19937_64& g) {
    std::uniform_int_distribution<int> ord(1, 12);
    int n = ord(g);
    std::uniform_int_distribution<int> num(0, n - 1);
    return std::polar(1.0, 2.0 * dbr::pi * num(g) / n);
}

/// Atom polynomial of degree <= m-1 kept away from vanishing at lambda.
ComplexPoly rand_atom_poly(std::mt19937_64& g, Complex lambda, int m) {
    for (;;) {
        ComplexPoly p = rand_poly(g, m - 1);
        if (std::abs(p(lambda)) > 0.2) return p;
    }
}

// ---------------------------------------------------------------------------
// Oracle 1: moments from Taylor-coefficient pairings.
//
// For the norm ||f||^2_{H^2} + D_lambda^m(p f), one shift step raises the
// order-m local integral by the top Taylor coefficient of the input:
// writing u - T_{m-1}(u) = (z-lambda)^m h_u one gets h_{zu} = z h_u + a(u)
// with a(u) = u^{(m-1)}(lambda)/(m-1)!, so the one-step defect pairs as
// a(u) conj(a(v)). Expanding the order-i defect through the alternating
// binomial recursion gives the moment sequence
//   mu_hat_i(k) = sum_{l=0}^{i-1} (-1)^(i-1-l) C(i-1,l) A_l conj(A_{l+k}),
//   A_t = (z^t p)^{(m-1)}(lambda) / (m-1)!.
// Derived by hand; computed here from polynomial derivatives only, with no
// binomial-kernel code shared with the implementation under test.
// ---------------------------------------------------------------------------
Complex moment_oracle(Complex lambda, const ComplexPoly& p, int m, int i, int k) {
    auto top_taylor = [&](int t) {
        ComplexPoly q = p;
        for (int s = 0; s < t; ++s) q = q.shift_up();
        for (int s = 0; s < m - 1; ++s) q = q.derivative();
        double fact = 1.0;
        for (int s = 2; s <= m - 1; ++s) fact *= s;
        return q(lambda) / fact;
    };
    Complex acc(0.0);
    for (int l = 0; l < i; ++l) {
        Complex term = double(dbr::binom_ll(i - 1, l)) * top_taylor(l) *
                       std::conj(top_taylor(l + k));
        acc += ((i - 1 - l) & 1) ? -term : term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Oracle 2: quadrature for the weighted Dirichlet integrals. Two layers:
//
//  * closed_cut(mu, i, f, r): the angular integral of |f^(i)|^2 P_mu is done
//    exactly by frequency pairing (orthogonality of e^{ik theta}); the
//    remaining radial integral of rho^(2max-2i+1)(1-rho^2)^(i-1) over [0, r]
//    is a polynomial, integrated exactly by Gauss-Legendre. At r = 1 this is
//    the full limit value with no Beta-function identity involved.
//
//  * area_quadrature(mu, i, f, r): fully numerical polar quadrature over the
//    disk of radius r, evaluating the Poisson-type extension of mu through
//    the rational generating function sum_k C(k,d) w^k = w^d/(1-w)^(d+1).
//    The trapezoid rule in theta is spectrally accurate; with 65536 nodes the
//    aliased frequencies carry a factor rho^65536 ~ 1e-14 even at rho = 0.999
//    against polynomial growth ~1e9 of the generator, so aliasing is far
//    below the comparison tolerances. Restricted to real generator
//    coefficients (every physically meaningful instance).
// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> legendre_rule(int n) {
    std::vector<std::pair<double, double>> rule(n);
    for (int k = 0; k < n; ++k) {
        double x = std::cos(dbr::pi * (k + 0.75) / (n + 0.5));
        double dp = 1.0;
        auto eval = [&](double t) {
            double pm = 0.0, p = 1.0;
            for (int j = 1; j <= n; ++j) {
                double pn = ((2.0 * j - 1.0) * t * p - (j - 1.0) * pm) / j;
                pm = p;
                p = pn;
            }
            dp = n * (t * p - pm) / (t * t - 1.0);
            return p;
        };
        for (int it = 0; it < 100; ++it) {
            double step = eval(x) / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        eval(x);
        rule[k] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return rule;
}

/// integral_0^r rho^(2a+1) (1-rho^2)^(i-1) d rho, exactly (polynomial).
double radial_cut(int a, int i, double r) {
    static const auto rule = legendre_rule(32);
    double acc = 0.0;
    for (auto [x, w] : rule) {
        double rho = r * (x + 1.0) / 2.0;
        acc += w * (r / 2.0) * std::pow(rho, 2 * a + 1) *
               std::pow(1.0 - rho * rho, i - 1);
    }
    return acc;
}

double closed_cut(const CircleDistribution& mu, int i, const ComplexPoly& f,
                  double r) {
    REQUIRE(i >= 1);
    double ifact = 1.0, im1fact = 1.0;
    for (int t = 2; t <= i; ++t) ifact *= t;
    for (int t = 2; t <= i - 1; ++t) im1fact *= t;
    Complex acc(0.0);
    for (int j = i; j <= f.degree(); ++j)
        for (int jp = i; jp <= f.degree(); ++jp) {
            int mx = std::max(j, jp);
            acc += f.coeff(j) * std::conj(f.coeff(jp)) *
                   dbr::falling_factorial(j, i) * dbr::falling_factorial(jp, i) *
                   mu.fourier(jp - j) * radial_cut(mx - i, i, r);
        }
    return 2.0 * acc.real() / (ifact * im1fact);
}

/// Pointwise Poisson-type extension of the generator at z, |z| < 1.
double poisson_extension(const CircleDistribution& mu, Complex z) {
    Complex acc(mu.lebesgue_weight());
    for (const auto& term : mu.terms()) {
        Complex w = std::conj(term.atom) * z;
        Complex q(0.0);
        Complex wd(1.0);
        Complex om = Complex(1.0) - w;
        Complex omp = om;
        for (std::size_t d = 0; d < term.newton.size(); ++d) {
            q += term.newton[d] * wd / omp;
            wd *= w;
            omp *= om;
        }
        acc += q + std::conj(q) - term.newton[0];
    }
    REQUIRE(std::abs(acc.imag()) < 1e-9 * (1.0 + std::abs(acc.real())));
    return acc.real();
}

double area_quadrature(const CircleDistribution& mu, int i, const ComplexPoly& f,
                       double r, int angular) {
    static const auto rule = legendre_rule(20);
    ComplexPoly fi = f;
    for (int t = 0; t < i; ++t) fi = fi.derivative();
    double ifact = 1.0, im1fact = 1.0;
    for (int t = 2; t <= i; ++t) ifact *= t;
    for (int t = 2; t <= i - 1; ++t) im1fact *= t;
    double total = 0.0;
    for (auto [x, w] : rule) {
        double rho = r * (x + 1.0) / 2.0;
        double ang = 0.0;
        for (int a = 0; a < angular; ++a) {
            Complex z = std::polar(rho, 2.0 * dbr::pi * a / angular);
            ang += std::norm(fi(z)) * poisson_extension(mu, z);
        }
        ang *= 2.0 * dbr::pi / angular;
        total += w * (r / 2.0) * ang * std::pow(1.0 - rho * rho, i - 1) * rho;
    }
    return total / (dbr::pi * ifact * im1fact);
}

/// Random generator: Lebesgue part plus up to two polynomial terms with real
/// coefficients.
CircleDistribution rand_distribution(std::mt19937_64& g, bool nonneg_coeffs) {
    std::uniform_real_distribution<double> unit(0.0, 1.0), box(-1.0, 1.0);
    std::uniform_int_distribution<int> count(1, 2), degree(0, 2);
    CircleDistribution mu = CircleDistribution::lebesgue(unit(g));
    int nt = count(g);
    for (int t = 0; t < nt; ++t) {
        int d = degree(g);
        std::vector<Complex> coeffs(d + 1);
        for (Complex& c : coeffs) c = Complex(nonneg_coeffs ? unit(g) : box(g), 0.0);
        coeffs[d] += Complex(nonneg_coeffs ? 0.3 : 0.0);
        if (std::abs(coeffs[d]) < 0.3) coeffs[d] = Complex(0.5, 0.0);
        mu += CircleDistribution::polynomial_term(rand_unimodular(g), coeffs);
    }
    return mu;
}

} // namespace

TEST_CASE("binomial moment matrices match hand values") {
    // m = 1: the 1x1 matrix is the (N-1)-th difference of the constant 1.
    CHECK(dbr::hmatrix(1, 0, 1).entries[0][0] == 1);
    CHECK(dbr::hmatrix(1, 7, 1).entries[0][0] == 1);
    CHECK(dbr::hmatrix(2, 3, 1).entries[0][0] == 0);
    CHECK(dbr::hmatrix(5, 0, 1).entries[0][0] == 0);

    // m = 2, N = 1: single term l = 0, entries C(j1,1) * C(k+j2,1).
    auto h0 = dbr::hmatrix(1, 0, 2);
    CHECK(h0.entries[0][0] == 0);
    CHECK(h0.entries[0][1] == 0);
    CHECK(h0.entries[1][0] == 0);
    CHECK(h0.entries[1][1] == 1);
    auto h3 = dbr::hmatrix(1, 3, 2);
    CHECK(h3.entries[1][0] == 3);
    CHECK(h3.entries[1][1] == 4);
    CHECK(h3.entries[0][0] == 0);

    CHECK_THROWS_AS(dbr::hmatrix(0, 0, 2), dbr::Error);
    CHECK_THROWS_AS(dbr::hmatrix(1, -1, 2), dbr::Error);
    CHECK_THROWS_AS(dbr::hmatrix(1, 0, 0), dbr::Error);

    // The pairing convention: <M x, x> = sum M(j1,j2) x_{j1} conj(x_{j2}).
    std::vector<Complex> x = {Complex(0.0), Complex(1.0, 1.0)};
    Complex v = dbr::hmatrix_pair(h3, x);
    CHECK(std::abs(v - Complex(4.0 * 2.0)) < 1e-14);
}

TEST_CASE("rank-one moments agree with the Taylor-pairing oracle") {
    auto g = rng_for(1);
    for (int t = 0; t < 16; ++t) {
        Complex lambda = (t % 2 == 0) ? rand_root_of_unity(g) : rand_unimodular(g);
        int m = 1 + t % 4;
        ComplexPoly p = rand_atom_poly(g, lambda, m);
        TupleSpec tup = dbr::rank_one_tuple(lambda, p, m);
        REQUIRE(tup.length() == 2 * m);
        for (int i = 1; i <= 2 * m - 1; ++i)
            for (int k = 0; k <= 12; ++k) {
                Complex want = moment_oracle(lambda, p, m, i, k);
                Complex got = tup.entries[i].fourier(k);
                INFO("m=" << m << " i=" << i << " k=" << k);
                CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
            }
    }
}

TEST_CASE("rank-one tuple fixtures") {
    SECTION("m = 1 gives Lebesgue plus a unit point mass") {
        Complex lambda = std::polar(1.0, 0.31);
        TupleSpec t = dbr::rank_one_tuple(lambda, ComplexPoly::one(), 1);
        REQUIRE(t.length() == 2);
        CHECK(t.entries[0].lebesgue_weight() == 1.0);
        CHECK(t.entries[0].terms().empty());
        REQUIRE(t.entries[1].terms().size() == 1);
        CHECK(t.entries[1].order() == 0);
        CHECK(t.entries[1].terms()[0].newton[0] == Complex(1.0));
        CHECK(std::abs(t.entries[1].fourier(5) - std::pow(std::conj(lambda), 5.0)) <
              1e-12);
    }

    SECTION("m = 2, p = z at the atom 1: moments k+1, k+3, 2") {
        ComplexPoly p{Complex(0.0), Complex(1.0)};
        TupleSpec t = dbr::rank_one_tuple(Complex(1.0), p, 2);
        REQUIRE(t.length() == 4);
        for (int k = 0; k <= 40; ++k) {
            CHECK(t.entries[1].fourier(k) == Complex(double(k + 1)));
            CHECK(t.entries[2].fourier(k) == Complex(double(k + 3)));
            CHECK(t.entries[3].fourier(k) == Complex(2.0));
        }
    }

    SECTION("m = 2, p = 1 at the atom 1: moments 0, k+1, 2") {
        TupleSpec t = dbr::rank_one_tuple(Complex(1.0), ComplexPoly::one(), 2);
        CHECK(t.entries[1].is_zero());
        for (int k = 0; k <= 40; ++k) {
            CHECK(t.entries[2].fourier(k) == Complex(double(k + 1)));
            CHECK(t.entries[3].fourier(k) == Complex(2.0));
        }
    }

    SECTION("leading entry is the constant point mass C(2m-2, m-1) |p(atom)|^2") {
        auto g = rng_for(2);
        for (int t = 0; t < 10; ++t) {
            Complex lambda = rand_unimodular(g);
            int m = 1 + t % 4;
            ComplexPoly p = rand_atom_poly(g, lambda, m);
            TupleSpec tup = dbr::rank_one_tuple(lambda, p, m);
            const CircleDistribution& lead = tup.entries[2 * m - 1];
            REQUIRE(lead.terms().size() == 1);
            CHECK(lead.order() == 0);
            double want =
                double(dbr::binom_ll(2 * m - 2, m - 1)) * std::norm(p(lambda));
            CHECK(std::abs(lead.terms()[0].newton[0] - Complex(want)) <=
                  1e-10 * (1.0 + want));
        }
    }
}

TEST_CASE("rank-one tuple rejects bad input") {
    ComplexPoly z{Complex(0.0), Complex(1.0)};
    CHECK_THROWS_AS(dbr::rank_one_tuple(Complex(1.0), ComplexPoly::one(), 0),
                    dbr::Error);
    CHECK_THROWS_AS(dbr::rank_one_tuple(Complex(0.5), ComplexPoly::one(), 1),
                    dbr::Error);
    CHECK_THROWS_AS(dbr::rank_one_tuple(Complex(1.0), z, 1), dbr::Error);
    // p(atom) = 0
    ComplexPoly vanish{Complex(-1.0), Complex(1.0)};
    CHECK_THROWS_AS(dbr::rank_one_tuple(Complex(1.0), vanish, 2), dbr::Error);
}

TEST_CASE("closed-form tuple matches the rank-one construction exactly") {
    for (Complex lambda : {Complex(1.0), std::polar(1.0, 2.0 * dbr::pi * 3.0 / 7.0)}) {
        for (int m = 1; m <= 4; ++m) {
            TupleSpec closed = dbr::dlambda_closed_form(lambda, m);
            TupleSpec direct = dbr::rank_one_tuple(lambda, ComplexPoly::one(), m);
            REQUIRE(closed.length() == 2 * m);
            REQUIRE(direct.length() == 2 * m);
            for (int i = 1; i <= 2 * m - 1; ++i) {
                CHECK(closed.entries[i].is_zero() == direct.entries[i].is_zero());
                for (int k = 0; k <= 40; ++k)
                    CHECK(closed.entries[i].fourier(k) == direct.entries[i].fourier(k));
            }
            // lower slots vanish, upper slots have the stated polynomial order
            for (int i = 1; i < m; ++i) CHECK(closed.entries[i].is_zero());
            for (int i = m; i <= 2 * m - 1; ++i)
                CHECK(closed.entries[i].order() == 2 * m - 1 - i);
        }
    }

    SECTION("m = 2 fixture at the atom 1") {
        TupleSpec t = dbr::dlambda_closed_form(Complex(1.0), 2);
        CHECK(t.entries[1].is_zero());
        for (int k = 0; k <= 10; ++k) {
            CHECK(t.entries[2].fourier(k) == Complex(double(k + 1)));
            CHECK(t.entries[3].fourier(k) == Complex(2.0));
        }
    }
}

TEST_CASE("alternating binomial identity holds exactly") {
    CHECK_THROWS_AS(dbr::binomial_identity_check(3, 2, 10), dbr::Error);
    CHECK_THROWS_AS(dbr::binomial_identity_check(2, 4, 10), dbr::Error);
    for (int m = 1; m <= 8; ++m)
        for (int i = m; i <= 2 * m - 1; ++i) {
            INFO("m=" << m << " i=" << i);
            CHECK(dbr::binomial_identity_check(m, i, 60));
        }
}

TEST_CASE("multi-atom tuples") {
    SECTION("a single atom reduces to the rank-one tuple") {
        auto g = rng_for(3);
        Complex lambda = rand_unimodular(g);
        ComplexPoly p = rand_atom_poly(g, lambda, 2);
        TupleSpec a = dbr::multi_tuple({TupleAtom{lambda, 2, {p}}});
        TupleSpec b = dbr::rank_one_tuple(lambda, p, 2);
        REQUIRE(a.length() == b.length());
        for (int i = 1; i < a.length(); ++i)
            for (int k = 0; k <= 12; ++k)
                CHECK(a.entries[i].fourier(k) == b.entries[i].fourier(k));
    }

    SECTION("mixed orders populate only their own slots") {
        // one plain atom at 1, one order-2 atom at -1
        TupleSpec t = dbr::multi_tuple({TupleAtom{Complex(1.0), 1, {ComplexPoly::one()}},
                                        TupleAtom{Complex(-1.0), 2, {ComplexPoly::one()}}});
        REQUIRE(t.length() == 4);
        for (int k = 0; k <= 20; ++k) {
            double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(t.entries[1].fourier(k) == Complex(1.0));
            CHECK(t.entries[2].fourier(k) == Complex(sgn * double(k + 1)));
            CHECK(t.entries[3].fourier(k) == Complex(sgn * 2.0));
        }
    }

    SECTION("two plain atoms add their point masses") {
        auto g = rng_for(4);
        Complex l1 = rand_unimodular(g), l2 = rand_unimodular(g);
        TupleSpec t = dbr::multi_tuple({TupleAtom{l1, 1, {ComplexPoly::one()}},
                                        TupleAtom{l2, 1, {ComplexPoly::one()}}});
        REQUIRE(t.length() == 2);
        for (int k = 0; k <= 20; ++k) {
            Complex want = dbr::detail::ipow(std::conj(l1), k) +
                           dbr::detail::ipow(std::conj(l2), k);
            CHECK(std::abs(t.entries[1].fourier(k) - want) < 1e-12);
        }
    }

    SECTION("preconditions") {
        ComplexPoly one = ComplexPoly::one();
        ComplexPoly z{Complex(0.0), Complex(1.0)};
        CHECK_THROWS_AS(dbr::multi_tuple({}), dbr::Error);
        CHECK_THROWS_AS(dbr::multi_tuple({TupleAtom{Complex(1.0), 1, {one}},
                                          TupleAtom{Complex(1.0), 2, {one}}}),
                        dbr::Error);
        CHECK_THROWS_AS(dbr::multi_tuple({TupleAtom{Complex(1.0), 1, {z}}}),
                        dbr::Error);
        CHECK_THROWS_AS(dbr::multi_tuple({TupleAtom{Complex(1.0), 1, {one, one}}}),
                        dbr::Error);
        ComplexPoly vanish{Complex(-1.0), Complex(1.0)};
        CHECK_THROWS_AS(dbr::multi_tuple({TupleAtom{Complex(1.0), 2, {vanish}}}),
                        dbr::Error);
        // a vanishing polynomial is fine past the first slot
        CHECK_NOTHROW(dbr::multi_tuple({TupleAtom{Complex(1.0), 2, {one, vanish}}}));
    }
}

TEST_CASE("generator symmetry conventions") {
    auto g = rng_for(5);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    for (int t = 0; t < 8; ++t) {
        Complex lambda = (t % 2 == 0) ? rand_root_of_unity(g) : rand_unimodular(g);
        int m = 1 + t % 3;
        ComplexPoly p = rand_atom_poly(g, lambda, m);
        TupleSpec tup = dbr::rank_one_tuple(lambda, p, m);
        for (int i = 1; i < tup.length(); ++i) {
            // negative indices are the hermitian reflection of positive ones,
            // and the zeroth moment is real (it is an alternating-binomial
            // combination of squared Taylor magnitudes)
            for (int k = 1; k <= 50; ++k)
                CHECK(tup.entries[i].fourier(-k) ==
                      std::conj(tup.entries[i].fourier(k)));
            Complex zero = tup.entries[i].fourier(0);
            CHECK(std::abs(zero.imag()) <= 1e-12 * (1.0 + std::abs(zero)));
        }
    }

    // at a real atom, real polynomial data keeps every generator real
    for (int t = 0; t < 6; ++t) {
        Complex lambda((t % 2 == 0) ? 1.0 : -1.0);
        int m = 1 + t % 3;
        std::vector<Complex> c(m);
        for (Complex& v : c) v = Complex(box(g), 0.0);
        c[m - 1] += Complex(2.0);
        ComplexPoly p(std::move(c));
        if (std::abs(p(lambda)) < 0.2) {
            --t;
            continue;
        }
        TupleSpec tup = dbr::rank_one_tuple(lambda, p, m);
        for (int i = 1; i < tup.length(); ++i)
            for (const auto& term : tup.entries[i].terms())
                for (Complex a : term.newton)
                    CHECK(std::abs(a.imag()) <= 1e-11 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("Dirichlet integrals validate against quadrature") {
    auto g = rng_for(6);
    std::uniform_int_distribution<int> fdeg(2, 6);

    // The derived closed form enters only after this battery passes: the
    // exact-angular oracle pins the limit value, and the polar quadrature at
    // r = 0.999 checks the full integrand with both sides truncated alike.
    for (int t = 0; t < 20; ++t) {
        CircleDistribution mu = rand_distribution(g, false);
        int i = 1 + t % 4;
        ComplexPoly f = rand_poly(g, fdeg(g));
        if (f.degree() < i) f = f * ComplexPoly::monomial(i);

        double closed = dbr::dirichlet_integral(mu, i, f);
        double limit = closed_cut(mu, i, f, 1.0);
        INFO("i=" << i << " closed=" << closed << " limit=" << limit);
        CHECK(std::abs(closed - limit) <=
              1e-7 * (1.0 + std::abs(closed) + std::abs(limit)));

        double cut = closed_cut(mu, i, f, 0.999);
        double quad = area_quadrature(mu, i, f, 0.999, 65536);
        INFO("cut=" << cut << " quad=" << quad);
        CHECK(std::abs(cut - quad) <= 1e-5 * (1.0 + std::abs(cut) + std::abs(quad)));
    }

    // With nothing cancelling, the radius-0.999 quadrature is also within
    // 1e-4 of the limit value itself once the boundary weight (1-rho^2)^(i-1)
    // suppresses the missing annulus (i >= 2, moderate degrees).
    for (int t = 0; t < 6; ++t) {
        CircleDistribution mu = rand_distribution(g, true);
        int i = 2 + t % 2;
        ComplexPoly f = rand_poly(g, 5);
        if (f.degree() < i) f = f * ComplexPoly::monomial(i);
        double closed = dbr::dirichlet_integral(mu, i, f);
        double quad = area_quadrature(mu, i, f, 0.999, 65536);
        INFO("i=" << i << " closed=" << closed << " quad=" << quad);
        CHECK(std::abs(closed - quad) <=
              1e-4 * (1.0 + std::abs(closed) + std::abs(quad)));
    }
}

TEST_CASE("Dirichlet integral fixtures and edge cases") {
    ComplexPoly z3 = ComplexPoly::monomial(3);

    SECTION("order 0 is the Hardy norm of the Lebesgue part") {
        CHECK(dbr::dirichlet_integral(CircleDistribution::lebesgue(1.0), 0, z3) == 1.0);
        CHECK_THROWS_AS(
            dbr::dirichlet_integral(CircleDistribution::point_mass(Complex(1.0)), 0, z3),
            dbr::Error);
        CHECK_THROWS_AS(
            dbr::dirichlet_integral(CircleDistribution::lebesgue(1.0), -1, z3),
            dbr::Error);
    }

    SECTION("order 1 against the classical Dirichlet integral and the local one") {
        auto g = rng_for(7);
        for (int t = 0; t < 10; ++t) {
            ComplexPoly f = rand_poly(g, 8);
            // Lebesgue weight: sum_j j |f_j|^2
            double classic = 0.0;
            for (int j = 1; j <= f.degree(); ++j)
                classic += j * std::norm(f.coeff(j));
            CHECK(std::abs(dbr::dirichlet_integral(CircleDistribution::lebesgue(1.0), 1,
                                                   f) -
                           classic) <= 1e-12 * (1.0 + classic));

            // unit point mass: the local integral at its atom
            Complex lambda = rand_unimodular(g);
            double local = dbr::local_dirichlet(StableRational::polynomial(f), lambda);
            double closed = dbr::dirichlet_integral(
                CircleDistribution::point_mass(lambda), 1, f);
            CHECK(std::abs(closed - local) <= 1e-10 * (1.0 + local));
        }
    }

    SECTION("hand value: first-order distribution, second-order integral") {
        // generator P(k) = k + 1 at the atom 1, f = z^2: the closed form
        // reduces to (1/2!) * (2)_2 * (2)_2 * mu_hat(0) * B(1,2) = 1
        CircleDistribution mu =
            CircleDistribution::polynomial_term(Complex(1.0), {Complex(1.0), Complex(1.0)});
        double v = dbr::dirichlet_integral(mu, 2, ComplexPoly::monomial(2));
        CHECK(std::abs(v - 1.0) < 1e-13);
    }

    SECTION("pair form is hermitian") {
        auto g = rng_for(8);
        CircleDistribution mu = rand_distribution(g, false);
        ComplexPoly f = rand_poly(g, 6), h = rand_poly(g, 6);
        for (int i = 1; i <= 3; ++i) {
            Complex a = dbr::dirichlet_pair(mu, i, f, h);
            Complex b = dbr::dirichlet_pair(mu, i, h, f);
            CHECK(std::abs(a - std::conj(b)) <= 1e-11 * (1.0 + std::abs(a)));
        }
    }

    SECTION("nonnegative measures give nonnegative values") {
        auto g = rng_for(9);
        std::uniform_real_distribution<double> mass(0.0, 2.0);
        for (int t = 0; t < 8; ++t) {
            CircleDistribution mu = CircleDistribution::lebesgue(mass(g));
            int atoms = 1 + int(t % 3);
            for (int a = 0; a < atoms; ++a)
                mu += CircleDistribution::point_mass(rand_unimodular(g), mass(g));
            ComplexPoly f = rand_poly(g, 7);
            for (int i = 1; i <= 3; ++i)
                CHECK(dbr::dirichlet_integral(mu, i, f) >= -1e-10);
        }
    }
}

TEST_CASE("tuple norms cross-check the Hardy-side norms") {
    auto g = rng_for(10);

    SECTION("normalization") {
        ComplexPoly one = ComplexPoly::one();
        CHECK(dbr::vecmu_norm(dbr::rank_one_tuple(Complex(1.0),
                                                  ComplexPoly{Complex(0.0), Complex(1.0)}, 2),
                              one) == 1.0);
        CHECK(dbr::vecmu_norm(dbr::dlambda_closed_form(std::polar(1.0, 1.1), 3), one) ==
              1.0);
    }

    SECTION("plain tuple equals the atomic-measure space norm") {
        for (int t = 0; t < 8; ++t) {
            Complex lambda = rand_unimodular(g);
            TupleSpec tup = dbr::rank_one_tuple(lambda, ComplexPoly::one(), 1);
            dbr::AtomicMeasure mu({lambda}, {1.0});
            ComplexPoly f = rand_poly(g, 8);
            StableRational F = StableRational::polynomial(f);
            double want = dbr::dmu_norm2(F, mu);
            double got = dbr::vecmu_norm(tup, f);
            CHECK(std::abs(got - want) <= 1e-10 * (1.0 + want));
        }
    }

    SECTION("closed-form tuple realizes the order-2 local space norm") {
        TupleSpec tup = dbr::dlambda_closed_form(Complex(1.0), 2);
        for (int t = 0; t < 10; ++t) {
            ComplexPoly f = rand_poly(g, 8);
            StableRational F = StableRational::polynomial(f);
            double want = dbr::h2_inner(F, F).real() +
                          dbr::local_dirichlet_m(F, Complex(1.0), 2).value;
            double got = dbr::vecmu_norm(tup, f);
            CHECK(std::abs(got - want) <= 1e-9 * (1.0 + want));
        }
    }

    SECTION("norm cross-check fixture") {
        ComplexPoly f{Complex(1.0), Complex(1.0), Complex(1.0)};
        auto r = dbr::norm_crosscheck(Complex(1.0), ComplexPoly{Complex(0.0), Complex(1.0)},
                                      2, f);
        CHECK(std::abs(r.lhs - r.rhs) <= 1e-8 * (1.0 + std::abs(r.lhs)));
        auto r1 = dbr::norm_crosscheck(Complex(1.0), ComplexPoly{Complex(0.0), Complex(1.0)},
                                       2, ComplexPoly::one());
        CHECK(std::abs(r1.lhs - 1.0) < 1e-12);
        CHECK(std::abs(r1.rhs - 1.0) < 1e-12);
    }

    SECTION("norm cross-check on random instances") {
        for (int t = 0; t < 20; ++t) {
            Complex lambda = rand_root_of_unity(g);
            int m = 1 + t % 3;
            ComplexPoly p = rand_atom_poly(g, lambda, m);
            ComplexPoly f = rand_poly(g, 10);
            auto r = dbr::norm_crosscheck(lambda, p, m, f);
            INFO("m=" << m << " lhs=" << r.lhs << " rhs=" << r.rhs);
            CHECK(std::abs(r.lhs - r.rhs) <=
                  1e-7 * (1.0 + std::abs(r.lhs) + std::abs(r.rhs)));
        }
    }
}

TEST_CASE("tuples feed the defect calculus") {
    SECTION("the inner product reproduces its own generators") {
        auto g = rng_for(11);
        ComplexPoly one = ComplexPoly::one();
        std::vector<TupleSpec> tuples;
        tuples.push_back(
            dbr::rank_one_tuple(Complex(1.0), ComplexPoly{Complex(0.0), Complex(1.0)}, 2));
        Complex lambda = std::polar(1.0, 2.0 * dbr::pi / 5.0);
        tuples.push_back(dbr::rank_one_tuple(lambda, rand_atom_poly(g, lambda, 3), 3));
        for (const TupleSpec& t : tuples) {
            InnerProduct ip = dbr::make_inner_product(t);
            CHECK(ip.origin() == "tuple");
            for (int i = 1; i < t.length(); ++i)
                for (int k = 0; k <= 6; ++k) {
                    Complex want = t.entries[i].fourier(k);
                    Complex got =
                        dbr::defect_form(ip, i, one, ComplexPoly::monomial(k));
                    CHECK(std::abs(got - want) <= 1e-9 * (1.0 + std::abs(want)));
                }
            // beyond the tuple length the defects vanish
            for (int i = t.length(); i <= t.length() + 1; ++i)
                for (int k = 0; k <= 4; ++k)
                    CHECK(std::abs(dbr::defect_form(ip, i, one,
                                                    ComplexPoly::monomial(k))) <= 1e-8);
        }
    }

    SECTION("mixed-order two-atom space: defect form, annihilation, classification") {
        TupleSpec t = dbr::multi_tuple({TupleAtom{Complex(1.0), 1, {ComplexPoly::one()}},
                                        TupleAtom{Complex(-1.0), 2, {ComplexPoly::one()}}});
        InnerProduct ip = dbr::make_inner_product(t);
        auto g = rng_for(12);
        for (int s = 0; s < 12; ++s) {
            ComplexPoly f = rand_poly(g, 7);
            Complex d = dbr::defect_form(ip, 1, f, f);
            double want = std::norm(f(Complex(1.0))) +
                          std::norm(f.derivative()(Complex(-1.0)));
            CHECK(std::abs(d - Complex(want)) <= 1e-10 * (1.0 + want));
        }
        // minimal annihilating polynomial (z-1)(z+1)^2
        ComplexPoly zm1{Complex(-1.0), Complex(1.0)};
        ComplexPoly zp1{Complex(1.0), Complex(1.0)};
        CHECK(dbr::annihilation_check(ip, zm1 * zp1 * zp1, 12) <= 1e-10);
        CHECK(dbr::annihilation_check(ip, zm1 * zp1, 12) > 0.1);

        dbr::Classification cls = dbr::classify(ip, 14);
        CHECK(cls.expansive);
        CHECK(cls.isometry_order == 4);
        CHECK(cls.defect_rank == 2);
        CHECK(cls.defects[4].zero);
        CHECK_FALSE(cls.defects[3].zero);
        CHECK_FALSE(cls.dirichlet_type);
    }

    SECTION("rank-one tuple matches the order-2 local space head-on") {
        ComplexPoly z{Complex(0.0), Complex(1.0)};
        TupleSpec t = dbr::rank_one_tuple(Complex(1.0), z, 2);
        InnerProduct direct = InnerProduct::local_order(Complex(1.0), 2, z);
        for (int a = 0; a <= 10; ++a)
            for (int b = 0; b <= 10; ++b) {
                Complex lhs = dbr::vecmu_inner(t, ComplexPoly::monomial(a),
                                               ComplexPoly::monomial(b));
                Complex rhs = direct(ComplexPoly::monomial(a), ComplexPoly::monomial(b));
                CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
            }
        dbr::Classification cls = dbr::classify(dbr::make_inner_product(t), 16);
        CHECK(cls.isometry_order == 4);
        CHECK(cls.expansive);
        CHECK(cls.defect_rank == 1);
    }

    SECTION("allowability certificates") {
        ComplexPoly z{Complex(0.0), Complex(1.0)};
        auto cert = dbr::allowability_certificate(
            dbr::rank_one_tuple(Complex(1.0), z, 2), 12);
        CHECK(cert.positive_semidefinite);
        CHECK(std::isfinite(cert.shift_bound));
        CHECK(cert.shift_bound >= 1.0 - 1e-9);

        // a tuple whose defect has no finite-rank limit: the truncated rank
        // grows with the degree
        TupleSpec slow(std::vector<CircleDistribution>{
            CircleDistribution::lebesgue(1.0), CircleDistribution(),
            CircleDistribution(), CircleDistribution::point_mass(Complex(1.0))});
        auto cert2 = dbr::allowability_certificate(slow, 12);
        CHECK(cert2.positive_semidefinite);
        CHECK(std::isfinite(cert2.shift_bound));
        InnerProduct ip = dbr::make_inner_product(slow);
        int r6 = dbr::classify(ip, 6).defect_rank;
        int r10 = dbr::classify(ip, 10).defect_rank;
        int r14 = dbr::classify(ip, 14).defect_rank;
        CHECK(r6 < r10);
        CHECK(r10 < r14);
    }
}

TEST_CASE("tuple validation") {
    CHECK_THROWS_AS(TupleSpec(std::vector<CircleDistribution>{}), dbr::Error);
    CHECK_THROWS_AS(TupleSpec(std::vector<CircleDistribution>{
                        CircleDistribution::point_mass(Complex(1.0))}),
                    dbr::Error);
    CHECK_THROWS_AS(TupleSpec(std::vector<CircleDistribution>{
                        CircleDistribution::lebesgue(2.0)}),
                    dbr::Error);
    CHECK_NOTHROW(TupleSpec(std::vector<CircleDistribution>{
        CircleDistribution::lebesgue(1.0)}));
    CHECK_THROWS_AS(dbr::dlambda_closed_form(Complex(0.5), 2), dbr::Error);
    CHECK_THROWS_AS(dbr::allowability_certificate(
                        dbr::dlambda_closed_form(Complex(1.0), 1), 0),
                    dbr::Error);
}
