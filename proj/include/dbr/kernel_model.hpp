#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dbr/complex_poly.hpp"
#include "dbr/core.hpp"
#include "dbr/hardy.hpp"
#include "dbr/laurent.hpp"
#include "dbr/rational.hpp"

namespace dbr {

/// Complete computational model of the weighted Dirichlet space attached to
/// a finitely atomic measure: spectral data, dual basis at the atoms,
/// reproducing kernels, and the Schur-class numerators of the isometric
/// embedding into a finite-rank de Branges-Rovnyak space.
struct KernelModel {
    AtomicMeasure measure;
    ComplexPoly q;          // |q|^2 = prod|z-l_i|^2 + sum w_i prod_{j!=i}|z-l_j|^2 on the circle
    double fejer_residual = 0.0;
    ComplexPoly atom_poly;  // prod (z - lambda_i)
    StableRational phi;     // atom_poly / q, the isometric multiplier
    StableRational mate;    // prod (1 - conj(lambda_i) z) / q, positive at 0
    std::vector<StableRational> dual_basis;   // f_i with f_i(lambda_j) = delta_ij
    Eigen::MatrixXcd gram;                    // gram(i, j) = <f_j, f_i>
    double gram_condition = 0.0;
    bool gram_ill_conditioned = false;
    std::vector<StableRational> atom_kernels; // K_{lambda_i}
    Eigen::MatrixXcd psd;                     // M: 1-(1-z conj(w))K = <M X(z), X(w)> / (q(z) conj(q(w)))
    double psd_min_eig = 0.0;
    int psd_rank = 0;
    std::vector<ComplexPoly> schur_numerators; // p_i, B = (p_1/q, ..., p_r/q)
};

namespace detail {

/// Rank-revealing Cholesky of a Hermitian PSD matrix by greedy diagonal
/// pivoting: M ~ P^H P. The factorization keeps every pivot above an
/// eps-level noise floor so the reconstruction stays accurate even when the
/// matrix scale dwarfs the smallest circle values of q; the numerical rank
/// is the number of pivots above rank_tol * trace.
struct PivotedCholesky {
    Eigen::MatrixXcd P;
    int rank = 0;
};

inline PivotedCholesky pivoted_cholesky(Eigen::MatrixXcd A, double rank_tol) {
    const int n = static_cast<int>(A.rows());
    const double trace = std::max(1e-300, A.real().trace());
    const double noise_floor = 1e-18 * trace;
    const double rank_floor = rank_tol * trace;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
    int rows = 0, rank = 0;
    for (int k = 0; k < n; ++k) {
        int piv = 0;
        double best = -1.0;
        for (int a = 0; a < n; ++a)
            if (A(a, a).real() > best) { best = A(a, a).real(); piv = a; }
        if (best <= noise_floor) break;
        if (best > rank_floor) ++rank;
        const double s = std::sqrt(best);
        P.row(k) = A.row(piv) / s;
        A -= P.row(k).adjoint() * P.row(k);
        ++rows;
    }
    return {P.topRows(rows), rank};
}

} // namespace detail

/// The Schur-class numerators of the model: the rows of the rank-revealing
/// Cholesky factor of the PSD coefficient matrix, read as polynomials in
/// z^1..z^n. Fills psd, psd_min_eig, psd_rank, schur_numerators.
inline void schur_extract(KernelModel& m) {
    const int n = static_cast<int>(m.measure.size());

    // Bivariate coefficient array F[a][b] of
    //   q(z) conj(q)(w~) - (1 - z w~) sum_i u_i(z) conj(v_i)(w~) - A(z) conj(A)(w~)
    // where w~ tracks conj(w), u_i / v_i are the dual-basis / atom-kernel
    // numerators and A is the atom polynomial. Row and column 0 must vanish,
    // and the rest is the matrix M.
    std::vector<std::vector<Complex>> F(n + 2, std::vector<Complex>(n + 2, Complex(0.0)));
    for (int a = 0; a <= m.q.degree(); ++a)
        for (int b = 0; b <= m.q.degree(); ++b)
            F[a][b] += m.q.coeff(a) * std::conj(m.q.coeff(b));
    for (int i = 0; i < n; ++i) {
        const ComplexPoly& u = m.dual_basis[i].num();
        const ComplexPoly& v = m.atom_kernels[i].num();
        for (int a = 0; a <= u.degree(); ++a)
            for (int b = 0; b <= v.degree(); ++b) {
                const Complex t = u.coeff(a) * std::conj(v.coeff(b));
                F[a][b] -= t;
                F[a + 1][b + 1] += t;
            }
    }
    for (int a = 0; a <= m.atom_poly.degree(); ++a)
        for (int b = 0; b <= m.atom_poly.degree(); ++b)
            F[a][b] -= m.atom_poly.coeff(a) * std::conj(m.atom_poly.coeff(b));

    double fmax = 0.0;
    for (const auto& row : F)
        for (Complex v : row) fmax = std::max(fmax, std::abs(v));
    for (int a = 0; a < n + 2; ++a) {
        if (std::abs(F[a][0]) > 1e-10 * fmax || std::abs(F[0][a]) > 1e-10 * fmax)
            throw Error("schur_extract: coefficient matching failed on border terms");
        if (a > n && a < n + 2)
            for (int b = 0; b < n + 2; ++b)
                if (std::abs(F[a][b]) > 1e-10 * fmax || std::abs(F[b][a]) > 1e-10 * fmax)
                    throw Error("schur_extract: unexpected degree overflow");
    }

    Eigen::MatrixXcd M(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) M(r, c) = F[c + 1][r + 1];
    M = ((M + M.adjoint()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    const double mnorm = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
    m.psd_min_eig = es.eigenvalues().minCoeff();
    if (m.psd_min_eig < -1e-8 * mnorm)
        throw Error("schur_extract: coefficient matrix has a negative eigenvalue");

    auto [P, rank] = detail::pivoted_cholesky(M, 1e-10);
    if ((M - P.adjoint() * P).norm() > 1e-8 * std::max(1.0, M.norm()))
        throw Error("schur_extract: Cholesky reconstruction residual too large");
    m.psd = M;
    m.psd_rank = rank;
    m.schur_numerators.clear();
    for (int i = 0; i < P.rows(); ++i) {
        std::vector<Complex> c(static_cast<size_t>(n) + 1, Complex(0.0));
        for (int j = 0; j < n; ++j) c[j + 1] = P(i, j);
        m.schur_numerators.emplace_back(std::move(c));
    }
}

/// Builds the full model for an atomic measure. Throws Error when any stage
/// fails its numerical contract (factorization residual, Gram positivity,
/// PSD coefficient matching).
inline KernelModel build_model(const AtomicMeasure& mu) {
    const int n = static_cast<int>(mu.size());
    HermitianLaurent R = laurent_modulus_product(mu.atoms, mu.weights);
    ComplexPoly q = fejer_riesz(R);

    bool zero_atom = false;
    for (Complex a : mu.atoms)
        if (a == Complex(0.0)) zero_atom = true;
    if (q.degree() != n - (zero_atom ? 1 : 0))
        throw Error("build_model: spectral factor degree mismatch");

    double fejer_res = 0.0;
    for (int g = 0; g < 256; ++g) {
        Complex z = std::polar(1.0, 2.0 * pi * g / 256.0);
        fejer_res = std::max(fejer_res, std::abs(std::norm(q(z)) - R.eval(z)));
    }

    ComplexPoly atom_poly = ComplexPoly::from_roots(mu.atoms);
    std::vector<Complex> reflected(mu.atoms.size());
    for (size_t i = 0; i < mu.atoms.size(); ++i) reflected[i] = std::conj(mu.atoms[i]);
    ComplexPoly mate_num = ComplexPoly::one();
    for (Complex lc : reflected) mate_num = mate_num * ComplexPoly{1.0, -lc};

    KernelModel m{mu,
                  q,
                  fejer_res,
                  atom_poly,
                  StableRational(atom_poly, q),
                  StableRational(mate_num, q),
                  {},
                  {},
                  0.0,
                  false,
                  {},
                  {},
                  0.0,
                  0,
                  {}};

    for (int i = 0; i < n; ++i) {
        Complex d = q(mu.atoms[i]);
        std::vector<Complex> others;
        for (int j = 0; j < n; ++j)
            if (j != i) {
                others.push_back(mu.atoms[j]);
                d /= (mu.atoms[i] - mu.atoms[j]);
            }
        m.dual_basis.emplace_back(d * ComplexPoly::from_roots(others), q);
    }

    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = dmu_inner(m.dual_basis[j], m.dual_basis[i], mu);
    G = ((G + G.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(G, Eigen::EigenvaluesOnly);
    const double gmin = ges.eigenvalues().minCoeff();
    const double gmax = ges.eigenvalues().maxCoeff();
    if (!(gmin > 1e-14 * std::max(1.0, gmax)))
        throw Error("build_model: dual-basis Gram is not positive definite");
    m.gram = G;
    m.gram_condition = gmax / gmin;
    m.gram_ill_conditioned = m.gram_condition > 1e8;

    // Atom-kernel numerators solve u_j = sum_i G(i, j) v_i coefficient-wise,
    // i.e. V = U G^{-1} with columns indexed by atoms.
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) U(a, j) = m.dual_basis[j].num().coeff(a);
    Eigen::MatrixXcd V = G.transpose().partialPivLu().solve(U.transpose()).transpose();
    for (int i = 0; i < n; ++i) {
        std::vector<Complex> vc(n);
        for (int a = 0; a < n; ++a) vc[a] = V(a, i);
        m.atom_kernels.emplace_back(ComplexPoly(std::move(vc)), q);
    }

    schur_extract(m);
    return m;
}

/// Kernel value K_w(z) = sum_i f_i(z) conj(K_{lambda_i}(w)) + phi(z) conj(phi(w)) / (1 - z conj(w)).
inline Complex kernel_eval(const KernelModel& m, Complex z, Complex w) {
    const Complex cross = Complex(1.0) - z * std::conj(w);
    if (std::abs(cross) < 1e-14)
        throw Error("kernel_eval: evaluation on the singular diagonal");
    Complex acc(0.0);
    for (size_t i = 0; i < m.dual_basis.size(); ++i)
        acc += m.dual_basis[i](z) * std::conj(m.atom_kernels[i](w));
    return acc + m.phi(z) * std::conj(m.phi(w)) / cross;
}

/// K_w as a rational function of z, for interior w.
inline StableRational kernel_slice(const KernelModel& m, Complex w) {
    if (std::abs(w) >= 1.0 - 1e-9)
        throw Error("kernel_slice: base point must be interior");
    const ComplexPoly cross{1.0, -std::conj(w)};
    ComplexPoly num;
    for (size_t i = 0; i < m.dual_basis.size(); ++i)
        num = num + std::conj(m.atom_kernels[i](w)) * (m.dual_basis[i].num() * cross);
    num = num + std::conj(m.phi(w)) * m.atom_poly;
    return StableRational(num, m.q * cross);
}

/// Residual report for a built model; all fields are maxima of absolute
/// deviations unless stated otherwise.
struct ModelReport {
    double reproducing_at_atoms = 0.0;  // |<f_j, K_i> - delta_ij|
    double reproducing_random = 0.0;    // |<f, K_w> - f(w)| on random polynomials
    double kernel_self = 0.0;           // |<K_w, K_v> - K_w(v)|
    double hermitian = 0.0;             // |K(z,w) - conj(K(w,z))|
    double diag_min = 0.0;              // min K(z,z) on a disk grid (should be >= 1)
    double point_psd_min_eig = 0.0;     // min eigenvalue of a sampled kernel matrix
    double projection_span = 0.0;       // remainder of numerator division by the atom polynomial
    double mate_identity = 0.0;         // | |a|^2 + sum |p_i/q|^2 - 1 | on the circle
    double schur_bound_excess = 0.0;    // max(0, ||B|| - 1) on a disk grid
    double schur_kernel_match = 0.0;    // |1 - (1-z conj(w))K - <B(z), B(w)>|
    double fejer_residual = 0.0;
    double gram_condition = 0.0;
    int psd_rank = 0;
};

inline ModelReport verify_model(const KernelModel& m, int trials = 24,
                                uint64_t seed = 0x6b65726e) {
    ModelReport rep;
    rep.fejer_residual = m.fejer_residual;
    rep.gram_condition = m.gram_condition;
    rep.psd_rank = m.psd_rank;
    const int n = static_cast<int>(m.measure.size());

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Complex ip = dmu_inner(m.dual_basis[j], m.atom_kernels[i], m.measure);
            Complex want = (i == j) ? Complex(1.0) : Complex(0.0);
            rep.reproducing_at_atoms = std::max(rep.reproducing_at_atoms, std::abs(ip - want));
        }

    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), ang(0.0, 2.0 * pi),
        rad(0.0, 0.9);
    auto rand_interior = [&] { return std::polar(rad(g), ang(g)); };
    for (int t = 0; t < trials; ++t) {
        std::vector<Complex> c(1 + t % 9);
        for (auto& v : c) v = Complex(u(g), u(g));
        StableRational f = StableRational::polynomial(ComplexPoly(std::move(c)));
        Complex w = rand_interior();
        StableRational kw = kernel_slice(m, w);
        rep.reproducing_random =
            std::max(rep.reproducing_random,
                     std::abs(dmu_inner(f, kw, m.measure) - f(w)));
        Complex v = rand_interior();
        StableRational kv = kernel_slice(m, v);
        rep.kernel_self = std::max(
            rep.kernel_self,
            std::abs(dmu_inner(kw, kv, m.measure) - kernel_eval(m, v, w)));
    }

    rep.diag_min = 1e300;
    std::vector<Complex> grid;
    for (int r = 1; r <= 4; ++r)
        for (int a = 0; a < 8; ++a)
            grid.push_back(std::polar(0.22 * r, 2.0 * pi * (a + 0.3) / 8.0));
    for (Complex z : grid) {
        for (Complex w : grid) {
            if (std::abs(Complex(1.0) - z * std::conj(w)) < 1e-12) continue;
            rep.hermitian = std::max(
                rep.hermitian,
                std::abs(kernel_eval(m, z, w) - std::conj(kernel_eval(m, w, z))));
        }
        rep.diag_min = std::min(rep.diag_min, kernel_eval(m, z, z).real());
    }

    const int sample = 8;
    Eigen::MatrixXcd B(sample, sample);
    std::vector<Complex> pts(sample);
    for (int i = 0; i < sample; ++i) pts[i] = rand_interior();
    for (int i = 0; i < sample; ++i)
        for (int j = 0; j < sample; ++j) B(i, j) = kernel_eval(m, pts[i], pts[j]);
    B = ((B + B.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> bes(B, Eigen::EigenvaluesOnly);
    rep.point_psd_min_eig = bes.eigenvalues().minCoeff();

    for (int t = 0; t < trials; ++t) {
        Complex w = rand_interior();
        StableRational kw = kernel_slice(m, w);
        const ComplexPoly cross{1.0, -std::conj(w)};
        ComplexPoly rem = kw.num();
        for (size_t i = 0; i < m.dual_basis.size(); ++i)
            rem = rem - std::conj(m.atom_kernels[i](w)) *
                            (m.dual_basis[i].num() * cross);
        // What is left of the numerator must be divisible by the atom polynomial.
        ComplexPoly r = rem;
        double worst = 0.0;
        for (Complex a : m.measure.atoms) {
            Complex rv;
            r = synthetic_divide(r, a, &rv);
            worst = std::max(worst, std::abs(rv));
        }
        rep.projection_span =
            std::max(rep.projection_span, worst / std::max(1.0, kw.num().norm2()));
    }

    auto schur_pair = [&](Complex z, Complex w) {
        Complex acc(0.0);
        for (const ComplexPoly& p : m.schur_numerators)
            acc += p(z) * std::conj(p(w));
        return acc / (m.q(z) * std::conj(m.q(w)));
    };
    for (int gpt = 0; gpt < 128; ++gpt) {
        Complex zeta = std::polar(1.0, 2.0 * pi * gpt / 128.0);
        double v = std::norm(m.mate(zeta)) + schur_pair(zeta, zeta).real();
        rep.mate_identity = std::max(rep.mate_identity, std::abs(v - 1.0));
    }
    for (Complex z : grid) {
        double b2 = schur_pair(z, z).real();
        rep.schur_bound_excess = std::max(rep.schur_bound_excess, b2 - 1.0);
        for (Complex w : grid) {
            if (std::abs(Complex(1.0) - z * std::conj(w)) < 1e-12) continue;
            Complex lhs = Complex(1.0) -
                          (Complex(1.0) - z * std::conj(w)) * kernel_eval(m, z, w);
            rep.schur_kernel_match =
                std::max(rep.schur_kernel_match, std::abs(lhs - schur_pair(z, w)));
        }
    }
    rep.schur_bound_excess = std::max(rep.schur_bound_excess, 0.0);
    return rep;
}

} // namespace dbr
