#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dbr/complex_poly.hpp"
#include "dbr/core.hpp"
#include "dbr/hardy.hpp"

namespace dbr {

/// Sesquilinear pairing on polynomials together with a tag describing where
/// it came from. The defect calculus below is written against this contract
/// only, so any space with computable polynomial inner products plugs in.
class InnerProduct {
  public:
    using Pairing = std::function<Complex(const ComplexPoly&, const ComplexPoly&)>;

    InnerProduct(Pairing pairing, std::string origin)
        : pairing_(std::move(pairing)), origin_(std::move(origin)) {
        if (!pairing_) throw Error("InnerProduct: empty pairing");
    }

    Complex operator()(const ComplexPoly& f, const ComplexPoly& g) const {
        return pairing_(f, g);
    }

    const std::string& origin() const { return origin_; }

    /// Unweighted Hardy space pairing.
    static InnerProduct h2() {
        return InnerProduct([](const ComplexPoly& f, const ComplexPoly& g) {
            return h2_inner(StableRational::polynomial(f), StableRational::polynomial(g));
        }, "hardy");
    }

    /// norm^2 = H^2 norm^2 + sum of weighted local Dirichlet integrals.
    static InnerProduct from_measure(AtomicMeasure mu) {
        return InnerProduct([mu = std::move(mu)](const ComplexPoly& f, const ComplexPoly& g) {
            return dmu_inner(StableRational::polynomial(f), StableRational::polynomial(g), mu);
        }, "atomic measure");
    }

    /// norm^2 = H^2 norm^2 + order-m local Dirichlet integral of p*f at
    /// lambda. Realizes the de Branges-Rovnyak norms carried by higher order
    /// local Dirichlet spaces.
    static InnerProduct local_order(Complex lambda, int m, ComplexPoly p) {
        if (m < 1) throw Error("InnerProduct::local_order: order must be >= 1");
        if (p.degree() < 0) throw Error("InnerProduct::local_order: zero multiplier");
        return InnerProduct([lambda, m, p = std::move(p)](const ComplexPoly& f,
                                                          const ComplexPoly& g) {
            Complex base = h2_inner(StableRational::polynomial(f), StableRational::polynomial(g));
            return base + local_dirichlet_m_pair(StableRational::polynomial(p * f),
                                                 StableRational::polynomial(p * g), lambda, m);
        }, "higher-order local");
    }

    /// Pairing (f, g) -> this(z f, z g); one step of the shift telescope.
    InnerProduct shifted() const {
        Pairing base = pairing_;
        ComplexPoly z = ComplexPoly::monomial(1);
        return InnerProduct([base, z](const ComplexPoly& f, const ComplexPoly& g) {
            return base(z * f, z * g);
        }, origin_ + " (shifted)");
    }

  private:
    Pairing pairing_;
    std::string origin_;
};

/// <Delta^(n) p, r> expanded as the exact binomial sum
///   sum_{j=0}^{n} (-1)^(n-j) C(n,j) <z^j p, z^j r>.
/// No operator truncation enters; the only error is the pairing's own.
inline Complex defect_form(const InnerProduct& ip, int n, const ComplexPoly& p,
                           const ComplexPoly& r) {
    if (n < 0) throw Error("defect_form: order must be >= 0");
    Complex acc(0.0);
    ComplexPoly zp = p, zr = r;
    for (int j = 0; j <= n; ++j) {
        double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * static_cast<double>(binom_ll(n, j)) * ip(zp, zr);
        if (j < n) {
            zp = zp.shift_up();
            zr = zr.shift_up();
        }
    }
    return acc;
}

/// Both sides of the alternating-defect identity for atomic measures:
///   lhs = sum_{j=0}^{n} (-1)^j C(n,j) ||z^j p||^2
///   rhs = -sum_i w_i (1-|l_i|^2)^(n-1) |p(l_i)|^2,
/// i.e. <(-1)^n Delta^(n) p, p> against its closed form. Boundary atoms drop
/// out of the rhs for n >= 2, which is what makes boundary-only measures
/// 2-isometric.
struct DefectIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline DefectIdentity atomic_defect_identity(const AtomicMeasure& mu, int n,
                                             const ComplexPoly& p) {
    if (n < 2) throw Error("atomic_defect_identity: order must be >= 2");
    DefectIdentity out;
    ComplexPoly zp = p;
    for (int j = 0; j <= n; ++j) {
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        out.lhs += sign * static_cast<double>(binom_ll(n, j)) *
                   dmu_norm2(StableRational::polynomial(zp), mu);
        if (j < n) zp = zp.shift_up();
    }
    for (size_t i = 0; i < mu.size(); ++i) {
        double gap = 1.0 - std::norm(mu.atoms[i]);
        out.rhs -= mu.weights[i] * std::pow(gap, n - 1) * std::norm(p(mu.atoms[i]));
    }
    return out;
}

/// One truncated defect operator: the (N+1)x(N+1) matrix of
/// <Delta^(n) z^j, z^i> on monomials, its spectrum, and the flags derived
/// from it. All flags speak about polynomials of degree <= N only.
struct DefectReport {
    int order = 0;
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd eigenvalues;        // ascending
    int rank = 0;                       // |eig| > 1e-8 * largest |eig|
    bool zero = false;                  // spectral norm <= 1e-8 * scale
    bool positive_semidefinite = false; // min eig >= -1e-8 * scale
    bool negative_semidefinite = false; // max eig <=  1e-8 * scale
};

/// Aggregate classification of the shift on the space defined by an inner
/// product, on the degree-N truncation.
struct Classification {
    int truncation = 0;                 // N
    double scale = 0.0;                 // spectral norm of the monomial Gram
    std::vector<DefectReport> defects;  // orders 0..n_max
    bool expansive = false;             // Delta^(1) PSD
    bool dirichlet_type = false;        // (-1)^n Delta^(n) NSD, 1 <= n <= n_max
    int isometry_order = -1;            // least n >= 1 with Delta^(n) ~ 0
    int defect_rank = 0;                // numerical rank of Delta^(1)
};

namespace detail {

inline DefectReport analyze_defect(int n, Eigen::MatrixXcd M, double scale) {
    DefectReport rep;
    rep.order = n;
    const double herm_tol = 1e-12 * std::max(scale, 1e-300);
    double asym = (M - M.adjoint()).cwiseAbs().maxCoeff();
    if (asym > herm_tol)
        throw Error("classify: defect matrix asymmetry " + std::to_string(asym) +
                    " exceeds hermitian tolerance at order " + std::to_string(n));
    M = 0.5 * (M + M.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success)
        throw Error("classify: eigenvalue iteration failed at order " + std::to_string(n));
    rep.matrix = std::move(M);
    rep.eigenvalues = es.eigenvalues();
    const double lo = rep.eigenvalues(0);
    const double hi = rep.eigenvalues(rep.eigenvalues.size() - 1);
    const double spectral = std::max(std::abs(lo), std::abs(hi));
    const double tol = 1e-8 * scale;
    rep.zero = spectral <= tol;
    rep.positive_semidefinite = lo >= -tol;
    rep.negative_semidefinite = hi <= tol;
    if (!rep.zero) {
        const double cut = 1e-8 * spectral;
        for (int i = 0; i < rep.eigenvalues.size(); ++i)
            if (std::abs(rep.eigenvalues(i)) > cut) ++rep.rank;
    }
    return rep;
}

} // namespace detail

/// Defect matrices <Delta^(n) z^j, z^i> for all orders n <= n_max on the
/// degree-N truncation, assembled from one monomial Gram table of the
/// pairing. Entry (i, j) pairs z^j against z^i, so x*.M.x is the quadratic
/// form at p = sum x_j z^j.
inline Classification classify(const InnerProduct& ip, int N = 30, int n_max = 5) {
    if (N < n_max) throw Error("classify: truncation degree below max order");
    if (n_max < 1) throw Error("classify: max order must be >= 1");

    const int top = N + n_max;
    Eigen::MatrixXcd gram(top + 1, top + 1);
    std::vector<ComplexPoly> mono;
    mono.reserve(top + 1);
    for (int d = 0; d <= top; ++d) mono.push_back(ComplexPoly::monomial(d));
    for (int a = 0; a <= top; ++a)
        for (int b = 0; b <= top; ++b) gram(a, b) = ip(mono[b], mono[a]);

    Classification out;
    out.truncation = N;

    Eigen::MatrixXcd order0 = gram.topLeftCorner(N + 1, N + 1);
    out.scale = order0.operatorNorm();
    if (out.scale <= 0.0) throw Error("classify: degenerate pairing (zero Gram)");

    out.defects.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N + 1, N + 1);
        for (int t = 0; t <= n; ++t) {
            double sign = ((n - t) % 2 == 0) ? 1.0 : -1.0;
            double c = sign * static_cast<double>(binom_ll(n, t));
            M += c * gram.block(t, t, N + 1, N + 1);
        }
        out.defects.push_back(detail::analyze_defect(n, std::move(M), out.scale));
    }

    out.expansive = out.defects[1].positive_semidefinite;
    out.defect_rank = out.defects[1].rank;
    out.dirichlet_type = true;
    for (int n = 1; n <= n_max; ++n) {
        const DefectReport& rep = out.defects[n];
        bool sign_ok = (n % 2 == 1) ? rep.positive_semidefinite : rep.negative_semidefinite;
        out.dirichlet_type = out.dirichlet_type && sign_ok;
        if (out.isometry_order < 0 && rep.zero) out.isometry_order = n;
    }
    return out;
}

/// Annihilation certificate: max over k <= N of |<Delta (p z^k), p z^k>|.
/// Near-zero means the defect annihilates the shift-invariant subspace
/// generated by p on the truncation, i.e. p is (a multiple of) the minimal
/// polynomial of the compressed shift on the defect range.
inline double annihilation_check(const InnerProduct& ip, const ComplexPoly& p, int N) {
    if (p.degree() < 0) throw Error("annihilation_check: zero polynomial");
    double worst = 0.0;
    ComplexPoly f = p;
    for (int k = 0; k <= N; ++k) {
        worst = std::max(worst, std::abs(defect_form(ip, 1, f, f)));
        if (k < N) f = f.shift_up();
    }
    return worst;
}

} // namespace dbr
