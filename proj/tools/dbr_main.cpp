// Command-line front end: parse a problem description, run the library
// pipeline, emit one structured JSON document. Exit codes: 0 success,
// 1 input error, 2 verification failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dbr/verification.hpp"

using dbr::Complex;
using dbr::ComplexPoly;
using json = nlohmann::ordered_json;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw InputError("");
        return v;
    } catch (...) {
        throw InputError("cannot parse " + what + " '" + s + "' as a number");
    }
}

/// Complex scalar in one of three forms: Cartesian "a+bi", polar "r@theta"
/// (theta in radians), or exact root of unity "zeta:n:k" = e^(2 pi i k / n).
Complex parse_complex(std::string s) {
    std::erase(s, ' ');
    if (s.empty()) throw InputError("empty complex literal");

    if (s.rfind("zeta:", 0) == 0) {
        size_t c2 = s.find(':', 5);
        if (c2 == std::string::npos)
            throw InputError("root-of-unity literal must be zeta:n:k, got '" + s + "'");
        long n = 0, k = 0;
        try {
            n = std::stol(s.substr(5, c2 - 5));
            k = std::stol(s.substr(c2 + 1));
        } catch (...) {
            throw InputError("cannot parse root-of-unity literal '" + s + "'");
        }
        if (n <= 0) throw InputError("root-of-unity order must be positive");
        k %= n;
        if (k < 0) k += n;
        // exact values on the axes
        if (4 * k % n == 0) {
            switch (4 * k / n) {
                case 0: return Complex(1.0);
                case 1: return Complex(0.0, 1.0);
                case 2: return Complex(-1.0);
                case 3: return Complex(0.0, -1.0);
            }
        }
        return std::polar(1.0, 2.0 * dbr::pi * double(k) / double(n));
    }

    if (size_t at = s.find('@'); at != std::string::npos) {
        double r = parse_double(s.substr(0, at), "modulus");
        double theta = parse_double(s.substr(at + 1), "angle");
        if (r < 0.0) throw InputError("modulus must be nonnegative in '" + s + "'");
        return std::polar(r, theta);
    }

    if (s.back() == 'i' || s.back() == 'I') {
        s.pop_back();
        // split at the last +/- that is not an exponent sign and not leading
        size_t split = std::string::npos;
        for (size_t pos = s.size(); pos-- > 1;) {
            if ((s[pos] == '+' || s[pos] == '-') &&
                s[pos - 1] != 'e' && s[pos - 1] != 'E') {
                split = pos;
                break;
            }
        }
        auto imag_of = [](const std::string& t) {
            if (t.empty() || t == "+") return 1.0;
            if (t == "-") return -1.0;
            return parse_double(t, "imaginary part");
        };
        if (split == std::string::npos) return Complex(0.0, imag_of(s));
        return Complex(parse_double(s.substr(0, split), "real part"),
                       imag_of(s.substr(split)));
    }
    return Complex(parse_double(s, "real part"), 0.0);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t comma = s.find(',', start);
        out.push_back(s.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<Complex> parse_complex_list(const std::string& s, const std::string& what) {
    if (s.empty()) throw InputError("missing " + what);
    std::vector<Complex> out;
    for (const std::string& tok : split_commas(s)) out.push_back(parse_complex(tok));
    return out;
}

/// Atom of a measure: must lie in the closed disk up to 1e-12 slack; values
/// within the slack of the circle are snapped onto it exactly.
Complex parse_atom(const std::string& s) {
    Complex z = parse_complex(s);
    double r = std::abs(z);
    if (r > 1.0 + 1e-12)
        throw InputError("atom '" + s + "' lies outside the closed unit disk");
    if (r > 1.0 - 1e-12 && r != 1.0) z /= r;
    return z;
}

dbr::AtomicMeasure parse_measure(const std::string& atoms_str,
                                 const std::string& weights_str) {
    if (atoms_str.empty()) throw InputError("missing --atoms");
    std::vector<Complex> atoms;
    for (const std::string& tok : split_commas(atoms_str))
        atoms.push_back(parse_atom(tok));
    std::vector<double> weights;
    if (weights_str.empty()) {
        weights.assign(atoms.size(), 1.0);
    } else {
        for (const std::string& tok : split_commas(weights_str))
            weights.push_back(parse_double(tok, "weight"));
    }
    if (weights.size() != atoms.size())
        throw InputError("got " + std::to_string(atoms.size()) + " atoms but " +
                         std::to_string(weights.size()) + " weights");
    for (double w : weights)
        if (!(w > 0.0)) throw InputError("weights must be positive");
    return dbr::AtomicMeasure(atoms, weights);
}

double default_tolerance() {
    if (const char* env = std::getenv("DBR_TOL")) {
        double v = parse_double(env, "DBR_TOL");
        if (!(v > 0.0)) throw InputError("DBR_TOL must be positive");
        return v;
    }
    return 1e-9;
}

// ---------------------------------------------------------------------------
// JSON rendering: complex as [re, im], polynomials as ascending coefficient
// arrays, matrices row-major.
// ---------------------------------------------------------------------------

json j_complex(Complex z) { return json::array({z.real(), z.imag()}); }

json j_poly(const ComplexPoly& p) {
    json out = json::array();
    for (int k = 0; k <= p.degree(); ++k) out.push_back(j_complex(p.coeff(k)));
    return out;
}

json j_rational(const dbr::StableRational& r) {
    return json{{"num", j_poly(r.num())}, {"den", j_poly(r.den())}};
}

json j_matrix(const Eigen::MatrixXcd& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(j_complex(m(i, j)));
        out.push_back(row);
    }
    return out;
}

json j_vector(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json j_measure(const dbr::AtomicMeasure& mu) {
    json atoms = json::array(), weights = json::array();
    for (Complex a : mu.atoms) atoms.push_back(j_complex(a));
    for (double w : mu.weights) weights.push_back(w);
    return json{{"atoms", atoms}, {"weights", weights}};
}

void emit(const json& doc, const std::string& path) {
    std::string text = doc.dump(2);
    text.push_back('\n');
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw InputError("cannot open output file '" + path + "'");
        out << text;
    }
}

// ---------------------------------------------------------------------------
// Model serialization shared by `kernel` and `schur`
// ---------------------------------------------------------------------------

/// Coefficient matrix C of the bivariate numerator: with n atoms,
///   K(z, w) = sum_{a,b} C[a][b] z^a conj(w)^b
///             / ( q(z) conj(q)(conj(w)) (1 - z conj(w)) ),
/// assembled from the dual basis, the atom kernels, and the isometric
/// multiplier, all of which share the denominator q.
Eigen::MatrixXcd kernel_bivariate(const dbr::KernelModel& m) {
    const int n = static_cast<int>(m.measure.size());
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n + 2, n + 2);
    auto add_outer = [&](const ComplexPoly& a, const ComplexPoly& b, int sa, int sb,
                         double scale) {
        for (int i = 0; i <= a.degree(); ++i)
            for (int j = 0; j <= b.degree(); ++j)
                C(i + sa, j + sb) += scale * a.coeff(i) * b.coeff(j);
    };
    for (int i = 0; i < n; ++i) {
        ComplexPoly p = m.dual_basis[i].num();
        ComplexPoly qc = m.atom_kernels[i].num().conj_coeffs();
        add_outer(p, qc, 0, 0, 1.0);
        add_outer(p, qc, 1, 1, -1.0);
    }
    add_outer(m.atom_poly, m.atom_poly.conj_coeffs(), 0, 0, 1.0);
    return C;
}

double kernel_bivariate_residual(const dbr::KernelModel& m, const Eigen::MatrixXcd& C) {
    ComplexPoly qc = m.q.conj_coeffs();
    double worst = 0.0;
    std::mt19937_64 g(0xc11f0d);
    std::uniform_real_distribution<double> rad(0.0, 0.9), ang(0.0, 2.0 * dbr::pi);
    for (int t = 0; t < 16; ++t) {
        Complex z = std::polar(rad(g), ang(g)), w = std::polar(rad(g), ang(g));
        Complex wb = std::conj(w);
        Complex num(0.0);
        for (Eigen::Index a = 0; a < C.rows(); ++a)
            for (Eigen::Index b = 0; b < C.cols(); ++b)
                num += C(a, b) * std::pow(z, double(a)) * std::pow(wb, double(b));
        Complex den = m.q(z) * qc(wb) * (Complex(1.0) - z * wb);
        worst = std::max(worst, std::abs(num / den - dbr::kernel_eval(m, z, w)));
    }
    return worst;
}

json model_report_json(const dbr::ModelReport& rep) {
    return json{{"fejer_residual", rep.fejer_residual},
                {"reproducing_at_atoms", rep.reproducing_at_atoms},
                {"reproducing_random", rep.reproducing_random},
                {"kernel_self", rep.kernel_self},
                {"hermitian", rep.hermitian},
                {"diag_min", rep.diag_min},
                {"point_psd_min_eig", rep.point_psd_min_eig},
                {"projection_span", rep.projection_span},
                {"mate_identity", rep.mate_identity},
                {"schur_bound_excess", rep.schur_bound_excess},
                {"schur_kernel_match", rep.schur_kernel_match},
                {"gram_condition", rep.gram_condition},
                {"psd_rank", rep.psd_rank}};
}

/// Gate the residual report against a base tolerance; conditioning-sensitive
/// residuals are allowed to degrade with the dual-basis Gram condition
/// number. Returns the failed gates.
std::vector<std::string> model_gate(const dbr::ModelReport& rep, double tol) {
    const double cond = 1.0 + rep.gram_condition;
    std::vector<std::string> failed;
    auto gate = [&](const char* name, bool ok) {
        if (!ok) failed.push_back(name);
    };
    gate("fejer_residual", rep.fejer_residual <= 20.0 * tol);
    gate("reproducing_at_atoms", rep.reproducing_at_atoms <= tol);
    gate("reproducing_random", rep.reproducing_random <= tol * cond);
    gate("kernel_self", rep.kernel_self <= 10.0 * tol * cond);
    gate("hermitian", rep.hermitian <= tol);
    gate("diag_min", rep.diag_min >= 1.0 - tol);
    gate("point_psd_min_eig", rep.point_psd_min_eig >= -10.0 * tol);
    gate("projection_span", rep.projection_span <= tol);
    gate("mate_identity", rep.mate_identity <= tol);
    gate("schur_bound_excess", rep.schur_bound_excess <= tol);
    gate("schur_kernel_match", rep.schur_kernel_match <= tol);
    return failed;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int run_kernel(const dbr::AtomicMeasure& mu, double tol, bool schur_only,
               const std::string& outpath) {
    dbr::KernelModel m = dbr::build_model(mu);
    dbr::ModelReport rep = dbr::verify_model(m);
    std::vector<std::string> failed = model_gate(rep, tol);

    json doc;
    doc["command"] = schur_only ? "schur" : "kernel";
    doc["measure"] = j_measure(mu);
    doc["tolerance"] = tol;
    doc["q"] = j_poly(m.q);
    doc["fejer_residual"] = m.fejer_residual;

    if (!schur_only) {
        doc["atom_poly"] = j_poly(m.atom_poly);
        doc["phi"] = j_rational(m.phi);
        doc["mate"] = j_rational(m.mate);
        json basis = json::array();
        for (const auto& f : m.dual_basis) basis.push_back(j_rational(f));
        doc["dual_basis"] = basis;
        doc["gram"] = j_matrix(m.gram);
        doc["gram_condition"] = m.gram_condition;
        json kernels = json::array();
        for (const auto& k : m.atom_kernels) kernels.push_back(j_rational(k));
        doc["atom_kernels"] = kernels;

        Eigen::MatrixXcd C = kernel_bivariate(m);
        doc["kernel"] = json{
            {"form", "sum C[a][b] z^a conj(w)^b / (q(z) conj_q(conj(w)) (1 - z conj(w)))"},
            {"numerator_coeffs", j_matrix(C)},
            {"conj_q", j_poly(m.q.conj_coeffs())},
            {"residual", kernel_bivariate_residual(m, C)}};
    }

    doc["psd_matrix"] = j_matrix(m.psd);
    doc["psd_min_eig"] = m.psd_min_eig;
    doc["psd_rank"] = m.psd_rank;
    json nums = json::array();
    for (const auto& p : m.schur_numerators) nums.push_back(j_poly(p));
    doc["schur_numerators"] = nums;
    if (schur_only) doc["mate"] = j_rational(m.mate);

    doc["report"] = model_report_json(rep);
    doc["failed_gates"] = failed;
    doc["pass"] = failed.empty();
    emit(doc, outpath);
    return failed.empty() ? 0 : 2;
}

/// Generator in the ordinary power basis k^0, k^1, ... from the stored
/// binomial basis, for the human-readable closed form.
ComplexPoly newton_to_power(const std::vector<Complex>& newton) {
    ComplexPoly out;
    for (size_t d = 0; d < newton.size(); ++d) {
        ComplexPoly basis = ComplexPoly::one();
        double fact = 1.0;
        for (size_t t = 0; t < d; ++t) {
            basis = basis * ComplexPoly{Complex(-double(t)), Complex(1.0)};
            fact *= double(t + 1);
        }
        out = out + (newton[d] / fact) * basis;
    }
    return out;
}

json j_distribution(const dbr::CircleDistribution& mu, int kmax) {
    json terms = json::array();
    for (const auto& term : mu.terms()) {
        json newton = json::array(), power = json::array();
        for (Complex a : term.newton) newton.push_back(j_complex(a));
        ComplexPoly pw = newton_to_power(term.newton);
        for (int d = 0; d <= pw.degree(); ++d) power.push_back(j_complex(pw.coeff(d)));
        terms.push_back(json{{"atom", j_complex(term.atom)},
                             {"generator_newton", newton},
                             {"generator_power_basis", power}});
    }
    json moments = json::array();
    for (int k = 0; k <= kmax; ++k) moments.push_back(j_complex(mu.fourier(k)));
    return json{{"lebesgue_weight", mu.lebesgue_weight()},
                {"order", mu.is_zero() ? -1 : mu.order()},
                {"terms", terms},
                {"moments", moments}};
}

int run_tuple(Complex lambda, const ComplexPoly& p, int m, int kmax, double tol,
              const std::string& outpath) {
    dbr::TupleSpec t = dbr::rank_one_tuple(lambda, p, m);

    // residual companions: the generators against the defect forms they
    // encode, and the norm identity on a fixed probe polynomial
    dbr::InnerProduct ip = dbr::make_inner_product(t);
    double worst = 0.0;
    for (int i = 1; i < t.length(); ++i)
        for (int k = 0; k <= std::min(kmax, 6); ++k) {
            Complex want = t.entries[i].fourier(k);
            Complex got = dbr::defect_form(ip, i, ComplexPoly::one(),
                                           ComplexPoly::monomial(k));
            worst = std::max(worst, std::abs(got - want) / (1.0 + std::abs(want)));
        }
    ComplexPoly probe{1.0, 1.0, 1.0};
    dbr::NormCrossCheck chk = dbr::norm_crosscheck(lambda, p, m, probe);
    double norm_resid =
        std::abs(chk.lhs - chk.rhs) / (1.0 + std::abs(chk.lhs) + std::abs(chk.rhs));

    json doc;
    doc["command"] = "tuple";
    doc["lambda"] = j_complex(lambda);
    doc["p"] = j_poly(p);
    doc["m"] = m;
    doc["kmax"] = kmax;
    json entries = json::array();
    for (int i = 0; i < t.length(); ++i) {
        json e = j_distribution(t.entries[i], kmax);
        e["index"] = i;
        entries.push_back(std::move(e));
    }
    doc["entries"] = entries;
    doc["tolerance"] = tol;
    doc["verification"] =
        json{{"defect_form_residual", worst},
             {"norm_crosscheck",
              json{{"lhs", chk.lhs}, {"rhs", chk.rhs}, {"residual", norm_resid}}}};
    bool pass = worst <= tol && norm_resid <= tol;
    doc["pass"] = pass;
    emit(doc, outpath);
    return pass ? 0 : 2;
}

int run_defect(const dbr::InnerProduct& ip, const json& space, int N, int n_max,
               double tol, const std::string& outpath) {
    dbr::Classification cls = dbr::classify(ip, N, n_max);
    json doc;
    doc["command"] = "defect";
    doc["space"] = space;
    doc["truncation"] = cls.truncation;
    doc["scale"] = cls.scale;
    doc["tolerance"] = tol;
    doc["zero_threshold"] = 1e-8 * cls.scale;
    json orders = json::array();
    for (const auto& rep : cls.defects)
        orders.push_back(json{{"order", rep.order},
                              {"eigenvalues", j_vector(rep.eigenvalues)},
                              {"rank", rep.rank},
                              {"zero", rep.zero},
                              {"positive_semidefinite", rep.positive_semidefinite},
                              {"negative_semidefinite", rep.negative_semidefinite},
                              {"matrix", j_matrix(rep.matrix)}});
    doc["defects"] = orders;
    doc["expansive"] = cls.expansive;
    doc["dirichlet_type"] = cls.dirichlet_type;
    doc["isometry_order"] = cls.isometry_order;
    doc["defect_rank"] = cls.defect_rank;
    doc["pass"] = true;
    emit(doc, outpath);
    return 0;
}

int run_verify(const std::string& suite, const std::string& outpath) {
    if (suite != "paper" && suite != "full" && suite != "all")
        throw InputError("unknown suite '" + suite + "' (available: paper)");
    std::vector<dbr::CriterionResult> results = dbr::run_acceptance();
    json doc;
    doc["command"] = "verify";
    doc["suite"] = suite;
    json criteria = json::array();
    int passed = 0;
    for (const auto& c : results) {
        criteria.push_back(json{{"id", c.id},
                                {"name", c.name},
                                {"pass", c.pass},
                                {"worst_residual", c.worst},
                                {"tolerance", c.tolerance},
                                {"detail", c.detail}});
        if (c.pass) ++passed;
    }
    doc["criteria"] = criteria;
    doc["passed"] = passed;
    doc["total"] = static_cast<int>(results.size());
    doc["pass"] = passed == static_cast<int>(results.size());
    emit(doc, outpath);
    return doc["pass"].get<bool>() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reproducing kernels, Schur functions, and shift-defect "
                 "calculus for harmonically weighted Dirichlet spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string outpath;
    app.add_option("-o,--output", outpath, "write the JSON document here instead of stdout");

    std::string atoms_str, weights_str;
    double tol_flag = 0.0;

    auto add_measure_opts = [&](CLI::App* cmd, bool required) {
        auto* a = cmd->add_option("--atoms", atoms_str,
                                  "comma-separated atoms: a+bi, r@theta, or zeta:n:k");
        if (required) a->required();
        cmd->add_option("--weights", weights_str,
                        "comma-separated positive weights (default: all 1)");
    };
    auto add_tol_opt = [&](CLI::App* cmd) {
        cmd->add_option("--tol", tol_flag,
                        "pass/fail tolerance (default: DBR_TOL env var or 1e-9)");
    };

    CLI::App* kernel = app.add_subcommand(
        "kernel", "build the space model: spectral factor, dual basis, Gram, "
                  "kernels, Schur data");
    add_measure_opts(kernel, true);
    add_tol_opt(kernel);

    CLI::App* schur = app.add_subcommand(
        "schur", "Schur numerators and embedding residuals only");
    add_measure_opts(schur, true);
    add_tol_opt(schur);

    std::string lambda_str = "1", p_str = "1";
    int m_order = 1, kmax = 20;
    CLI::App* tuple = app.add_subcommand(
        "tuple", "distribution tuple of a higher-order local Dirichlet norm");
    tuple->add_option("--lambda", lambda_str, "unimodular atom")->required();
    tuple->add_option("--p", p_str, "multiplier coefficients, ascending, degree < m");
    tuple->add_option("--m", m_order, "local order (>= 1)")->required();
    tuple->add_option("--kmax", kmax, "list moments for 0 <= k <= kmax");
    add_tol_opt(tuple);

    int trunc = 30, n_max = 5;
    CLI::App* defect = app.add_subcommand(
        "defect", "defect operator matrices and shift classification");
    add_measure_opts(defect, false);
    defect->add_option("--lambda", lambda_str,
                       "atom of a higher-order local space (instead of --atoms)");
    defect->add_option("--p", p_str, "multiplier coefficients for the local space");
    defect->add_option("--m", m_order, "local order for the local space");
    defect->add_option("--truncation", trunc, "degree of the monomial truncation");
    defect->add_option("--orders", n_max, "compute defects of order 0..orders");
    add_tol_opt(defect);

    std::string suite = "paper";
    CLI::App* verify = app.add_subcommand(
        "verify", "run the built-in acceptance fixtures and report residuals");
    verify->add_option("--suite", suite, "fixture suite name (default: paper)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        double tol = tol_flag > 0.0 ? tol_flag : default_tolerance();

        if (kernel->parsed() || schur->parsed())
            return run_kernel(parse_measure(atoms_str, weights_str), tol,
                              schur->parsed(), outpath);

        if (tuple->parsed()) {
            Complex lambda = parse_atom(lambda_str);
            if (std::abs(std::abs(lambda) - 1.0) > 1e-9)
                throw InputError("tuple atom must be unimodular");
            std::vector<Complex> coeffs = parse_complex_list(p_str, "--p");
            ComplexPoly p(std::move(coeffs));
            if (m_order < 1) throw InputError("--m must be >= 1");
            if (p.is_zero()) throw InputError("--p must be a nonzero polynomial");
            if (p.degree() > m_order - 1)
                throw InputError("--p must have degree < m");
            if (std::abs(p(lambda)) <= 1e-12 * (1.0 + p.norm1()))
                throw InputError("--p must not vanish at the atom");
            if (kmax < 0) throw InputError("--kmax must be >= 0");
            return run_tuple(lambda, p, m_order, kmax, tol, outpath);
        }

        if (defect->parsed()) {
            if (trunc < n_max || n_max < 1)
                throw InputError("need --truncation >= --orders >= 1");
            bool have_measure = !atoms_str.empty();
            bool have_local = defect->count("--lambda") > 0;
            if (have_measure == have_local)
                throw InputError("give exactly one of --atoms or --lambda");
            if (have_measure) {
                dbr::AtomicMeasure mu = parse_measure(atoms_str, weights_str);
                return run_defect(dbr::InnerProduct::from_measure(mu),
                                  json{{"kind", "atomic measure"},
                                       {"measure", j_measure(mu)}},
                                  trunc, n_max, tol, outpath);
            }
            Complex lambda = parse_atom(lambda_str);
            std::vector<Complex> coeffs = parse_complex_list(p_str, "--p");
            ComplexPoly p(std::move(coeffs));
            if (m_order < 1) throw InputError("--m must be >= 1");
            if (p.is_zero()) throw InputError("--p must be a nonzero polynomial");
            return run_defect(
                dbr::InnerProduct::local_order(lambda, m_order, p),
                json{{"kind", "local"},
                     {"lambda", j_complex(lambda)},
                     {"m", m_order},
                     {"p", j_poly(p)}},
                trunc, n_max, tol, outpath);
        }

        if (verify->parsed()) return run_verify(suite, outpath);
        throw InputError("no command given");
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const dbr::Error& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
