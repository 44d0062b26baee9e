#include "saf/verify.hpp"

#include "saf/error.hpp"
#include "saf/extension.hpp"
#include "saf/gen_resolvent.hpp"
#include "saf/io.hpp"
#include "saf/smooth_functions.hpp"
#include "saf/triplet_algebra.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace saf::verify {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr cplx kI{0.0, 1.0};

using ode::ModelKind;
using ode::Potential;

struct Outcome {
    double residual = 0.0;
    std::string context;
};

using CheckFn = std::function<Outcome(const Config&, std::mt19937_64&)>;

struct CheckSpec {
    std::string name;
    double tolerance;
    CheckFn run;
};

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(4) << x;
    return os.str();
}

std::string model_suffix(ModelKind k) {
    return k == ModelKind::FirstOrder ? "first_order" : "sturm_liouville";
}

// FNV-1a, so per-check streams depend only on the seed and the name.
std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

ode::TestFunction random_test_function(ModelKind kind, std::mt19937_64& rng) {
    return kind == ModelKind::FirstOrder ? ode::random_trig_polynomial(rng)
                                         : ode::random_vanishing_polynomial(rng);
}

cplx random_nonreal(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-30.0, 30.0);
    std::uniform_real_distribution<double> im(0.2, 10.0);
    std::bernoulli_distribution flip(0.5);
    const cplx z{re(rng), im(rng)};
    return flip(rng) ? std::conj(z) : z;
}

// Assembly potential: the Sturm–Liouville model of the config, else q = 0.
Potential assembly_potential(const Config& c) {
    for (const auto& m : c.models) {
        if (m.kind == ModelKind::SturmLiouville) return m.q;
    }
    return Potential::uniform(0.0);
}

int assembly_mesh(const Config& c) {
    for (const auto& m : c.models) {
        if (m.kind == ModelKind::SturmLiouville) return m.n;
    }
    return 200;
}

std::vector<HerglotzData> with_infinity(const Config& c) {
    auto out = c.herglotz;
    out.push_back(HerglotzData::infinity());
    return out;
}

double max_relative_error(const std::vector<double>& got, const std::vector<double>& want) {
    if (got.size() < want.size()) return kInf;
    double e = 0.0;
    for (std::size_t k = 0; k < want.size(); ++k) {
        e = std::max(e, std::abs(got[k] - want[k]) / std::abs(want[k]));
    }
    return e;
}

// Roots s² of s·sin s = cos s (that is, tan s = 1/s), one per interval
// ((k−1)π, (k−1)π + π/2), by bisection.
std::vector<double> tan_reciprocal_roots(int count) {
    std::vector<double> out;
    for (int k = 1; k <= count; ++k) {
        double lo = (k - 1) * kPi + 1e-12;
        double hi = (k - 1) * kPi + 0.5 * kPi;
        auto g = [](double s) { return s * std::sin(s) - std::cos(s); };
        const bool lo_neg = g(lo) < 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((g(mid) < 0.0) == lo_neg) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double s = 0.5 * (lo + hi);
        out.push_back(s * s);
    }
    return out;
}

std::vector<double> pencil_eigs(const HerglotzData& fd, int n, double lo, double hi) {
    return ext::extension_eigs(ext::assemble_extension(Potential::uniform(0.0), fd, n), lo, hi).eigenvalues;
}

// ---------------------------------------------------------------------------
// Green's identity

Outcome check_green_surrogate(const Config&, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int n = 3 + k % 8;
        const auto sys = triplet::random_system(n, rng());
        const double tn = sys.T().operatorNorm();
        for (int p = 0; p < 10; ++p) {
            triplet::Vector x(n), y(n);
            for (int i = 0; i < n; ++i) {
                x(i) = cplx(g(rng), g(rng));
                y(i) = cplx(g(rng), g(rng));
            }
            worst = std::max(worst, triplet::green_residual(sys, x, y) / (tn * x.norm() * y.norm()));
        }
    }
    return {worst, "100 systems, n = 3..10, 10 pairs each, relative to |T||x||y|"};
}

Outcome check_green_model(const ode::ModelDescriptor& d, std::mt19937_64& rng) {
    const auto model = ode::make_model(d);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto x = random_test_function(d.kind, rng);
        const auto y = random_test_function(d.kind, rng);
        worst = std::max(worst, ode::green_residual(*model, x, y));
    }
    return {worst, "50 smooth pairs, n = " + std::to_string(d.n)};
}

Outcome check_green_order(const ode::ModelDescriptor& d, std::mt19937_64& rng) {
    auto coarse_d = d;
    coarse_d.n = d.n / 2;
    const auto fine = ode::make_model(d);
    const auto coarse = ode::make_model(coarse_d);
    double min_order = kInf;
    for (int k = 0; k < 50; ++k) {
        const auto x = random_test_function(d.kind, rng);
        const auto y = random_test_function(d.kind, rng);
        const double rf = ode::green_residual(*fine, x, y);
        const double rc = ode::green_residual(*coarse, x, y);
        if (rf > 1e-13) min_order = std::min(min_order, std::log2(rc / rf));
    }
    const double shortfall = std::isinf(min_order) ? 0.0 : std::max(0.0, 2.0 - min_order);
    return {shortfall, "order shortfall below 2 under halving; observed min order " + fmt(min_order)};
}

// ---------------------------------------------------------------------------
// Spectra

Outcome check_spectrum_dirichlet(const Config&, std::mt19937_64&) {
    std::vector<double> want;
    for (int k = 1; k <= 3; ++k) want.push_back(k * k * kPi * kPi);
    const auto got = pencil_eigs(HerglotzData::infinity(), 200, 0.0, 120.0);
    return {max_relative_error(got, want), "f = inf, q = 0, n = 200, relative error vs (k pi)^2, k <= 3"};
}

Outcome check_spectrum_f_zero(const Config&, std::mt19937_64&) {
    std::vector<double> want;
    for (int k = 1; k <= 3; ++k) want.push_back((k - 0.5) * (k - 0.5) * kPi * kPi);
    const auto got = pencil_eigs(HerglotzData::make(0.0, 0.0), 200, 0.0, 100.0);
    return {max_relative_error(got, want), "f = 0, q = 0, n = 200, relative error vs ((k - 1/2) pi)^2"};
}

Outcome check_spectrum_lambda_bc(const Config&, std::mt19937_64&) {
    const auto want = tan_reciprocal_roots(3);
    const auto got = pencil_eigs(HerglotzData::make(1.0, 0.0), 200, 0.0, 50.0);
    return {max_relative_error(got, want), "f(lambda) = lambda, n = 200, relative error vs tan s = 1/s"};
}

Outcome check_spectrum_lambda_bc_order(const Config&, std::mt19937_64&) {
    const auto want = tan_reciprocal_roots(3);
    std::vector<double> err;
    for (int n : {100, 200, 400}) {
        err.push_back(max_relative_error(pencil_eigs(HerglotzData::make(1.0, 0.0), n, 0.0, 50.0), want));
    }
    const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
    return {std::max(0.0, 1.9 - order), "order shortfall below 1.9, n = 100/200/400; observed " + fmt(order)};
}

Outcome check_spectrum_atom_branch(const Config&, std::mt19937_64&) {
    const auto fd = HerglotzData::make(0.0, 0.0, {{0.0, 1.0}});
    const auto got = pencil_eigs(fd, 200, 0.5, 60.0);
    const auto model = ode::model_sl(Potential::uniform(0.0), 200);
    const auto want = ext::char_roots(*model, fd, 0.5, 60.0);
    double e = got.size() == want.size() ? max_relative_error(got, want) : kInf;
    return {e, "f(lambda) = -1/lambda, window [0.5, 60], " + std::to_string(got.size()) +
                   " eigenvalues vs char_roots"};
}

Outcome check_spectral_cross_validation(const Config&, std::mt19937_64&) {
    struct Case {
        HerglotzData fd;
        double lo, hi;
    };
    const std::vector<Case> cases{{HerglotzData::make(1.0, 0.0), 0.0, 50.0},
                                  {HerglotzData::make(0.0, 0.0, {{0.0, 1.0}}), 0.5, 60.0},
                                  {HerglotzData::make(0.0, 2.0), -10.0, 60.0}};
    const auto model = ode::model_sl(Potential::uniform(0.0), 200);
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto eig = pencil_eigs(c.fd, 200, c.lo, c.hi);
        const auto roots = ext::char_roots(*model, c.fd, c.lo, c.hi);
        if (eig.size() != roots.size()) return {kInf, "eigenvalue and root counts differ"};
        for (std::size_t k = 0; k < eig.size(); ++k) {
            worst = std::max(worst, std::abs(eig[k] - roots[k]) / std::max(1e-3 * std::abs(roots[k]), 1e-4));
        }
    }
    return {worst, "|eig - root| / max(1e-3 |root|, 1e-4) over three parameter sets"};
}

Outcome check_interlacing(const Config&, std::mt19937_64&) {
    const auto eig = pencil_eigs(HerglotzData::make(1.0, 0.0), 200, 0.0, 50.0);
    const auto oracle = tan_reciprocal_roots(3);
    int violations = eig.size() < 3 ? 3 : 0;
    for (int k = 1; k <= 3 && k <= static_cast<int>(eig.size()); ++k) {
        const double below = ((k - 1) * kPi) * ((k - 1) * kPi);
        const double above = (k * kPi) * (k * kPi);
        if (!(eig[k - 1] > below && eig[k - 1] < above)) ++violations;
        if (!(oracle[k - 1] > below && oracle[k - 1] < above)) ++violations;
    }
    return {static_cast<double>(violations), "count of eigenvalues outside ((k-1)^2 pi^2, k^2 pi^2), k = 1..3"};
}

// ---------------------------------------------------------------------------
// Compression

struct CompressionCase {
    std::string label;
    HerglotzData fd;
    cplx lambda;
    ode::Function x;
};

std::vector<CompressionCase> compression_cases(std::mt19937_64& rng) {
    auto sinpi = [](double t) { return cplx{std::sin(kPi * t)}; };
    auto bump = [](double t) { return cplx{t * (1.0 - t)}; };
    auto wavy = [](double t) { return cplx{std::cos(2.0 * t), 0.5 * t}; };
    const auto smooth = ode::random_vanishing_polynomial(rng).value;
    const auto atom = HerglotzData::make(0.0, 0.0, {{0.0, 1.0}});
    return {{"f = inf", HerglotzData::infinity(), kI, sinpi},
            {"f = 2", HerglotzData::make(0.0, 2.0), cplx(1.0, 1.0), bump},
            {"f = lambda", HerglotzData::make(1.0, 0.0), cplx(1.0, 2.0), bump},
            {"f = lambda", HerglotzData::make(1.0, 0.0), cplx(-3.0, 0.5), wavy},
            {"one atom", atom, 2.0 * kI, smooth},
            {"one atom", atom, cplx(5.0, 1.0), sinpi}};
}

struct CompressionData {
    double worst_abs = 0.0;
    double worst_ratio = 0.0;
};

CompressionData compression_study(std::mt19937_64& rng) {
    const auto reference = ode::model_sl(Potential::uniform(0.0), 800);
    CompressionData out;
    for (const auto& c : compression_cases(rng)) {
        std::vector<double> e;
        for (int n : {100, 200, 400}) {
            const auto a = ext::assemble_extension(Potential::uniform(0.0), c.fd, n);
            e.push_back(ext::compression_match(a, *reference, c.lambda, c.x));
        }
        const double cst = std::max(e[0] * 100.0 * 100.0, e[1] * 200.0 * 200.0);
        out.worst_abs = std::max(out.worst_abs, e[2]);
        out.worst_ratio = std::max(out.worst_ratio, e[2] / (cst / (400.0 * 400.0)));
    }
    return out;
}

Outcome check_compression_abs(const Config&, std::mt19937_64& rng) {
    return {compression_study(rng).worst_abs, "6 (f, lambda, x) triples, L2 error at n = 400"};
}

Outcome check_compression_rate(const Config&, std::mt19937_64& rng) {
    return {compression_study(rng).worst_ratio,
            "error at n = 400 over C n^-2 with C from n = 100, 200"};
}

// ---------------------------------------------------------------------------
// Self-adjointness

std::vector<ext::ExtensionAssembly> dataset_assemblies(const Config& c) {
    std::vector<ext::ExtensionAssembly> out;
    const auto q = assembly_potential(c);
    const int n = assembly_mesh(c);
    for (const auto& fd : with_infinity(c)) out.push_back(ext::assemble_extension(q, fd, n));
    return out;
}

Outcome check_hermiticity(const Config& c, std::mt19937_64& rng) {
    auto assemblies = dataset_assemblies(c);
    // Randomized valid data on top of the configured datasets.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        std::vector<Atom> atoms;
        double t = -5.0 * u(rng);
        for (int j = 0; j < k % 4; ++j) {
            t += 1.0 + 3.0 * u(rng);
            atoms.push_back({t, 0.1 + 2.0 * u(rng)});
        }
        const auto fd = HerglotzData::make(k % 2 == 0 ? 0.0 : 2.0 * u(rng), 4.0 * u(rng) - 2.0, atoms);
        assemblies.push_back(ext::assemble_extension(assembly_potential(c), fd, 40 + 10 * k));
    }
    if (c.inject_defect == "nonhermitian") {
        auto& a = assemblies.front();
        a.K(0, 1) += 1e-6 * a.K.norm();
    }
    double worst = 0.0;
    double min_mass = kInf;
    for (const auto& a : assemblies) {
        worst = std::max(worst, ext::hermiticity_defect(a));
        Eigen::SelfAdjointEigenSolver<ext::RealMatrix> es(a.M, Eigen::EigenvaluesOnly);
        min_mass = std::min(min_mass, es.eigenvalues().minCoeff());
    }
    if (!(min_mass > 0.0)) worst = kInf;
    return {worst, std::to_string(assemblies.size()) + " assemblies; smallest M eigenvalue " + fmt(min_mass) +
                       (c.inject_defect.empty() ? "" : "; injected defect: " + c.inject_defect)};
}

Outcome check_adjoint_sampling(const Config& c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (const auto& a : dataset_assemblies(c)) {
        const ext::Matrix k = a.K.cast<cplx>();
        const double kn = a.K.norm();
        for (int s = 0; s < 10; ++s) {
            ext::Vector x(k.rows()), y(k.rows());
            for (Eigen::Index i = 0; i < k.rows(); ++i) {
                x(i) = cplx(g(rng), g(rng));
                y(i) = cplx(g(rng), g(rng));
            }
            const cplx lhs = y.dot(k * x);
            const cplx rhs = (k * y).dot(x);
            worst = std::max(worst, std::abs(lhs - rhs) / (kn * x.norm() * y.norm()));
        }
    }
    return {worst, "<K x, y> - <x, K y> on random block vectors, relative"};
}

Outcome check_resolvent_conjugate_symmetry(const Config& c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (const auto& a : dataset_assemblies(c)) {
        ext::RealVector xr(a.layout.total());
        for (auto& v : xr) v = g(rng);
        const ext::Vector x = xr.cast<cplx>();
        const cplx lam = random_nonreal(rng);
        const auto y1 = ext::extension_resolve(a, lam, x);
        const auto y2 = ext::extension_resolve(a, std::conj(lam), x);
        worst = std::max(worst, (y1.conjugate() - y2).norm() / y1.norm());
    }
    return {worst, "resolve at conj(lambda) vs conjugate of resolve at lambda, real data"};
}

Outcome check_resolvent_symmetry(const ode::ModelDescriptor& d, const Config& c, std::mt19937_64& rng) {
    const auto model = ode::make_model(d);
    const auto data = with_infinity(c);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto& fd = data[k % data.size()];
        const cplx lam = random_nonreal(rng);
        const auto x = random_test_function(d.kind, rng);
        const auto y = random_test_function(d.kind, rng);
        worst = std::max(worst, resolvent::resolvent_symmetry_residual(*model, fd, lam, x.value, y.value));
    }
    return {worst, "20 random (f, lambda, x, y) samples"};
}

Outcome check_boundary_condition(const ode::ModelDescriptor& d, const Config& c, std::mt19937_64& rng) {
    const auto model = ode::make_model(d);
    const auto data = with_infinity(c);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto& fd = data[k % data.size()];
        const cplx lam = random_nonreal(rng);
        const auto x = random_test_function(d.kind, rng);
        const auto r = resolvent::generalized_resolvent(*model, fd, lam, x.value);
        const double fmag = fd.is_infinity() ? 0.0 : std::abs(eval(fd, lam).value);
        worst = std::max(worst, r.residual_bc / ((1.0 + fmag) * model->norm(model->sample(x.value))));
    }
    return {worst, "|Gamma1 y + f Gamma0 y| / ((1 + |f|) |x|) on 50 samples"};
}

Outcome check_first_resolvent_identity(const Config&, std::mt19937_64&) {
    const auto m2 = ode::model_sl(Potential::uniform(0.0), 200);
    const auto m1 = ode::model_first_order(64);
    const auto x = ode::polynomial({0.0, 1.0, -1.0});
    const auto one = [](double) { return cplx{1.0}; };
    const cplx lam{2.0, 1.0};
    const cplx mu{-1.0, 3.0};
    double worst = 0.0;
    worst = std::max(worst, resolvent::first_resolvent_identity_residual(*m2, HerglotzData::infinity(), lam, mu, x));
    worst = std::max(worst, resolvent::first_resolvent_identity_residual(*m2, HerglotzData::make(0.0, 2.0), lam, mu, x));
    worst = std::max(worst, resolvent::first_resolvent_identity_residual(*m1, HerglotzData::make(0.0, 2.0), lam, mu, one));
    const double violation =
        resolvent::first_resolvent_identity_residual(*m2, HerglotzData::make(1.0, 0.0), lam, mu, x);
    return {worst, "f = inf and f = 2; violation for f = lambda (expected nonzero): " + fmt(violation)};
}

// ---------------------------------------------------------------------------
// Minimality

Outcome check_minimality(const Config& c, std::mt19937_64&) {
    const std::vector<cplx> lambdas{kI, 2.0 * kI, cplx(1.0, 1.0), cplx(2.0, 1.0)};
    const auto q0 = Potential::uniform(0.0);
    struct Case {
        HerglotzData fd;
        Potential q;
        bool canonical;
    };
    std::vector<Case> cases{{HerglotzData::make(1.0, 0.0), q0, false},
                            {HerglotzData::make(1.0, 0.5, {{-1.0, 0.7}, {3.0, 1.2}}), q0, false},
                            {HerglotzData::make(0.0, 2.0), q0, true}};
    for (const auto& fd : c.herglotz) cases.push_back({fd, assembly_potential(c), fd.is_real_constant_or_infinity()});
    double deficit = 0.0;
    std::ostringstream ctx;
    ctx << "n = 30; rank/expected:";
    for (const auto& cs : cases) {
        const auto a = ext::assemble_extension(cs.q, cs.fd, 30);
        const int rank = ext::minimality_rank(a, lambdas, ext::hat_functions(a));
        const int expected = cs.canonical ? a.layout.n_base : a.layout.total();
        deficit += std::abs(rank - expected);
        ctx << ' ' << rank << '/' << expected;
    }
    return {deficit, ctx.str()};
}

// ---------------------------------------------------------------------------
// Herglotz machinery

Outcome check_cayley_roundtrip(const Config&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(0.0, 10.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const cplx z{re(rng), im(rng)};
        const auto back = omega_to_f(f_to_omega(ExtendedComplex::finite(z)));
        worst = std::max(worst, back.infinite ? kInf : std::abs(back.value - z) / std::abs(z));
    }
    return {worst, "1000 samples in the closed upper half-plane"};
}

Outcome check_cayley_disk(const Config& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(1e-3, 10.0);
    double worst = 0.0;
    for (const auto& fd : c.herglotz) {
        for (int k = 0; k < 200; ++k) {
            const cplx z{re(rng), im(rng)};
            if (fd.distance_to_atoms(z.real()) < 1e-6 && z.imag() < 1e-6) continue;
            const auto w = f_to_omega(eval(fd, z));
            worst = std::max(worst, std::abs(w.value) - 1.0);
        }
    }
    return {std::max(0.0, worst), "excess of |omega(f(z))| over 1 on upper half-plane grids"};
}

Outcome check_stieltjes_inversion(const Config&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int count = 1; count <= 5; ++count) {
        for (int rep = 0; rep < 4; ++rep) {
            std::vector<Atom> atoms;
            double t = -4.0 + u(rng);
            for (int j = 0; j < count; ++j) {
                atoms.push_back({t, 0.2 + 2.0 * u(rng)});
                t += 1.0 + u(rng);
            }
            const auto fd = HerglotzData::make(u(rng), 2.0 * u(rng) - 1.0, atoms);
            InversionOptions opts;
            opts.window_lo = -5.0;
            opts.window_hi = t + 1.0;
            const auto found = stieltjes_invert(make_evaluator(fd), opts);
            if (found.size() != atoms.size()) return {kInf, "atom count mismatch"};
            for (std::size_t j = 0; j < atoms.size(); ++j) {
                worst = std::max(worst, std::abs(found[j].position - atoms[j].position));
                worst = std::max(worst, std::abs(found[j].weight - atoms[j].weight));
            }
        }
    }
    return {worst, "1..5 separated atoms, 4 draws each, max position/weight error"};
}

Outcome check_asymptotics(const Config& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto data = c.herglotz;
    for (int k = 0; k < 10; ++k) {
        std::vector<Atom> atoms;
        for (int j = 0; j < k % 4; ++j) atoms.push_back({4.0 * u(rng) - 2.0 + 5.0 * j, 0.1 + u(rng)});
        data.push_back(HerglotzData::make(2.0 * u(rng), 4.0 * u(rng) - 2.0, atoms));
    }
    double worst = 0.0;
    for (const auto& fd : data) {
        if (fd.is_infinity()) continue;
        const auto est = extract_asymptotics(make_evaluator(fd));
        worst = std::max({worst, std::abs(est.h0 - fd.h0()), std::abs(est.h - fd.h())});
    }
    return {worst, "configured datasets plus 10 random ones"};
}

// ---------------------------------------------------------------------------
// Nevanlinna positivity of the compression

Outcome check_nevanlinna(const ode::ModelDescriptor& d, const Config& c, std::mt19937_64& rng) {
    const auto model = ode::make_model(d);
    std::uniform_real_distribution<double> re(-20.0, 20.0);
    std::uniform_real_distribution<double> im(0.05, 5.0);
    double worst = 0.0;
    for (const auto& fd : with_infinity(c)) {
        std::vector<cplx> grid;
        for (int k = 0; k < 20; ++k) grid.emplace_back(re(rng), im(rng));
        const auto x = random_test_function(d.kind, rng);
        worst = std::max(worst, resolvent::compression_herglotz_check(*model, fd, grid, x.value));
    }
    return {worst, "max(0, -min Im <R(lambda) x, x>) on 20-point grids"};
}

// ---------------------------------------------------------------------------

std::vector<CheckSpec> build_checks(const Config& config) {
    std::vector<CheckSpec> out;
    auto add = [&](std::string name, double tol, CheckFn fn) { out.push_back({std::move(name), tol, std::move(fn)}); };

    add("green_surrogate", 1e-12, check_green_surrogate);
    for (const auto& d : config.models) {
        add("green_" + model_suffix(d.kind), 1e-8,
            [d](const Config&, std::mt19937_64& rng) { return check_green_model(d, rng); });
        if (d.kind == ModelKind::SturmLiouville) {
            add("green_sturm_liouville_order", 0.0,
                [d](const Config&, std::mt19937_64& rng) { return check_green_order(d, rng); });
        }
    }
    add("spectrum_dirichlet", 1e-3, check_spectrum_dirichlet);
    add("spectrum_f_zero", 1e-3, check_spectrum_f_zero);
    add("spectrum_lambda_bc", 1e-3, check_spectrum_lambda_bc);
    add("spectrum_lambda_bc_order", 0.0, check_spectrum_lambda_bc_order);
    add("spectrum_atom_branch", 1e-3, check_spectrum_atom_branch);
    add("spectral_cross_validation", 1.0, check_spectral_cross_validation);
    add("interlacing", 0.0, check_interlacing);
    add("compression_abs", 1e-4, check_compression_abs);
    add("compression_rate", 1.1, check_compression_rate);
    add("hermiticity", 1e-12, check_hermiticity);
    add("adjoint_sampling", 1e-12, check_adjoint_sampling);
    add("resolvent_conjugate_symmetry", 1e-12, check_resolvent_conjugate_symmetry);
    for (const auto& d : config.models) {
        add("resolvent_symmetry_" + model_suffix(d.kind), 1e-7,
            [d](const Config& c, std::mt19937_64& rng) { return check_resolvent_symmetry(d, c, rng); });
        add("boundary_condition_" + model_suffix(d.kind), 1e-8,
            [d](const Config& c, std::mt19937_64& rng) { return check_boundary_condition(d, c, rng); });
    }
    add("first_resolvent_identity", 1e-8, check_first_resolvent_identity);
    add("minimality", 0.0, check_minimality);
    add("cayley_roundtrip", 1e-12, check_cayley_roundtrip);
    add("cayley_disk", 1e-12, check_cayley_disk);
    add("stieltjes_inversion", 1e-6, check_stieltjes_inversion);
    add("asymptotics", 1e-8, check_asymptotics);
    for (const auto& d : config.models) {
        add("nevanlinna_" + model_suffix(d.kind), 1e-8,
            [d](const Config& c, std::mt19937_64& rng) { return check_nevanlinna(d, c, rng); });
    }
    return out;
}

CheckResult run_check(const CheckSpec& spec, const Config& config) {
    CheckResult r;
    r.name = spec.name;
    const auto it = config.tolerances.find(spec.name);
    r.tolerance = it == config.tolerances.end() ? spec.tolerance : it->second;
    std::mt19937_64 rng(config.seed ^ name_hash(spec.name));
    const auto start = std::chrono::steady_clock::now();
    try {
        const Outcome o = spec.run(config, rng);
        r.residual = o.residual;
        r.context = o.context;
    } catch (const Error& e) {
        r.residual = kInf;
        r.context = std::string("error ") + to_string(e.code()) + ": " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = r.residual <= r.tolerance;
    return r;
}

} // namespace

Config default_config() {
    Config c;
    c.models = {{ModelKind::FirstOrder, 64, Potential::uniform(0.0)},
                {ModelKind::SturmLiouville, 200, Potential::uniform(0.0)}};
    c.herglotz = {HerglotzData::make(1.0, 0.0), HerglotzData::make(0.0, 0.0, {{0.0, 1.0}}),
                  HerglotzData::make(1.0, 0.5, {{-1.0, 0.7}, {3.0, 1.2}})};
    return c;
}

std::vector<std::string> check_names(const Config& config) {
    std::vector<std::string> out;
    for (const auto& s : build_checks(config)) out.push_back(s.name);
    return out;
}

double default_tolerance(const std::string& check_name) {
    for (const auto& s : build_checks(default_config())) {
        if (s.name == check_name) return s.tolerance;
    }
    throw Error(ErrorCode::ConfigError, "unknown check '" + check_name + "'");
}

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config: top level must be an object");

    Config c = default_config();
    std::vector<std::string> problems;
    auto problem = [&](const std::string& field, const std::string& msg) { problems.push_back(field + ": " + msg); };

    for (const auto& [key, value] : j.items()) {
        (void)value;
        static const std::vector<std::string> known{"seed", "models", "herglotz", "tolerances",
                                                    "checks", "inject_defect", "parallel"};
        if (std::find(known.begin(), known.end(), key) == known.end()) problem(key, "unknown field");
    }
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned()) {
            c.seed = j["seed"].get<std::uint64_t>();
        } else {
            problem("seed", "must be a nonnegative integer");
        }
    }
    if (j.contains("models")) {
        c.models.clear();
        if (!j["models"].is_array() || j["models"].empty()) {
            problem("models", "must be a nonempty array of model descriptors");
        } else {
            for (std::size_t k = 0; k < j["models"].size(); ++k) {
                try {
                    auto d = io::model_from_json(j["models"][k].dump());
                    const bool dup = std::any_of(c.models.begin(), c.models.end(),
                                                 [&](const auto& m) { return m.kind == d.kind; });
                    if (dup) problem("models[" + std::to_string(k) + "]", "model kind listed twice");
                    ode::make_model(d);
                    c.models.push_back(std::move(d));
                } catch (const Error& e) {
                    problem("models[" + std::to_string(k) + "]", e.what());
                }
            }
        }
    }
    if (j.contains("herglotz")) {
        c.herglotz.clear();
        if (!j["herglotz"].is_array()) {
            problem("herglotz", "must be an array of Herglotz data objects");
        } else {
            for (std::size_t k = 0; k < j["herglotz"].size(); ++k) {
                try {
                    auto fd = io::herglotz_from_json(j["herglotz"][k].dump());
                    if (fd.is_infinity()) {
                        problem("herglotz[" + std::to_string(k) + "]",
                                "f = inf is always included; list finite data only");
                    } else {
                        c.herglotz.push_back(std::move(fd));
                    }
                } catch (const Error& e) {
                    problem("herglotz[" + std::to_string(k) + "]", e.what());
                }
            }
            if (j["herglotz"].empty()) problem("herglotz", "list must not be empty");
        }
    }
    const auto names = check_names(c);
    auto known_check = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) {
            problem("tolerances", "must be an object mapping check names to numbers");
        } else {
            for (const auto& [key, value] : j["tolerances"].items()) {
                if (!known_check(key)) {
                    problem("tolerances." + key, "unknown check");
                } else if (!value.is_number() || value.get<double>() < 0.0) {
                    problem("tolerances." + key, "must be a nonnegative number");
                } else {
                    c.tolerances[key] = value.get<double>();
                }
            }
        }
    }
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) {
            problem("checks", "must be an array of check names");
        } else {
            for (const auto& v : j["checks"]) {
                if (!v.is_string() || !known_check(v.get<std::string>())) {
                    problem("checks", "unknown check " + v.dump());
                } else {
                    c.checks.push_back(v.get<std::string>());
                }
            }
        }
    }
    if (j.contains("inject_defect") && !j["inject_defect"].is_null()) {
        if (!j["inject_defect"].is_string() || j["inject_defect"].get<std::string>() != "nonhermitian") {
            problem("inject_defect", "only \"nonhermitian\" is supported");
        } else {
            c.inject_defect = "nonhermitian";
        }
    }
    if (j.contains("parallel")) {
        if (!j["parallel"].is_boolean()) {
            problem("parallel", "must be a boolean");
        } else {
            c.parallel = j["parallel"].get<bool>();
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid config:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw Error(ErrorCode::ConfigError, msg);
    }
    return c;
}

Report run_suite(const Config& config) {
    if (config.herglotz.empty()) {
        throw Error(ErrorCode::ConfigError, "config: herglotz: list must not be empty");
    }
    if (config.models.empty()) {
        throw Error(ErrorCode::ConfigError, "config: models: list must not be empty");
    }
    std::vector<CheckSpec> selected;
    for (auto& s : build_checks(config)) {
        if (config.checks.empty() ||
            std::find(config.checks.begin(), config.checks.end(), s.name) != config.checks.end()) {
            selected.push_back(std::move(s));
        }
    }
    if (!config.checks.empty() && selected.size() != config.checks.size()) {
        throw Error(ErrorCode::ConfigError, "config: checks: unknown or duplicate check names");
    }

    Report report;
    report.seed = config.seed;
    const auto start = std::chrono::steady_clock::now();
    if (config.parallel) {
        std::vector<std::future<CheckResult>> futures;
        for (const auto& s : selected) {
            futures.push_back(std::async(std::launch::async, [&s, &config] { return run_check(s, config); }));
        }
        for (auto& f : futures) report.checks.push_back(f.get());
    } else {
        for (const auto& s : selected) report.checks.push_back(run_check(s, config));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.pass = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& r) { return r.pass; });
    return report;
}

std::string report_text(const Report& report) {
    std::ostringstream os;
    std::size_t width = 0;
    for (const auto& r : report.checks) width = std::max(width, r.name.size());
    for (const auto& r : report.checks) {
        os << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << r.name
           << "  residual " << std::setw(11) << fmt(r.residual) << " tol " << std::setw(9) << fmt(r.tolerance)
           << std::right << std::fixed << std::setprecision(2) << std::setw(8) << r.seconds << " s  "
           << r.context << '\n';
        os.unsetf(std::ios::fixed);
    }
    const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const auto& r) { return !r.pass; });
    os << (report.pass ? "ALL PASS" : "FAILED") << ": " << report.checks.size() - failed << '/'
       << report.checks.size() << " checks passed, seed " << report.seed << ", " << std::fixed
       << std::setprecision(2) << report.seconds << " s\n";
    return os.str();
}

std::string report_json(const Report& report) {
    json j;
    j["pass"] = report.pass;
    j["seed"] = report.seed;
    j["seconds"] = report.seconds;
    j["checks"] = json::array();
    for (const auto& r : report.checks) {
        json c;
        c["name"] = r.name;
        c["residual"] = std::isfinite(r.residual) ? json(r.residual) : json(io::format_double(r.residual));
        c["tolerance"] = r.tolerance;
        c["verdict"] = r.pass ? "pass" : "fail";
        c["context"] = r.context;
        c["seconds"] = r.seconds;
        j["checks"].push_back(std::move(c));
    }
    return j.dump(2);
}

std::string report_csv(const Report& report) {
    std::ostringstream os;
    os << "check,residual,tolerance,verdict\n";
    for (const auto& r : report.checks) {
        os << r.name << ',' << io::format_double(r.residual) << ',' << io::format_double(r.tolerance) << ','
           << (r.pass ? "pass" : "fail") << '\n';
    }
    return os.str();
}

} // namespace saf::verify
