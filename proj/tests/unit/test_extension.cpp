#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "saf/error.hpp"
#include "saf/extension.hpp"
#include "saf/gen_resolvent.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace saf::ext;
using saf::cplx;
using saf::ErrorCode;
using saf::HerglotzData;

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const saf::Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

const Potential kZero = Potential::uniform(0.0);

// mpmath oracles, tests/oracles/compute_oracles.py.
const std::vector<double> kTanRoots{0.74017388439496704222, 11.734861829941968343,
                                    41.438807847570465811};
const std::vector<double> kAtomRoots{3.0766044066233629118, 22.296218300113467809};

double max_rel_error(const std::vector<double>& got, const std::vector<double>& want) {
    REQUIRE(got.size() >= want.size());
    double e = 0.0;
    for (std::size_t k = 0; k < want.size(); ++k) e = std::max(e, std::abs(got[k] - want[k]) / std::abs(want[k]));
    return e;
}

HerglotzData random_herglotz(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<saf::Atom> atoms;
    const int m = static_cast<int>(4.0 * u(rng));
    double t = -10.0 * u(rng);
    for (int j = 0; j < m; ++j) {
        t += 1.0 + 5.0 * u(rng);
        atoms.push_back({t, 0.1 + 3.0 * u(rng)});
    }
    const double h0 = u(rng) < 0.5 ? 0.0 : 2.0 * u(rng);
    return HerglotzData::make(h0, 4.0 * u(rng) - 2.0, atoms);
}

} // namespace

TEST_CASE("layouts and weights") {
    auto lin = assemble_extension(kZero, HerglotzData::make(1.0, 0.0), 40);
    CHECK(lin.layout.n_base == 39);
    CHECK(lin.layout.m == 0);
    CHECK(lin.layout.aug == 1);
    CHECK(lin.K.rows() == 40);

    auto inf = assemble_extension(kZero, HerglotzData::infinity(), 40);
    CHECK(inf.layout.total() == 39);
    CHECK(inf.layout.aug == 0);

    auto constant = assemble_extension(kZero, HerglotzData::make(0.0, 2.0), 40);
    CHECK(constant.layout.n_base == 40);
    CHECK(constant.layout.total() == 40);

    auto atom = assemble_extension(kZero, HerglotzData::make(0.0, 0.0, {{0.0, 1.0}}), 40);
    CHECK(atom.layout.n_base == 40);
    CHECK(atom.layout.m == 1);
    CHECK(atom.layout.aug == 0);

    auto w = assemble_extension(kZero, HerglotzData::make(2.5, 0.0, {{1.0, 0.3}}), 20);
    CHECK(w.M_full(21, 21) == doctest::Approx(1.0 / 2.5).epsilon(1e-15));
    CHECK(w.M_full(20, 20) == doctest::Approx(0.3).epsilon(1e-15));

    CHECK(code_of([] { assemble_extension(kZero, HerglotzData::make(1.0, 0.0), 15); }) ==
          ErrorCode::InvalidData);
}

TEST_CASE("random assemblies are Hermitian and positive definite") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 30; ++k) {
        auto fd = random_herglotz(rng);
        auto a = assemble_extension(Potential::sampled({0.0, 3.0, -1.0, 2.0}), fd, 16 + k);
        CHECK(hermiticity_defect(a) <= 1e-12);
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(a.M);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(a.layout.aug == (fd.h0() > 0.0 ? 1 : 0));
    }
}

TEST_CASE("canonical spectra") {
    auto inf = extension_eigs(assemble_extension(kZero, HerglotzData::infinity(), 200), 0.0, 120.0);
    REQUIRE(inf.eigenvalues.size() == 3);
    for (int k = 1; k <= 3; ++k) {
        CHECK(std::abs(inf.eigenvalues[k - 1] / (k * k * kPi * kPi) - 1.0) < 1e-3);
    }
    auto zero = extension_eigs(assemble_extension(kZero, HerglotzData::make(0.0, 0.0), 200), 0.0, 60.0);
    REQUIRE(zero.eigenvalues.size() == 2);
    for (int k = 1; k <= 2; ++k) {
        const double s = (k - 0.5) * kPi;
        CHECK(std::abs(zero.eigenvalues[k - 1] / (s * s) - 1.0) < 1e-3);
    }
    for (double r : inf.residuals) CHECK(r <= 1e-10 * 4.0 * 200.0);
}

TEST_CASE("lambda-dependent condition: tan s = 1/s") {
    std::vector<double> err;
    for (int n : {100, 200, 400}) {
        auto a = assemble_extension(kZero, HerglotzData::make(1.0, 0.0), n);
        auto s = extension_eigs(a, 0.0, 50.0);
        REQUIRE(s.eigenvalues.size() == 3);
        err.push_back(max_rel_error(s.eigenvalues, kTanRoots));
    }
    CHECK(err[1] < 1e-3);
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);

    // Interlacing between consecutive Dirichlet values.
    auto s = extension_eigs(assemble_extension(kZero, HerglotzData::make(1.0, 0.0), 200), 0.0, 50.0);
    for (int k = 1; k <= 3; ++k) {
        CHECK(s.eigenvalues[k - 1] > ((k - 1) * kPi) * ((k - 1) * kPi));
        CHECK(s.eigenvalues[k - 1] < (k * kPi) * (k * kPi));
    }
}

TEST_CASE("h0 = 0 with one atom") {
    const auto fd = HerglotzData::make(0.0, 0.0, {{0.0, 1.0}});
    auto s = extension_eigs(assemble_extension(kZero, fd, 200), 0.5, 60.0);
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(max_rel_error(s.eigenvalues, kAtomRoots) < 1e-3);
    auto m = saf::ode::model_sl(kZero, 200);
    auto roots = char_roots(*m, fd, 0.5, 60.0);
    REQUIRE(roots.size() == 2);
    CHECK(max_rel_error(roots, kAtomRoots) < 1e-7);
    CHECK(code_of([&] { char_roots(*m, fd, -1.0, 60.0); }) == ErrorCode::AtomInWindow);
}

TEST_CASE("char_roots examples") {
    auto m1 = saf::ode::model_first_order(64);
    auto r1 = char_roots(*m1, HerglotzData::infinity(), 1.0, 20.0);
    REQUIRE(r1.size() == 3);
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(r1[k - 1] - 2.0 * kPi * k) < 1e-9);

    auto m2 = saf::ode::model_sl(kZero, 200);
    auto r2 = char_roots(*m2, HerglotzData::make(0.0, 0.0), 0.0, 60.0);
    REQUIRE(r2.size() == 2);
    CHECK(std::abs(r2[0] - kPi * kPi / 4.0) < 1e-6);
    CHECK(std::abs(r2[1] - 9.0 * kPi * kPi / 4.0) < 1e-6);
}

TEST_CASE("spectral cross-validation") {
    auto m = saf::ode::model_sl(kZero, 200);
    struct Case {
        HerglotzData fd;
        double lo, hi;
    };
    const std::vector<Case> cases{{HerglotzData::make(1.0, 0.0), 0.0, 50.0},
                                  {HerglotzData::make(0.0, 0.0, {{0.0, 1.0}}), 0.5, 60.0},
                                  {HerglotzData::make(0.0, 2.0), -10.0, 60.0}};
    for (const auto& c : cases) {
        auto eig = extension_eigs(assemble_extension(kZero, c.fd, 200), c.lo, c.hi).eigenvalues;
        auto roots = char_roots(*m, c.fd, c.lo, c.hi);
        REQUIRE(eig.size() == roots.size());
        for (std::size_t k = 0; k < eig.size(); ++k) {
            CHECK(std::abs(eig[k] - roots[k]) <= std::max(1e-3 * std::abs(roots[k]), 1e-4));
        }
    }
}

TEST_CASE("extension resolvent") {
    auto inf = assemble_extension(kZero, HerglotzData::infinity(), 200);
    auto sinpi = [](double x) { return cplx{std::sin(kPi * x)}; };
    const Vector y = Resolver(inf, I).solve_load(base_load(inf, sinpi));
    const Vector base = split_blocks(inf, y).base;
    double err = 0.0;
    for (int k = 0; k <= 200; ++k) {
        err = std::max(err, std::abs(base(k) - std::sin(kPi * k / 200.0) / (kPi * kPi - I)));
    }
    CHECK(err < 1e-4);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (const auto& fd : {HerglotzData::make(1.0, 0.0, {{2.0, 1.0}}), HerglotzData::make(0.0, 1.0)}) {
        auto a = assemble_extension(kZero, fd, 60);
        RealVector xr(a.layout.total());
        for (auto& v : xr) v = g(rng);
        const Vector x = xr.cast<cplx>();
        const cplx lam{1.5, 0.7};
        const Vector y1 = extension_resolve(a, lam, x);
        const Vector y2 = extension_resolve(a, std::conj(lam), x);
        CHECK((y1.conjugate() - y2).norm() <= 1e-12 * y1.norm());
        const Vector r = (a.K.cast<cplx>() - lam * a.M.cast<cplx>()) * y1 - a.M.cast<cplx>() * x;
        CHECK(r.norm() <= 1e-10 * (a.M * xr).norm());
    }

    auto s = extension_eigs(inf, 0.0, 20.0);
    const Vector x = Vector::Ones(inf.layout.total());
    CHECK(code_of([&] { extension_resolve(inf, s.eigenvalues[0], x); }) == ErrorCode::NearEigenvalue);
    CHECK(code_of([&] { extension_resolve(inf, I, Vector::Ones(3)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("compression matches the boundary-value resolvent") {
    auto fine = saf::ode::model_sl(kZero, 800);
    auto sinpi = [](double x) { return cplx{std::sin(kPi * x)}; };
    CHECK(compression_match(assemble_extension(kZero, HerglotzData::infinity(), 200), *fine, I, sinpi) <= 1e-6);

    auto quad = [](double x) { return cplx{x * (1.0 - x)}; };
    auto wavy = [](double x) { return cplx{std::cos(2.0 * x), 0.5 * x}; };
    struct Case {
        HerglotzData fd;
        cplx lambda;
        saf::ode::Function x;
    };
    const std::vector<Case> cases{{HerglotzData::make(1.0, 0.0), cplx(1.0, 2.0), quad},
                                  {HerglotzData::make(0.0, 0.0, {{0.0, 1.0}}), 2.0 * I, wavy}};
    for (const auto& c : cases) {
        const double e100 = compression_match(assemble_extension(kZero, c.fd, 100), *fine, c.lambda, c.x);
        const double e200 = compression_match(assemble_extension(kZero, c.fd, 200), *fine, c.lambda, c.x);
        const double e400 = compression_match(assemble_extension(kZero, c.fd, 400), *fine, c.lambda, c.x);
        // C from the first two refinements bounds the third.
        const double cst = e100 * 100.0 * 100.0;
        CHECK(e400 <= 1.1 * cst / (400.0 * 400.0));
        CHECK(std::log2(e100 / e200) > 1.9);
        CHECK(e400 <= 1e-4);
    }
}

TEST_CASE("minimality rank") {
    const std::vector<cplx> lambdas{I, 2.0 * I, cplx(1.0, 1.0)};
    auto lin = assemble_extension(kZero, HerglotzData::make(1.0, 0.0), 30);
    CHECK(minimality_rank(lin, lambdas, hat_functions(lin)) == lin.layout.total());
    auto two = assemble_extension(kZero, HerglotzData::make(1.0, 0.5, {{-1.0, 0.7}, {3.0, 1.2}}), 30);
    CHECK(two.layout.total() == 32);
    CHECK(minimality_rank(two, lambdas, hat_functions(two)) == 32);
    auto constant = assemble_extension(kZero, HerglotzData::make(0.0, 2.0), 30);
    CHECK(minimality_rank(constant, lambdas, hat_functions(constant)) == constant.layout.n_base);

    // Negative control: cut the coupling of one atom; its block then reduces
    // the pencil and the resolvent span misses it.
    auto cut = two;
    const int j = cut.layout.n_base;
    for (int i = 0; i < cut.K.rows(); ++i) {
        if (i == j) continue;
        cut.K(i, j) = 0.0;
        cut.K(j, i) = 0.0;
    }
    CHECK(minimality_rank(cut, lambdas, hat_functions(cut)) == 31);
}

TEST_CASE("eigenvector correspondence") {
    auto lin = HerglotzData::make(1.0, 0.0);
    std::vector<double> bc;
    for (int n : {100, 200}) {
        auto a = assemble_extension(kZero, lin, n);
        auto s = extension_eigs(a, 0.0, 5.0);
        REQUIRE(s.eigenvalues.size() == 1);
        auto r = eigenvector_correspondence(a, s.eigenvalues[0], s.eigenvectors.col(0).cast<cplx>());
        CHECK(r.aug <= 1e-12);
        CHECK(r.ode < 1e-3);
        bc.push_back(r.bc);
    }
    CHECK(std::log2(bc[0] / bc[1]) > 1.9);

    // Eigenvalue next to an atom: the atom block follows x1 = Γ0x0/(t − λ).
    auto atom = HerglotzData::make(0.0, 0.0, {{5.0, 0.01}});
    auto a = assemble_extension(kZero, atom, 200);
    auto s = extension_eigs(a, 0.0, 20.0);
    bool checked = false;
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        if (std::abs(s.eigenvalues[k] - 5.0) < 1.0) {
            auto r = eigenvector_correspondence(a, s.eigenvalues[k], s.eigenvectors.col(k).cast<cplx>());
            CHECK(r.atoms <= 1e-8);
            checked = true;
        }
    }
    CHECK(checked);
    CHECK(code_of([&] {
              eigenvector_correspondence(a, 5.0 + 1e-8, Vector::Ones(a.layout.total()));
          }) == ErrorCode::AtomCollision);
}

TEST_CASE("exports") {
    auto a = assemble_extension(kZero, HerglotzData::make(1.0, 0.0), 16);
    std::ostringstream mm;
    write_matrix_market(mm, a.M);
    CHECK(mm.str().rfind("%%MatrixMarket matrix coordinate real general\n16 16 ", 0) == 0);
    std::ostringstream csv;
    write_spectrum_csv(csv, extension_eigs(a, 0.0, 20.0));
    CHECK(csv.str().rfind("index,eigenvalue,residual\n0,0.74", 0) == 0);
}
