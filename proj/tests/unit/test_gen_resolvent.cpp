#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "saf/error.hpp"
#include "saf/gen_resolvent.hpp"
#include "saf/smooth_functions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace saf::resolvent;
using saf::cplx;
using saf::ErrorCode;
using saf::HerglotzData;
using saf::ode::model_first_order;
using saf::ode::model_sl;
using saf::ode::Potential;

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

Function one() {
    return [](double) { return cplx{1.0}; };
}

Function sin_pi() {
    return [](double x) { return cplx{std::sin(kPi * x)}; };
}

cplx random_upper(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-30.0, 30.0);
    std::uniform_real_distribution<double> im(0.2, 10.0);
    std::bernoulli_distribution flip(0.5);
    cplx z{re(rng), im(rng)};
    return flip(rng) ? std::conj(z) : z;
}

} // namespace

TEST_CASE("first-order model, f = inf, constant right-hand side") {
    auto m = model_first_order(64);
    for (cplx lam : {cplx(1.0, 1.0), cplx(-3.0, 0.5), cplx(2.5, 0.0)}) {
        auto r = generalized_resolvent(*m, HerglotzData::infinity(), lam, one());
        double err = 0.0;
        for (auto v : r.y.values) err = std::max(err, std::abs(v + 1.0 / lam));
        CHECK(err < 1e-12);
        // y(0) = 0 normalization of the particular solution puts c at −1/λ.
        CHECK(std::abs(r.c + 1.0 / lam) < 1e-12);
        CHECK(r.residual_bc < 1e-12);
    }
}

TEST_CASE("Sturm-Liouville, f = inf, Dirichlet eigenfunction") {
    auto m = model_sl(Potential::uniform(0.0), 200);
    auto r = generalized_resolvent(*m, HerglotzData::infinity(), I, sin_pi());
    double err = 0.0;
    for (std::size_t k = 0; k < r.y.nodes.size(); ++k) {
        const cplx exact = std::sin(kPi * r.y.nodes[k]) / (kPi * kPi - I);
        err = std::max(err, std::abs(r.y.values[k] - exact));
    }
    CHECK(err < 1e-8);
    CHECK(r.residual_bc < 1e-12);
}

TEST_CASE("first-order model, f = lambda, closed-form coefficient") {
    auto m = model_first_order(64);
    auto r = generalized_resolvent(*m, HerglotzData::make(1.0, 0.0), I, one());
    // mpmath oracle (tests/oracles): with y = −1/λ + C·e^{iλx}, C = −0.75984…i;
    // our normalization carries c = C − 1/λ.
    const cplx c_expected{0.0, 0.2401563852036804241};
    CHECK(std::abs(r.c - c_expected) < 1e-12);
    const double chi_i = 0.5 * (1.0 + std::exp(-1.0)) + (1.0 - std::exp(-1.0));
    CHECK(std::abs(chi_i - 1.316060279414278839) < 1e-15);
    CHECK(r.residual_bc < 1e-12);
}

TEST_CASE("characteristic zero is reported") {
    auto m1 = model_first_order(64);
    CHECK(code_of([&] { generalized_resolvent(*m1, HerglotzData::infinity(), 2.0 * kPi, one()); }) ==
          ErrorCode::CharacteristicZero);
    auto fd = HerglotzData::make(0.0, 0.0, {{1.0, 1.0}});
    CHECK(code_of([&] { generalized_resolvent(*m1, fd, 1.0, one()); }) == ErrorCode::PoleAtAtom);
}

TEST_CASE("boundary-condition and ODE residuals on random samples") {
    std::mt19937_64 rng(31);
    const std::vector<HerglotzData> fds{HerglotzData::infinity(), HerglotzData::make(0.0, 2.0),
                                        HerglotzData::make(1.0, 0.5, {{-1.0, 0.7}, {3.0, 1.2}})};
    auto m1 = model_first_order(64);
    auto m2 = model_sl(Potential::sampled({0.0, 1.0, -0.5, 2.0}), 200);
    for (int k = 0; k < 50; ++k) {
        const auto& fd = fds[k % fds.size()];
        const cplx lam = random_upper(rng);
        auto x1 = saf::ode::random_trig_polynomial(rng);
        auto r1 = generalized_resolvent(*m1, fd, lam, x1.value);
        const double f1 = fd.is_infinity() ? 0.0 : std::abs(saf::eval(fd, lam).value);
        CHECK(r1.residual_bc <= 1e-8 * (1.0 + f1) * m1->norm(m1->sample(x1.value)));
        CHECK(r1.residual_ode <= 1e-8 * (1.0 + std::abs(lam)) * (1.0 + m1->norm(r1.y)));

        auto x2 = saf::ode::random_vanishing_polynomial(rng);
        auto r2 = generalized_resolvent(*m2, fd, lam, x2.value);
        CHECK(r2.residual_bc <= 1e-8 * (1.0 + f1) * m2->norm(m2->sample(x2.value)));
    }
}

TEST_CASE("ODE residual decreases at the integrator's order") {
    auto fd = HerglotzData::make(1.0, 0.0);
    const cplx lam{3.0, 1.0};
    auto g = saf::ode::polynomial({1.0, cplx(0.0, 2.0), -1.0});
    auto coarse = model_sl(Potential::uniform(0.0), 50);
    auto fine = model_sl(Potential::uniform(0.0), 100);
    const double r50 = generalized_resolvent(*coarse, fd, lam, g).residual_ode;
    const double r100 = generalized_resolvent(*fine, fd, lam, g).residual_ode;
    CHECK(r100 < 1e-6);
    CHECK(std::log2(r50 / r100) > 3.0);
}

TEST_CASE("resolvent symmetry") {
    auto m2 = model_sl(Potential::uniform(0.0), 200);
    CHECK(resolvent_symmetry_residual(*m2, HerglotzData::infinity(), I, sin_pi(), sin_pi()) <= 1e-8);

    auto m1 = model_first_order(64);
    auto lin = HerglotzData::make(1.0, 0.0);
    std::mt19937_64 rng(12);
    for (int k = 0; k < 20; ++k) {
        auto x = saf::ode::random_trig_polynomial(rng);
        auto y = saf::ode::random_trig_polynomial(rng);
        CHECK(resolvent_symmetry_residual(*m1, lin, cplx(1.0, 2.0), x.value, y.value) <= 1e-7);
        const cplx lam = random_upper(rng);
        auto xs = saf::ode::random_vanishing_polynomial(rng);
        auto ys = saf::ode::random_vanishing_polynomial(rng);
        CHECK(resolvent_symmetry_residual(*m2, lin, lam, xs.value, ys.value) <= 1e-7);
        CHECK(resolvent_symmetry_residual(*m2, HerglotzData::infinity(), lam, xs.value, ys.value) <= 1e-7);
    }

    // Negative control: mismatched boundary data on the two sides.
    auto shifted = HerglotzData::make(1.0, 1.0);
    CHECK(resolvent_symmetry_residual(*m1, lin, shifted, cplx(1.0, 2.0), one(), one()) > 1e-3);
}

TEST_CASE("compression is Herglotz") {
    auto m2 = model_sl(Potential::uniform(0.0), 200);
    const std::vector<cplx> grid{I, 2.0 * I, cplx(1.0, 1.0)};
    CHECK(compression_herglotz_check(*m2, HerglotzData::infinity(), grid, sin_pi()) <= 1e-10);

    auto m1 = model_first_order(64);
    std::vector<cplx> grid20;
    for (int k = 0; k < 20; ++k) grid20.emplace_back(-10.0 + k, 0.05 + 0.25 * (k % 4));
    auto lin = HerglotzData::make(1.0, 0.0);
    CHECK(compression_herglotz_check(*m1, lin, grid20, one()) <= 1e-8);

    ResolventOptions bad;
    bad.conjugate_c = true;
    CHECK(compression_herglotz_check(*m1, lin, grid20, one(), bad) > 1e-3);
}

TEST_CASE("first resolvent identity holds exactly for canonical f") {
    auto m2 = model_sl(Potential::uniform(0.0), 200);
    auto m1 = model_first_order(64);
    auto x = saf::ode::polynomial({0.0, 1.0, -1.0});
    const cplx lam{2.0, 1.0};
    const cplx mu{-1.0, 3.0};
    CHECK(first_resolvent_identity_residual(*m2, HerglotzData::infinity(), lam, mu, x) < 1e-8);
    CHECK(first_resolvent_identity_residual(*m2, HerglotzData::make(0.0, 2.0), lam, mu, x) < 1e-8);
    CHECK(first_resolvent_identity_residual(*m1, HerglotzData::make(0.0, 2.0), lam, mu, one()) < 1e-10);
    CHECK(first_resolvent_identity_residual(*m2, HerglotzData::make(1.0, 0.0), lam, mu, x) > 1e-4);
    CHECK(first_resolvent_identity_residual(*m1, HerglotzData::make(1.0, 0.0), lam, mu, one()) > 1e-4);
}

TEST_CASE("CSV rows") {
    auto m = model_first_order(64);
    std::vector<ResolventRow> rows;
    rows.push_back({I, generalized_resolvent(*m, HerglotzData::make(1.0, 0.0), I, one())});
    std::ostringstream os;
    write_csv(os, rows);
    const auto s = os.str();
    CHECK(s.rfind("lambda_re,lambda_im,residual_ode,residual_bc,c_re,c_im\n", 0) == 0);
    CHECK(s.find("\n0,1,") != std::string::npos);
}
