#include "saf/smooth_functions.hpp"

#include <cmath>
#include <numbers>

namespace saf::ode {

namespace {
constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

cplx horner(const std::vector<cplx>& c, double x) {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<cplx> derivative(const std::vector<cplx>& c) {
    std::vector<cplx> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}
} // namespace

TestFunction trig_polynomial(std::vector<cplx> coeffs) {
    const int deg = (static_cast<int>(coeffs.size()) - 1) / 2;
    auto make = [coeffs, deg](int order) {
        return [coeffs, deg, order](double x) {
            cplx acc = 0.0;
            for (int k = -deg; k <= deg; ++k) {
                const cplx w = kI * kPi * static_cast<double>(k);
                acc += coeffs[k + deg] * std::pow(w, order) * std::exp(w * x);
            }
            return acc;
        };
    };
    return {make(0), make(1), make(2)};
}

TestFunction polynomial_vanishing_at_one(std::vector<cplx> coeffs, cplx sine_amp, int sine_freq) {
    // (1 − x)p(x): first derivative −p + (1 − x)p', second −2p' + (1 − x)p''.
    const auto d1 = derivative(coeffs);
    const auto d2 = derivative(d1);
    const double w = kPi * sine_freq;
    TestFunction f;
    f.value = [=](double x) { return (1.0 - x) * horner(coeffs, x) + sine_amp * std::sin(w * x); };
    f.d1 = [=](double x) {
        return -horner(coeffs, x) + (1.0 - x) * horner(d1, x) + sine_amp * w * std::cos(w * x);
    };
    f.d2 = [=](double x) {
        return -2.0 * horner(d1, x) + (1.0 - x) * horner(d2, x) - sine_amp * w * w * std::sin(w * x);
    };
    return f;
}

TestFunction random_trig_polynomial(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> c(2 * degree + 1);
    for (auto& v : c) v = cplx(u(rng), u(rng)) / static_cast<double>(2 * degree + 1);
    return trig_polynomial(std::move(c));
}

TestFunction random_vanishing_polynomial(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> c(degree + 1);
    for (auto& v : c) v = cplx(u(rng), u(rng)) / static_cast<double>(degree + 1);
    const cplx amp = cplx(u(rng), u(rng)) / static_cast<double>(degree + 1);
    return polynomial_vanishing_at_one(std::move(c), amp, 1);
}

Function sine_mode(int k) {
    return [k](double x) { return cplx(std::sin(kPi * k * x), 0.0); };
}

Function polynomial(std::vector<cplx> c) {
    return [c = std::move(c)](double x) { return horner(c, x); };
}

} // namespace saf::ode
