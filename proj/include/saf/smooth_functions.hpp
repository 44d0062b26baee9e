#pragma once

// Smooth random test functions with analytic derivatives.

#include "saf/ode_models.hpp"

#include <random>
#include <vector>

namespace saf::ode {

// x ↦ Σ_{k=-K..K} c_k·e^{iπkx}; odd k make the function non-periodic on [0,1]
// so both boundary functionals are exercised.
TestFunction trig_polynomial(std::vector<cplx> coeffs);

// x ↦ (1 − x)·Σ_k a_k x^k + b·sin(πmx), which vanishes at x = 1.
TestFunction polynomial_vanishing_at_one(std::vector<cplx> coeffs, cplx sine_amp = 0.0, int sine_freq = 1);

// Coefficients uniform in the unit square, degree ≤ 5.
TestFunction random_trig_polynomial(std::mt19937_64& rng, int degree = 5);
// Coefficients and sine amplitude are scaled by 1/(degree + 1).
TestFunction random_vanishing_polynomial(std::mt19937_64& rng, int degree = 4);

// Plain callables used as right-hand sides.
Function sine_mode(int k);              // sin(kπx)
Function polynomial(std::vector<cplx> c);  // Σ c_k x^k

} // namespace saf::ode
