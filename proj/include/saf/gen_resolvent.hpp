#pragma once

// Generalized resolvents R_f(λ) computed from the boundary-value problem
//
//   A*y − λy = x,   Γ1y + f(λ)·Γ0y = 0   (Γ0y = 0 when f ≡ ∞),
//
// as y = y_p + c·u_λ with y_p a particular solution and u_λ the deficiency
// solution of the model.

#include "saf/herglotz.hpp"
#include "saf/ode_models.hpp"

#include <ostream>
#include <vector>

namespace saf::resolvent {

using ode::BoundaryFunction;
using ode::Function;
using ode::TripletSystem;

struct ResolventOutput {
    BoundaryFunction y;
    cplx c{};             // coefficient of the deficiency solution
    double residual_ode = 0.0;
    double residual_bc = 0.0;
};

// Negative-control switches for the test harness; defaults give the true resolvent.
struct ResolventOptions {
    bool conjugate_c = false;
};

ResolventOutput generalized_resolvent(const TripletSystem& model, const HerglotzData& fd, cplx lambda,
                                      const Function& x, const ResolventOptions& opts = {});
ResolventOutput generalized_resolvent(const TripletSystem& model, const HerglotzData& fd, cplx lambda,
                                      const BoundaryFunction& x, const ResolventOptions& opts = {});

// |⟨R_f(λ)x, y⟩ − ⟨x, R_g(λ̄)y⟩| with g = f unless given separately.
double resolvent_symmetry_residual(const TripletSystem& model, const HerglotzData& fd, cplx lambda,
                                   const Function& x, const Function& y_test);
double resolvent_symmetry_residual(const TripletSystem& model, const HerglotzData& fd_left,
                                   const HerglotzData& fd_right, cplx lambda, const Function& x,
                                   const Function& y_test);

// max(0, −min over the grid of Im⟨R_f(λ)x, x⟩).
double compression_herglotz_check(const TripletSystem& model, const HerglotzData& fd,
                                  const std::vector<cplx>& grid, const Function& x,
                                  const ResolventOptions& opts = {});

// ‖R(λ)x − R(μ)x − (λ − μ)R(λ)R(μ)x‖ in L².
double first_resolvent_identity_residual(const TripletSystem& model, const HerglotzData& fd,
                                         cplx lambda, cplx mu, const Function& x);

// One CSV row per sample: lambda_re,lambda_im,residual_ode,residual_bc,c_re,c_im.
struct ResolventRow {
    cplx lambda;
    ResolventOutput out;
};
void write_csv(std::ostream& os, const std::vector<ResolventRow>& rows);

} // namespace saf::resolvent
