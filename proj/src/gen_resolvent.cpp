#include "saf/gen_resolvent.hpp"

#include "saf/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace saf::resolvent {

namespace {

cplx bc_value(const TripletSystem& model, const BoundaryFunction& y, const HerglotzData& fd,
              cplx f_value) {
    if (fd.is_infinity()) return model.gamma0(y);
    return model.gamma1(y) + f_value * model.gamma0(y);
}

} // namespace

ResolventOutput generalized_resolvent(const TripletSystem& model, const HerglotzData& fd, cplx lambda,
                                      const Function& x, const ResolventOptions& opts) {
    const cplx f_value = fd.is_infinity() ? cplx{0.0} : eval(fd, lambda).value;

    const BoundaryFunction u = model.deficiency_solution(lambda);
    const BoundaryFunction yp = model.particular_solution(lambda, x);

    const cplx u0 = model.gamma0(u);
    const cplx u1 = model.gamma1(u);
    const cplx chi = fd.is_infinity() ? u0 : u1 + f_value * u0;
    const double scale = std::max(std::abs(u1), fd.is_infinity() ? std::abs(u0) : std::abs(f_value * u0));
    if (!(std::abs(chi) >= 1e-12 * scale) || chi == 0.0) {
        std::ostringstream os;
        os << "characteristic function vanishes at lambda = " << lambda
           << "; lambda is an eigenvalue of the extension";
        throw Error(ErrorCode::CharacteristicZero, os.str());
    }

    ResolventOutput out;
    out.c = -bc_value(model, yp, fd, f_value) / chi;
    if (opts.conjugate_c) out.c = std::conj(out.c);
    out.y = yp + out.c * u;
    out.residual_ode = model.ode_residual(lambda, out.y, x);
    out.residual_bc = std::abs(bc_value(model, out.y, fd, f_value));
    return out;
}

ResolventOutput generalized_resolvent(const TripletSystem& model, const HerglotzData& fd, cplx lambda,
                                      const BoundaryFunction& x, const ResolventOptions& opts) {
    return generalized_resolvent(model, fd, lambda, x.as_function(), opts);
}

double resolvent_symmetry_residual(const TripletSystem& model, const HerglotzData& fd, cplx lambda,
                                   const Function& x, const Function& y_test) {
    return resolvent_symmetry_residual(model, fd, fd, lambda, x, y_test);
}

double resolvent_symmetry_residual(const TripletSystem& model, const HerglotzData& fd_left,
                                   const HerglotzData& fd_right, cplx lambda, const Function& x,
                                   const Function& y_test) {
    const auto left = generalized_resolvent(model, fd_left, lambda, x);
    const auto right = generalized_resolvent(model, fd_right, std::conj(lambda), y_test);
    const cplx a = model.inner(left.y, y_test);
    const cplx b = std::conj(model.inner(right.y, x));
    return std::abs(a - b);
}

double compression_herglotz_check(const TripletSystem& model, const HerglotzData& fd,
                                  const std::vector<cplx>& grid, const Function& x,
                                  const ResolventOptions& opts) {
    double worst = 0.0;
    for (const cplx lambda : grid) {
        if (!(lambda.imag() > 0.0)) {
            throw Error(ErrorCode::InvalidData, "compression grid must lie in the open upper half-plane");
        }
        const auto r = generalized_resolvent(model, fd, lambda, x, opts);
        worst = std::max(worst, -model.inner(r.y, x).imag());
    }
    return worst;
}

double first_resolvent_identity_residual(const TripletSystem& model, const HerglotzData& fd,
                                         cplx lambda, cplx mu, const Function& x) {
    const auto r_lambda = generalized_resolvent(model, fd, lambda, x);
    const auto r_mu = generalized_resolvent(model, fd, mu, x);
    const auto r_both = generalized_resolvent(model, fd, lambda, r_mu.y.as_function());
    const BoundaryFunction diff = r_lambda.y - r_mu.y - (lambda - mu) * r_both.y;
    return model.norm(diff);
}

void write_csv(std::ostream& os, const std::vector<ResolventRow>& rows) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "lambda_re,lambda_im,residual_ode,residual_bc,c_re,c_im\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.lambda.real() << ',' << r.lambda.imag() << ',' << r.out.residual_ode << ','
           << r.out.residual_bc << ',' << r.out.c.real() << ',' << r.out.c.imag() << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

} // namespace saf::resolvent
