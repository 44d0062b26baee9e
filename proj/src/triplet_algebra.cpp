#include "saf/triplet_algebra.hpp"

#include "saf/error.hpp"

#include <random>
#include <sstream>

namespace saf::triplet {

namespace {

void check_length(const FiniteTripletSystem& sys, const Vector& x, const char* what) {
    if (x.size() != sys.dim()) {
        std::ostringstream os;
        os << what << " has length " << x.size() << ", system dimension is " << sys.dim();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

Matrix functional_matrix(const FiniteTripletSystem& sys) {
    Matrix b(sys.dim(), 2);
    b.col(0) = sys.g0();
    b.col(1) = sys.g1();
    return b;
}

} // namespace

FiniteTripletSystem make_system_unchecked(const Matrix& S, const Vector& g0, const Vector& g1) {
    FiniteTripletSystem sys;
    sys.s_ = S;
    sys.g0_ = g0;
    sys.g1_ = g1;
    sys.t_ = S + 0.5 * (g0 * g1.adjoint() - g1 * g0.adjoint());
    return sys;
}

FiniteTripletSystem make_finite_system(const Matrix& S, const Vector& g0, const Vector& g1) {
    if (S.rows() != S.cols()) {
        throw Error(ErrorCode::InvalidData, "S must be square");
    }
    const auto n = S.rows();
    if (n < 3) {
        throw Error(ErrorCode::InvalidData,
                    "dimension must be at least 3 (ker Γ would be trivial)");
    }
    if (g0.size() != n || g1.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "g0 and g1 must match the dimension of S");
    }
    const double scale = std::max(1.0, S.norm());
    if ((S - S.adjoint()).norm() > 1e-13 * scale) {
        throw Error(ErrorCode::NotHermitian, "S is not Hermitian to 1e-13");
    }
    Matrix b(n, 2);
    b.col(0) = g0;
    b.col(1) = g1;
    Eigen::JacobiSVD<Matrix> svd(b);
    const auto& sv = svd.singularValues();
    if (!(sv(1) > 1e-10 * sv(0))) {
        throw Error(ErrorCode::DependentFunctionals,
                    "g0 and g1 are linearly dependent, Γ is not surjective");
    }
    return make_system_unchecked(S, g0, g1);
}

std::pair<cplx, cplx> gamma(const FiniteTripletSystem& sys, const Vector& x) {
    check_length(sys, x, "x");
    return {sys.g0().dot(x), sys.g1().dot(x)};
}

Vector gamma_preimage(const FiniteTripletSystem& sys, cplx c0, cplx c1) {
    // B*x = c with B = [g0 g1]; with B = QR the minimum-norm solution is
    // x = Q·R^{-*}·c.
    const Matrix b = functional_matrix(sys);
    Eigen::HouseholderQR<Matrix> qr(b);
    const Matrix r = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
    Eigen::Vector2cd c(c0, c1);
    const Eigen::Vector2cd z = r.adjoint().triangularView<Eigen::Lower>().solve(c);
    const Matrix q = qr.householderQ() * Matrix::Identity(sys.dim(), 2);
    return q * z;
}

Matrix kernel_domain_basis(const FiniteTripletSystem& sys) {
    const Matrix b = functional_matrix(sys);
    Eigen::HouseholderQR<Matrix> qr(b);
    const Matrix q = qr.householderQ();
    return q.rightCols(sys.dim() - 2);
}

double green_residual(const FiniteTripletSystem& sys, const Vector& x, const Vector& y) {
    check_length(sys, x, "x");
    check_length(sys, y, "y");
    const Vector tx = sys.T() * x;
    const Vector ty = sys.T() * y;
    const cplx lhs = y.dot(tx) - ty.dot(x);
    const auto [x0, x1] = gamma(sys, x);
    const auto [y0, y1] = gamma(sys, y);
    return std::abs(lhs - x1 * std::conj(y0) + x0 * std::conj(y1));
}

FiniteTripletSystem random_system(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&] { return cplx{u(rng), u(rng)}; };
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = draw();
        }
    }
    const Matrix s = 0.5 * (a + a.adjoint());
    Vector g0(n), g1(n);
    for (int i = 0; i < n; ++i) {
        g0(i) = draw();
        g1(i) = draw();
    }
    return make_finite_system(s, g0, g1);
}

} // namespace saf::triplet
