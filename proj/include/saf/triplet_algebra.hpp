#pragma once

// Finite-dimensional boundary-triplet surrogate.
//
// Given a Hermitian S and two linearly independent vectors g0, g1 the matrix
//
//   T = S + ½(g0·g1* − g1·g0*)
//
// satisfies T − T* = g0·g1* − g1·g0*, so with Γ0 x = ⟨x, g0⟩, Γ1 x = ⟨x, g1⟩
// Green's identity ⟨Tx, y⟩ − ⟨x, Ty⟩ = Γ1x·conj(Γ0y) − Γ0x·conj(Γ1y) holds
// exactly. These systems only exercise the Γ-algebra; they cannot carry the
// deficiency-(1,1) structure that extensions need, so no extension is ever
// built from them.
//
// Inner products are linear in the first argument: ⟨x, y⟩ = y*·x.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace saf::triplet {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

class FiniteTripletSystem {
public:
    int dim() const { return static_cast<int>(s_.rows()); }
    const Matrix& S() const { return s_; }
    const Matrix& T() const { return t_; }
    const Vector& g0() const { return g0_; }
    const Vector& g1() const { return g1_; }

private:
    friend FiniteTripletSystem make_finite_system(const Matrix&, const Vector&, const Vector&);
    friend FiniteTripletSystem make_system_unchecked(const Matrix&, const Vector&, const Vector&);

    Matrix s_;
    Matrix t_;
    Vector g0_;
    Vector g1_;
};

// Throws InvalidData for n < 3 or non-square input, NotHermitian when
// ‖S − S*‖ > 1e-13·max(1, ‖S‖), DependentFunctionals when the smallest
// singular value of [g0 g1] is ≤ 1e-10 times the largest, DimensionMismatch
// for vectors of the wrong length.
FiniteTripletSystem make_finite_system(const Matrix& S, const Vector& g0, const Vector& g1);

// Builds T from S without any validation (test harnesses inject defects with it).
FiniteTripletSystem make_system_unchecked(const Matrix& S, const Vector& g0, const Vector& g1);

std::pair<cplx, cplx> gamma(const FiniteTripletSystem& sys, const Vector& x);

// Minimum-norm x with gamma(sys, x) = (c0, c1).
Vector gamma_preimage(const FiniteTripletSystem& sys, cplx c0, cplx c1);

// Orthonormal basis (as columns) of {x : Γ0x = Γ1x = 0}; n − 2 columns.
Matrix kernel_domain_basis(const FiniteTripletSystem& sys);

// |⟨Tx,y⟩ − ⟨x,Ty⟩ − Γ1x·conj(Γ0y) + Γ0x·conj(Γ1y)|
double green_residual(const FiniteTripletSystem& sys, const Vector& x, const Vector& y);

// Reproducible random system of dimension n (entries uniform in [-1, 1]).
FiniteTripletSystem random_system(int n, std::uint64_t seed);

} // namespace saf::triplet
