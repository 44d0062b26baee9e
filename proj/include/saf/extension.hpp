#pragma once

// Discretized extension Ã on 𝔥 ⊕ L²(dσ) ⊕ ℂ for the Sturm–Liouville model,
// realized as a real symmetric pencil (K, M) with piecewise-linear elements
// on a uniform mesh of [0,1] and y(1) = 0 built in.
//
// Weak form, with a(x,v) = ∫x'v̄' + q·x·v̄ and c_j = t_j/(1 + t_j²):
//
//   K(x̃,ṽ) = a(x0,v0) − (h − Σ w_j c_j)·x0(0)·v̄0(0) + Σ w_j t_j x1j v̄1j
//            − Σ w_j (x1j·v̄0(0) + x0(0)·v̄1j)
//   M(x̃,ṽ) = ⟨x0,v0⟩ + Σ w_j x1j v̄1j + x2·v̄2/h0
//
// The Γ1 terms cancel between the base action and the ℂ row, so the
// boundary condition is natural. For h0 > 0 the node value x0(0) is not a
// free coordinate: it equals −x2/h0, and the pencil lives on
// (nodes 1..N−1, atoms, x2). For f ≡ ∞ the node at 0 is removed instead.

#include "saf/herglotz.hpp"
#include "saf/ode_models.hpp"

#include <Eigen/Dense>

#include <memory>
#include <ostream>
#include <vector>

namespace saf::ext {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using ode::Function;
using ode::Potential;

struct Layout {
    int n_base = 0;
    int m = 0;
    int aug = 0;
    int total() const { return n_base + m + aug; }
};

struct ExtensionAssembly {
    Layout layout;
    int n_mesh = 0;
    Potential q;
    HerglotzData fd = HerglotzData::infinity();

    RealMatrix K;  // pencil coordinates
    RealMatrix M;
    // Full coordinates are (node values 0..N−1, atom values, x2 if h0 > 0);
    // full = E·pencil.
    RealMatrix E;
    RealMatrix M_full;
    // Row giving Γ0x0 = x0(0) in pencil coordinates.
    RealVector gamma0_row;

    int n_full() const { return static_cast<int>(E.rows()); }
    double mesh_width() const { return 1.0 / n_mesh; }
};

ExtensionAssembly assemble_extension(const Potential& q, const HerglotzData& fd, int n_mesh);

// Split of a pencil vector into the paper's blocks.
struct Blocks {
    Vector base;   // node values at x_0..x_N (x_N = 1 carries 0)
    Vector atoms;  // x1j
    cplx aug{};    // x2, or 0 when h0 = 0
};
Blocks split_blocks(const ExtensionAssembly& assembly, const Vector& v);
Function base_function(const ExtensionAssembly& assembly, const Vector& base_nodes);

struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::vector<double> residuals;  // ‖Kv − λMv‖/‖v‖
    RealMatrix eigenvectors;        // columns, M-orthonormal
};

SpectrumResult extension_eigs(const ExtensionAssembly& assembly, double lo, double hi);

// Real roots of χ_f in [lo, hi]: sign scan of Re(p(λ)·χ_f(λ)) with the model's
// real-axis normalizer p, refined by bisection to width ≤ tol.
std::vector<double> char_roots(const ode::TripletSystem& model, const HerglotzData& fd, double lo,
                               double hi, double tol = 1e-10, int scan_steps = 1024);

// Load M·(x, 0, 0) in pencil coordinates, integrated exactly for P1 test
// functions up to the quadrature of x.
Vector base_load(const ExtensionAssembly& assembly, const Function& x);

// Factorization of K − λM, reused across right-hand sides.
class Resolver {
public:
    Resolver(const ExtensionAssembly& assembly, cplx lambda);
    Vector solve_load(const Vector& load) const;
    // (K − λM)ỹ = M·x̃.
    Vector solve(const Vector& xtilde) const;
    double min_singular_value() const { return sigma_min_; }

private:
    RealMatrix M_;
    double sigma_min_ = 0.0;
    Eigen::PartialPivLU<Matrix> lu_;
};

Vector extension_resolve(const ExtensionAssembly& assembly, cplx lambda, const Vector& xtilde);

// L² distance between the base block of (Ã − λ)⁻¹(x,0,0) and R_f(λ)x from
// the boundary-value solver on `model`, taken over the mesh nodes with the
// composite Simpson weights.
double compression_match(const ExtensionAssembly& assembly, const ode::TripletSystem& model, cplx lambda,
                         const Function& x);

// Hat functions of the free base nodes 0..N−1.
std::vector<Function> hat_functions(const ExtensionAssembly& assembly);

// Numerical rank (singular values above cutoff·largest) of the M-weighted
// matrix of resolvent images (Ã − λ_i)⁻¹(x_j, 0, 0).
int minimality_rank(const ExtensionAssembly& assembly, const std::vector<cplx>& lambdas,
                    const std::vector<Function>& xs, double cutoff = 1e-8);

struct CorrespondenceResidual {
    double ode = 0.0;    // ‖y0 − α·u_λ‖/‖y0‖ for the best multiple of u_λ
    double bc = 0.0;     // |α·χ_f(λ)| with ‖y0‖ = 1
    double atoms = 0.0;  // max_j |x1j·(t_j − λ) − Γ0x0|
    double aug = 0.0;    // |x2 + h0·Γ0x0|
};

CorrespondenceResidual eigenvector_correspondence(const ExtensionAssembly& assembly, double lambda,
                                                  const Vector& v);

// ‖A − Aᵀ‖/‖A‖ for the stored pencil.
double hermiticity_defect(const ExtensionAssembly& assembly);

// Text exports.
void write_matrix_market(std::ostream& os, const RealMatrix& a);
void write_spectrum_csv(std::ostream& os, const SpectrumResult& s);

} // namespace saf::ext
