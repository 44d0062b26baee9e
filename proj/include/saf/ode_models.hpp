#pragma once

// Model operators with deficiency indices (1,1) and their boundary triplets.
//
//   first_order      A* = −i d/dx on (0,1), no boundary condition,
//                    Γ0 y = y(0) − y(1),  Γ1 y = (i/2)(y(0) + y(1)).
//   sturm_liouville  A* = −d²/dx² + q on (0,1) with y(1) = 0 kept fixed,
//                    Γ0 y = y(0),  Γ1 y = y'(0).
//
// Both pairs satisfy ⟨A*x,y⟩ − ⟨x,A*y⟩ = Γ1x·conj(Γ0y) − Γ0x·conj(Γ1y); the
// test suite checks this numerically rather than taking it on trust.

#include "saf/herglotz.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace saf::ode {

using cplx = std::complex<double>;
using Function = std::function<cplx(double)>;

// A smooth function together with its first two derivatives.
struct TestFunction {
    Function value;
    Function d1;
    Function d2;
};

struct BoundaryData {
    cplx y0{};   // y(0)
    cplx dy0{};  // y'(0)
    cplx y1{};   // y(1)
    cplx dy1{};  // y'(1)
};

enum class Interpolation { Hermite, Lagrange4, Barycentric };

// Samples of an element of 𝔇(A*) on the owning model's nodes. Boundary data
// is stored exactly as the producer computed it and is what Γ0/Γ1 read.
struct BoundaryFunction {
    std::vector<double> nodes;
    std::vector<cplx> values;
    std::vector<cplx> derivatives;  // empty when unknown
    BoundaryData boundary;
    Interpolation interpolation = Interpolation::Lagrange4;
    std::vector<double> bary_weights;  // Barycentric only

    cplx operator()(double x) const;
    Function as_function() const;

    BoundaryFunction& operator+=(const BoundaryFunction& other);
    BoundaryFunction& operator*=(cplx s);
};

BoundaryFunction operator+(BoundaryFunction a, const BoundaryFunction& b);
BoundaryFunction operator-(BoundaryFunction a, const BoundaryFunction& b);
BoundaryFunction operator*(cplx s, BoundaryFunction a);

enum class ModelKind { FirstOrder, SturmLiouville };

// Potential for the Sturm–Liouville model: a constant, or samples on a
// uniform grid over [0,1] joined linearly.
struct Potential {
    double constant = 0.0;
    std::vector<double> samples;

    static Potential uniform(double c) { return {c, {}}; }
    static Potential sampled(std::vector<double> s);

    double operator()(double x) const;
    bool is_constant() const { return samples.empty(); }
    double sup_norm() const;
};

struct ModelDescriptor {
    ModelKind kind = ModelKind::SturmLiouville;
    int n = 200;
    Potential q;
};

// Capability bundle for (A*, Γ0, Γ1) on a concrete model.
class TripletSystem {
public:
    virtual ~TripletSystem() = default;

    virtual ModelDescriptor descriptor() const = 0;
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    // ⟨x, y⟩ in L²(0,1) by the model's quadrature.
    cplx inner(const BoundaryFunction& x, const BoundaryFunction& y) const;
    cplx inner(const BoundaryFunction& x, const Function& y) const;
    double norm(const BoundaryFunction& x) const;

    // Normalized solution of A*u = λu in the admissible class.
    virtual BoundaryFunction deficiency_solution(cplx lambda) const = 0;
    // Some y in the admissible class with A*y − λy = g.
    virtual BoundaryFunction particular_solution(cplx lambda, const Function& g) const = 0;

    virtual cplx gamma0(const BoundaryFunction& y) const = 0;
    virtual cplx gamma1(const BoundaryFunction& y) const = 0;

    // Samples of x (values and boundary data from the derivatives).
    virtual BoundaryFunction sample(const TestFunction& x) const = 0;
    // Samples of x only; boundary derivatives are left undefined.
    virtual BoundaryFunction sample(const Function& x) const = 0;
    // Samples of A*x.
    virtual BoundaryFunction apply_adjoint(const TestFunction& x) const = 0;

    // ‖A*y − λy − g‖ measured independently of the solver that produced y.
    virtual double ode_residual(cplx lambda, const BoundaryFunction& y, const Function& g) const = 0;

    // Whether y satisfies the model's built-in boundary condition.
    virtual bool admissible(const BoundaryFunction& y) const = 0;

    // Factor p(λ) with p(λ)·χ_f(λ) real for real λ and real-constant f;
    // char_roots scans the sign of the real part of p·χ.
    virtual cplx real_axis_normalizer(cplx lambda) const = 0;

protected:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

using ModelPtr = std::shared_ptr<const TripletSystem>;

// M1. Gauss–Legendre nodes; requires n_quad ≥ 32.
ModelPtr model_first_order(int n_quad);
// M2. Uniform mesh of n_mesh cells, composite Simpson; requires n_mesh ≥ 16.
ModelPtr model_sl(Potential q, int n_mesh);
ModelPtr make_model(const ModelDescriptor& d);

// Fundamental solution of −y'' + q y = λ y with terminal data at x = 1 on the
// Sturm–Liouville mesh. Throws ShootingBlowup past magnitude 1e12.
BoundaryFunction shoot_sl(const TripletSystem& model, cplx lambda, cplx y_at_1, cplx dy_at_1);

// χ_f(λ) = Γ1u_λ + f(λ)·Γ0u_λ, or Γ0u_λ for f ≡ ∞.
cplx char_function(const TripletSystem& model, const HerglotzData& fd, cplx lambda);

// |⟨A*x,y⟩ − ⟨x,A*y⟩ − (Γ1x·conj(Γ0y) − Γ0x·conj(Γ1y))| by the model's quadrature.
double green_residual(const TripletSystem& model, const TestFunction& x, const TestFunction& y);

// Gauss–Legendre rule on [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

std::string to_string(ModelKind kind);

} // namespace saf::ode
