#pragma once

// Herglotz–Nevanlinna functions given by integral-representation data
//
//   f(λ) = h0·λ + h + Σ_j w_j·( 1/(t_j − λ) − t_j/(1 + t_j²) )
//
// with h0 ≥ 0, h real and a finite atomic measure σ = Σ_j w_j·δ_{t_j}. The
// constant function f ≡ ∞ is carried by a separate flag rather than a large
// number: it selects the Dirichlet condition Γ0 y = 0.

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace saf {

using cplx = std::complex<double>;

struct Atom {
    double position;
    double weight;

    bool operator==(const Atom&) const = default;
};

// A complex number or the point at infinity of the Riemann sphere.
struct ExtendedComplex {
    cplx value{};
    bool infinite = false;

    static ExtendedComplex infinity() { return {cplx{}, true}; }
    static ExtendedComplex finite(cplx z) { return {z, false}; }
};

class HerglotzData {
public:
    // Validating constructor. Throws InvalidData when h0 < 0, a weight is not
    // positive, or positions are not strictly increasing. Atoms are accepted
    // in any order and sorted.
    static HerglotzData make(double h0, double h, std::vector<Atom> atoms = {});
    static HerglotzData infinity();

    // Skips every invariant check. Only for test harnesses that need
    // deliberately invalid data (negative weights and the like).
    static HerglotzData unchecked(double h0, double h, std::vector<Atom> atoms);

    double h0() const { return h0_; }
    double h() const { return h_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    bool is_infinity() const { return infinity_; }

    // True for f ≡ real constant or f ≡ ∞, the canonical (𝔥̃ = 𝔥) case.
    bool is_real_constant_or_infinity() const {
        return infinity_ || (h0_ == 0.0 && atoms_.empty());
    }

    // Smallest |λ − t_j| over the atoms; +inf without atoms.
    double distance_to_atoms(cplx lambda) const;

    bool operator==(const HerglotzData&) const = default;

private:
    HerglotzData() = default;

    double h0_ = 0.0;
    double h_ = 0.0;
    std::vector<Atom> atoms_;
    bool infinity_ = false;
};

using HerglotzEvaluator = std::function<cplx(cplx)>;

// Exact finite sum. Throws PoleAtAtom when λ hits an atom within
// 1e-14·(1 + |t_j|). Returns infinity for the f ≡ ∞ marker.
ExtendedComplex eval(const HerglotzData& fd, cplx lambda);

// Same as eval() but for finite data only; throws InvalidData on f ≡ ∞.
cplx eval_finite(const HerglotzData& fd, cplx lambda);

// Cayley transform ω = (f − i)/(f + i); f = ∞ maps to ω = 1.
// Throws DegenerateValue for f = −i.
struct OmegaValue {
    cplx value{};
};
OmegaValue f_to_omega(ExtendedComplex f);

// Inverse transform f = (iω + i)/(1 − ω); ω = 1 maps to infinity.
ExtendedComplex omega_to_f(OmegaValue omega);

// max(0, −min_grid Im f(λ)). Zero means no violation of Im f ≥ 0 was seen.
double nevanlinna_violation(const HerglotzData& fd, std::span<const cplx> grid);

struct InversionOptions {
    double window_lo = -1.0;
    double window_hi = 1.0;
    // Strictly decreasing, last entry ≤ 1e-6.
    std::vector<double> eps_schedule = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
    double min_weight = 1e-6;
};

// Stieltjes–Perron recovery of the atoms of σ inside (a, b) from values of the
// evaluator near the real axis. Atoms show up as peaks of t ↦ ε·Im f(t + iε)
// of height w_j and width ε. Throws NonConvergent if the weight estimates
// along the schedule do not settle within 10·min_weight.
std::vector<Atom> stieltjes_invert(const HerglotzEvaluator& f, const InversionOptions& opts);

struct Asymptotics {
    double h0;
    double h;
};

// h0 = lim f(iy)/(iy) by Richardson extrapolation along y = 2^6 … 2^16, and
// h = Re f(i). Throws NonConvergent when successive h0 estimates differ by
// more than 1e-6.
Asymptotics extract_asymptotics(const HerglotzEvaluator& f);

// Evaluator bound to finite data (throws on f ≡ ∞).
HerglotzEvaluator make_evaluator(const HerglotzData& fd);

} // namespace saf
