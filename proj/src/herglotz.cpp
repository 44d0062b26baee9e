#include "saf/herglotz.hpp"

#include "saf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace saf {

namespace {

constexpr double kPoleTolerance = 1e-14;

void check_data(double h0, double h, const std::vector<Atom>& atoms) {
    if (!std::isfinite(h0) || !std::isfinite(h)) {
        throw Error(ErrorCode::InvalidData, "h0 and h must be finite");
    }
    if (h0 < 0.0) {
        throw Error(ErrorCode::InvalidData, "h0 must be nonnegative");
    }
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const auto& a = atoms[j];
        if (!std::isfinite(a.position) || !std::isfinite(a.weight)) {
            throw Error(ErrorCode::InvalidData, "atom entries must be finite");
        }
        if (!(a.weight > 0.0)) {
            std::ostringstream os;
            os << "atom " << j << " has nonpositive weight " << a.weight;
            throw Error(ErrorCode::InvalidData, os.str());
        }
        if (j > 0 && !(atoms[j - 1].position < a.position)) {
            std::ostringstream os;
            os << "atom positions must be distinct (duplicate near " << a.position << ")";
            throw Error(ErrorCode::InvalidData, os.str());
        }
    }
}

double golden_maximize(const std::function<double(double)>& g, double lo, double hi, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double gc = g(c);
    double gd = g(d);
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                         std::max({1.0, std::abs(lo), std::abs(hi)});
    tol = std::max(tol, floor);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        if (gc > gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - invphi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + invphi * (hi - lo);
            gd = g(d);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

HerglotzData HerglotzData::make(double h0, double h, std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.position < b.position; });
    check_data(h0, h, atoms);
    HerglotzData d;
    d.h0_ = h0;
    d.h_ = h;
    d.atoms_ = std::move(atoms);
    return d;
}

HerglotzData HerglotzData::infinity() {
    HerglotzData d;
    d.infinity_ = true;
    return d;
}

HerglotzData HerglotzData::unchecked(double h0, double h, std::vector<Atom> atoms) {
    HerglotzData d;
    d.h0_ = h0;
    d.h_ = h;
    d.atoms_ = std::move(atoms);
    return d;
}

double HerglotzData::distance_to_atoms(cplx lambda) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms_) {
        best = std::min(best, std::abs(lambda - a.position));
    }
    return best;
}

ExtendedComplex eval(const HerglotzData& fd, cplx lambda) {
    if (fd.is_infinity()) {
        return ExtendedComplex::infinity();
    }
    cplx sum = fd.h0() * lambda + fd.h();
    for (const auto& a : fd.atoms()) {
        const double t = a.position;
        if (std::abs(lambda - t) <= kPoleTolerance * (1.0 + std::abs(t))) {
            std::ostringstream os;
            os << "lambda = " << lambda << " coincides with atom at " << t;
            throw Error(ErrorCode::PoleAtAtom, os.str());
        }
        sum += a.weight * (1.0 / (t - lambda) - t / (1.0 + t * t));
    }
    return ExtendedComplex::finite(sum);
}

cplx eval_finite(const HerglotzData& fd, cplx lambda) {
    if (fd.is_infinity()) {
        throw Error(ErrorCode::InvalidData, "finite evaluation requested for f = inf");
    }
    return eval(fd, lambda).value;
}

OmegaValue f_to_omega(ExtendedComplex f) {
    if (f.infinite) {
        return {cplx{1.0, 0.0}};
    }
    const cplx i{0.0, 1.0};
    const cplx denom = f.value + i;
    if (std::abs(denom) <= 1e-15 * (1.0 + std::abs(f.value))) {
        throw Error(ErrorCode::DegenerateValue, "f = -i has no Cayley image");
    }
    return {(f.value - i) / denom};
}

ExtendedComplex omega_to_f(OmegaValue omega) {
    const cplx w = omega.value;
    if (w == cplx{1.0, 0.0}) {
        return ExtendedComplex::infinity();
    }
    const cplx i{0.0, 1.0};
    return ExtendedComplex::finite(i * (w + 1.0) / (1.0 - w));
}

double nevanlinna_violation(const HerglotzData& fd, std::span<const cplx> grid) {
    if (fd.is_infinity()) {
        return 0.0;
    }
    double min_im = std::numeric_limits<double>::infinity();
    for (const cplx& z : grid) {
        if (!(z.imag() > 0.0)) {
            throw Error(ErrorCode::InvalidData, "grid point not in the open upper half-plane");
        }
        min_im = std::min(min_im, eval(fd, z).value.imag());
    }
    if (grid.empty()) {
        return 0.0;
    }
    return std::max(0.0, -min_im);
}

std::vector<Atom> stieltjes_invert(const HerglotzEvaluator& f, const InversionOptions& opts) {
    const double a = opts.window_lo;
    const double b = opts.window_hi;
    const auto& eps = opts.eps_schedule;
    if (!(a < b)) {
        throw Error(ErrorCode::InvalidData, "inversion window must satisfy a < b");
    }
    if (eps.empty() || !(opts.min_weight > 0.0)) {
        throw Error(ErrorCode::InvalidData, "eps schedule must be nonempty and min_weight positive");
    }
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0) || (k > 0 && !(eps[k] < eps[k - 1]))) {
            throw Error(ErrorCode::InvalidData, "eps schedule must be positive and strictly decreasing");
        }
    }
    if (eps.back() > 1e-6) {
        throw Error(ErrorCode::InvalidData, "eps schedule must end at or below 1e-6");
    }

    auto density = [&f](double t, double e) { return e * f(cplx{t, e}).imag(); };

    // Coarse scan at the widest ε; atoms appear as strict interior maxima.
    const double e0 = eps.front();
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / (0.25 * e0)));
    const double step = (b - a) / static_cast<double>(n);
    std::vector<double> p(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        p[k] = density(a + step * static_cast<double>(k), e0);
    }
    std::vector<double> candidates;
    for (std::size_t k = 1; k < n; ++k) {
        const double floor = 1e-12 * std::max(1.0, std::abs(p[k]));
        if (p[k] - p[k - 1] > floor && p[k] >= p[k + 1]) {
            candidates.push_back(a + step * static_cast<double>(k));
        }
    }

    std::vector<Atom> found;
    for (double t : candidates) {
        std::vector<double> weights;
        weights.reserve(eps.size());
        double half_width = step;
        for (double e : eps) {
            const double lo = std::max(a, t - half_width);
            const double hi = std::min(b, t + half_width);
            t = golden_maximize([&](double s) { return density(s, e); }, lo, hi,
                                1e-9 * e);
            weights.push_back(density(t, e));
            half_width = 2.0 * e;
        }
        const std::size_t last = weights.size() - 1;
        double w = weights[last];
        if (last > 0) {
            const double r2 = (eps[last] / eps[last - 1]) * (eps[last] / eps[last - 1]);
            w = weights[last] + (weights[last] - weights[last - 1]) * r2 / (1.0 - r2);
        }
        if (w < opts.min_weight) {
            continue;
        }
        if (last > 0 && std::abs(weights[last] - weights[last - 1]) > 10.0 * opts.min_weight) {
            std::ostringstream os;
            os << "weight estimates near t = " << t << " did not settle: " << weights[last - 1]
               << " vs " << weights[last];
            throw Error(ErrorCode::NonConvergent, os.str());
        }
        if (t <= a || t >= b) {
            continue;
        }
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Atom& at) {
            return std::abs(at.position - t) <= 1e-9 * (1.0 + std::abs(t));
        });
        if (!duplicate) {
            found.push_back({t, w});
        }
    }
    std::sort(found.begin(), found.end(),
              [](const Atom& x, const Atom& y) { return x.position < y.position; });
    return found;
}

Asymptotics extract_asymptotics(const HerglotzEvaluator& f) {
    // Re f(iy)/(iy) = h0 + O(1/y²); eliminate powers of 1/y with ratio-2
    // Richardson steps.
    constexpr int kFirst = 6;
    constexpr int kLast = 16;
    constexpr int kLevels = 3;
    std::vector<std::vector<double>> table;
    for (int k = kFirst; k <= kLast; ++k) {
        const double y = std::ldexp(1.0, k);
        const cplx iy{0.0, y};
        std::vector<double> row{(f(iy) / iy).real()};
        if (!table.empty()) {
            const auto& prev = table.back();
            for (int j = 1; j <= kLevels && j <= static_cast<int>(prev.size()); ++j) {
                const double factor = std::ldexp(1.0, j) - 1.0;
                row.push_back(row[j - 1] + (row[j - 1] - prev[j - 1]) / factor);
            }
        }
        table.push_back(std::move(row));
    }
    const double h0_last = table.back().back();
    const double h0_prev = table[table.size() - 2].back();
    if (!std::isfinite(h0_last) || std::abs(h0_last - h0_prev) > 1e-6) {
        std::ostringstream os;
        os << "h0 estimates " << h0_prev << " and " << h0_last << " differ by more than 1e-6";
        throw Error(ErrorCode::NonConvergent, os.str());
    }
    return {h0_last, f(cplx{0.0, 1.0}).real()};
}

HerglotzEvaluator make_evaluator(const HerglotzData& fd) {
    if (fd.is_infinity()) {
        throw Error(ErrorCode::InvalidData, "f = inf has no finite evaluator");
    }
    return [fd](cplx z) { return eval(fd, z).value; };
}

} // namespace saf
