#include "saf/ode_models.hpp"

#include "saf/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace saf::ode {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kBlowup = 1e12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> uniform_nodes(int n) {
    std::vector<double> x(n + 1);
    for (int k = 0; k <= n; ++k) {
        x[k] = static_cast<double>(k) / n;
    }
    x[n] = 1.0;
    return x;
}

// Composite Simpson on n uniform cells; the last three cells use the 3/8 rule
// when n is odd.
std::vector<double> simpson_weights(int n) {
    const double h = 1.0 / n;
    std::vector<double> w(n + 1, 0.0);
    const int even = (n % 2 == 0) ? n : n - 3;
    for (int k = 0; k < even; k += 2) {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
    }
    if (even != n) {
        const double c = 3.0 * h / 8.0;
        w[even] += c;
        w[even + 1] += 3.0 * c;
        w[even + 2] += 3.0 * c;
        w[even + 3] += c;
    }
    return w;
}

double legendre_and_derivative(int n, double x, double& dp) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
}

// ---------------------------------------------------------------------------

class FirstOrderModel final : public TripletSystem {
public:
    explicit FirstOrderModel(int n_quad) : n_(n_quad) {
        auto rule = gauss_legendre(n_quad);
        nodes_ = rule.nodes;
        weights_ = rule.weights;
        // Barycentric weights for Legendre points: (−1)^j·sqrt((1 − ξ²)·ω_j)
        // in the [-1,1] variable; any common factor cancels.
        bary_.resize(n_);
        for (int j = 0; j < n_; ++j) {
            const double xi = 2.0 * nodes_[j] - 1.0;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            bary_[j] = sign * std::sqrt((1.0 - xi * xi) * 2.0 * weights_[j]);
        }
        diff_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
        for (int i = 0; i < n_; ++i) {
            double diag = 0.0;
            for (int j = 0; j < n_; ++j) {
                if (i == j) continue;
                const double d = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
                diff_[static_cast<std::size_t>(i) * n_ + j] = d;
                diag -= d;
            }
            diff_[static_cast<std::size_t>(i) * n_ + i] = diag;
        }
    }

    ModelDescriptor descriptor() const override {
        return {ModelKind::FirstOrder, n_, Potential::uniform(0.0)};
    }

    BoundaryFunction deficiency_solution(cplx lambda) const override {
        BoundaryFunction u = blank();
        for (int k = 0; k < n_; ++k) {
            u.values[k] = std::exp(kI * lambda * nodes_[k]);
            u.derivatives[k] = kI * lambda * u.values[k];
        }
        const cplx e1 = std::exp(kI * lambda);
        u.boundary = {1.0, kI * lambda, e1, kI * lambda * e1};
        return u;
    }

    // y(x) = e^{iλx}·i∫₀ˣ e^{−iλs} g(s) ds, so y(0) = 0.
    BoundaryFunction particular_solution(cplx lambda, const Function& g) const override {
        auto integral = [&](double x) {
            cplx acc = 0.0;
            for (int j = 0; j < n_; ++j) {
                const double s = x * nodes_[j];
                acc += weights_[j] * std::exp(-kI * lambda * s) * g(s);
            }
            return x * acc;
        };
        BoundaryFunction y = blank();
        for (int k = 0; k < n_; ++k) {
            const double x = nodes_[k];
            y.values[k] = std::exp(kI * lambda * x) * kI * integral(x);
            y.derivatives[k] = kI * lambda * y.values[k] + kI * g(x);
        }
        const cplx y1 = std::exp(kI * lambda) * kI * integral(1.0);
        y.boundary = {0.0, kI * g(0.0), y1, kI * lambda * y1 + kI * g(1.0)};
        return y;
    }

    cplx gamma0(const BoundaryFunction& y) const override { return y.boundary.y0 - y.boundary.y1; }
    cplx gamma1(const BoundaryFunction& y) const override {
        return 0.5 * kI * (y.boundary.y0 + y.boundary.y1);
    }

    BoundaryFunction sample(const TestFunction& x) const override {
        BoundaryFunction s = blank();
        for (int k = 0; k < n_; ++k) {
            s.values[k] = x.value(nodes_[k]);
            s.derivatives[k] = x.d1(nodes_[k]);
        }
        s.boundary = {x.value(0.0), x.d1(0.0), x.value(1.0), x.d1(1.0)};
        return s;
    }

    BoundaryFunction sample(const Function& x) const override {
        BoundaryFunction s = blank();
        s.derivatives.clear();
        for (int k = 0; k < n_; ++k) {
            s.values[k] = x(nodes_[k]);
        }
        s.boundary = {x(0.0), kNaN, x(1.0), kNaN};
        return s;
    }

    BoundaryFunction apply_adjoint(const TestFunction& x) const override {
        TestFunction ax{[&](double t) { return -kI * x.d1(t); },
                        [&](double t) { return -kI * x.d2(t); },
                        [](double) { return cplx{kNaN, kNaN}; }};
        return sample(ax);
    }

    double ode_residual(cplx lambda, const BoundaryFunction& y, const Function& g) const override {
        // Spectral differentiation of the Gauss–Legendre interpolant of y.
        double acc = 0.0;
        for (int i = 0; i < n_; ++i) {
            cplx dy = 0.0;
            for (int j = 0; j < n_; ++j) {
                dy += diff_[static_cast<std::size_t>(i) * n_ + j] * y.values[j];
            }
            const cplx r = -kI * dy - lambda * y.values[i] - g(nodes_[i]);
            acc += weights_[i] * std::norm(r);
        }
        return std::sqrt(acc);
    }

    bool admissible(const BoundaryFunction&) const override { return true; }

    // i·e^{−iλ/2}·χ_f(λ) = −cos(λ/2) + 2f·sin(λ/2) for real λ.
    cplx real_axis_normalizer(cplx lambda) const override {
        return kI * std::exp(-0.5 * kI * lambda);
    }

private:
    BoundaryFunction blank() const {
        BoundaryFunction b;
        b.nodes = nodes_;
        b.values.assign(n_, 0.0);
        b.derivatives.assign(n_, 0.0);
        b.interpolation = Interpolation::Barycentric;
        b.bary_weights = bary_;
        return b;
    }

    int n_;
    std::vector<double> bary_;
    std::vector<double> diff_;
};

// ---------------------------------------------------------------------------

class SturmLiouvilleModel final : public TripletSystem {
public:
    SturmLiouvilleModel(Potential q, int n_mesh) : q_(std::move(q)), n_(n_mesh), h_(1.0 / n_mesh) {
        nodes_ = uniform_nodes(n_);
        weights_ = simpson_weights(n_);
    }

    ModelDescriptor descriptor() const override { return {ModelKind::SturmLiouville, n_, q_}; }

    BoundaryFunction shoot(cplx lambda, cplx y1, cplx dy1, const Function* g) const {
        // −y'' + (q − λ)y = g as a first-order system, integrated from x = 1
        // down to x = 0 with classical RK4.
        auto rhs = [&](double x, cplx y, cplx p, cplx& dy, cplx& dp) {
            dy = p;
            dp = (q_(x) - lambda) * y - (g ? (*g)(x) : cplx{0.0});
        };
        BoundaryFunction out;
        out.nodes = nodes_;
        out.values.assign(n_ + 1, 0.0);
        out.derivatives.assign(n_ + 1, 0.0);
        out.interpolation = Interpolation::Hermite;
        cplx y = y1;
        cplx p = dy1;
        out.values[n_] = y;
        out.derivatives[n_] = p;
        const double h = -h_;
        for (int k = n_ - 1; k >= 0; --k) {
            const double x = nodes_[k + 1];
            cplx k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
            rhs(x, y, p, k1y, k1p);
            rhs(x + 0.5 * h, y + 0.5 * h * k1y, p + 0.5 * h * k1p, k2y, k2p);
            rhs(x + 0.5 * h, y + 0.5 * h * k2y, p + 0.5 * h * k2p, k3y, k3p);
            rhs(nodes_[k], y + h * k3y, p + h * k3p, k4y, k4p);
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            if (!(std::abs(y) <= kBlowup) || !(std::abs(p) <= kBlowup)) {
                std::ostringstream os;
                os << "shooting solution exceeded 1e12 at x = " << nodes_[k] << " for lambda = "
                   << lambda;
                throw Error(ErrorCode::ShootingBlowup, os.str());
            }
            out.values[k] = y;
            out.derivatives[k] = p;
        }
        out.boundary = {out.values[0], out.derivatives[0], out.values[n_], out.derivatives[n_]};
        return out;
    }

    BoundaryFunction deficiency_solution(cplx lambda) const override {
        return shoot(lambda, 0.0, -1.0, nullptr);
    }

    BoundaryFunction particular_solution(cplx lambda, const Function& g) const override {
        return shoot(lambda, 0.0, 0.0, &g);
    }

    cplx gamma0(const BoundaryFunction& y) const override { return y.boundary.y0; }
    cplx gamma1(const BoundaryFunction& y) const override { return y.boundary.dy0; }

    BoundaryFunction sample(const TestFunction& x) const override {
        BoundaryFunction s;
        s.nodes = nodes_;
        s.values.resize(n_ + 1);
        s.derivatives.resize(n_ + 1);
        for (int k = 0; k <= n_; ++k) {
            s.values[k] = x.value(nodes_[k]);
            s.derivatives[k] = x.d1(nodes_[k]);
        }
        s.interpolation = Interpolation::Hermite;
        s.boundary = {s.values[0], s.derivatives[0], s.values[n_], s.derivatives[n_]};
        return s;
    }

    BoundaryFunction sample(const Function& x) const override {
        BoundaryFunction s;
        s.nodes = nodes_;
        s.values.resize(n_ + 1);
        for (int k = 0; k <= n_; ++k) {
            s.values[k] = x(nodes_[k]);
        }
        s.interpolation = Interpolation::Lagrange4;
        s.boundary = {s.values[0], kNaN, s.values[n_], kNaN};
        return s;
    }

    BoundaryFunction apply_adjoint(const TestFunction& x) const override {
        BoundaryFunction s;
        s.nodes = nodes_;
        s.values.resize(n_ + 1);
        for (int k = 0; k <= n_; ++k) {
            const double t = nodes_[k];
            s.values[k] = -x.d2(t) + q_(t) * x.value(t);
        }
        s.interpolation = Interpolation::Lagrange4;
        s.boundary = {s.values[0], kNaN, s.values[n_], kNaN};
        return s;
    }

    double ode_residual(cplx lambda, const BoundaryFunction& y, const Function& g) const override {
        // Fourth-order central differences of y' (or of y when no derivative
        // samples exist), independent of the RK4 stages that produced y.
        const bool have_d = y.derivatives.size() == y.values.size();
        double acc = 0.0;
        for (int k = 2; k <= n_ - 2; ++k) {
            cplx d2;
            if (have_d) {
                const auto& p = y.derivatives;
                d2 = (-p[k + 2] + 8.0 * p[k + 1] - 8.0 * p[k - 1] + p[k - 2]) / (12.0 * h_);
            } else {
                const auto& v = y.values;
                d2 = (-v[k + 2] + 16.0 * v[k + 1] - 30.0 * v[k] + 16.0 * v[k - 1] - v[k - 2]) /
                     (12.0 * h_ * h_);
            }
            const double x = nodes_[k];
            const cplx r = -d2 + (q_(x) - lambda) * y.values[k] - g(x);
            acc += h_ * std::norm(r);
        }
        return std::sqrt(acc);
    }

    bool admissible(const BoundaryFunction& y) const override {
        double scale = 1.0;
        for (const auto& v : y.values) scale = std::max(scale, std::abs(v));
        return std::abs(y.boundary.y1) <= 1e-10 * scale;
    }

    cplx real_axis_normalizer(cplx) const override { return 1.0; }

private:
    Potential q_;
    int n_;
    double h_;
};

} // namespace

// ---------------------------------------------------------------------------

cplx BoundaryFunction::operator()(double x) const {
    const auto n = static_cast<int>(nodes.size());
    switch (interpolation) {
    case Interpolation::Barycentric: {
        if (x == 0.0) return boundary.y0;
        if (x == 1.0) return boundary.y1;
        cplx num = 0.0;
        double den = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = x - nodes[j];
            if (d == 0.0) return values[j];
            const double c = bary_weights[j] / d;
            num += c * values[j];
            den += c;
        }
        return num / den;
    }
    case Interpolation::Hermite: {
        const double h = nodes[1] - nodes[0];
        int k = static_cast<int>(std::floor((x - nodes[0]) / h));
        k = std::clamp(k, 0, n - 2);
        const double s = (x - nodes[k]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * values[k] + h10 * h * derivatives[k] + h01 * values[k + 1] +
               h11 * h * derivatives[k + 1];
    }
    case Interpolation::Lagrange4: {
        const double h = nodes[1] - nodes[0];
        int k = static_cast<int>(std::floor((x - nodes[0]) / h)) - 1;
        k = std::clamp(k, 0, n - 4);
        cplx acc = 0.0;
        for (int i = k; i < k + 4; ++i) {
            double li = 1.0;
            for (int j = k; j < k + 4; ++j) {
                if (j != i) li *= (x - nodes[j]) / (nodes[i] - nodes[j]);
            }
            acc += li * values[i];
        }
        return acc;
    }
    }
    return 0.0;
}

Function BoundaryFunction::as_function() const {
    return [self = *this](double x) { return self(x); };
}

BoundaryFunction& BoundaryFunction::operator+=(const BoundaryFunction& other) {
    assert(values.size() == other.values.size());
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += other.values[k];
    if (derivatives.size() == other.derivatives.size()) {
        for (std::size_t k = 0; k < derivatives.size(); ++k) derivatives[k] += other.derivatives[k];
    } else {
        derivatives.clear();
        if (interpolation == Interpolation::Hermite) interpolation = Interpolation::Lagrange4;
    }
    boundary.y0 += other.boundary.y0;
    boundary.dy0 += other.boundary.dy0;
    boundary.y1 += other.boundary.y1;
    boundary.dy1 += other.boundary.dy1;
    return *this;
}

BoundaryFunction& BoundaryFunction::operator*=(cplx s) {
    for (auto& v : values) v *= s;
    for (auto& d : derivatives) d *= s;
    boundary.y0 *= s;
    boundary.dy0 *= s;
    boundary.y1 *= s;
    boundary.dy1 *= s;
    return *this;
}

BoundaryFunction operator+(BoundaryFunction a, const BoundaryFunction& b) { return a += b; }
BoundaryFunction operator-(BoundaryFunction a, const BoundaryFunction& b) {
    return a += cplx{-1.0} * b;
}
BoundaryFunction operator*(cplx s, BoundaryFunction a) { return a *= s; }

Potential Potential::sampled(std::vector<double> s) {
    if (s.size() < 2) {
        throw Error(ErrorCode::InvalidData, "sampled potential needs at least two samples");
    }
    for (double v : s) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidData, "potential samples must be finite");
    }
    return {0.0, std::move(s)};
}

double Potential::operator()(double x) const {
    if (samples.empty()) return constant;
    const auto m = static_cast<int>(samples.size()) - 1;
    const double pos = std::clamp(x, 0.0, 1.0) * m;
    const int k = std::min(static_cast<int>(pos), m - 1);
    const double s = pos - k;
    return (1.0 - s) * samples[k] + s * samples[k + 1];
}

double Potential::sup_norm() const {
    if (samples.empty()) return std::abs(constant);
    double m = 0.0;
    for (double v : samples) m = std::max(m, std::abs(v));
    return m;
}

cplx TripletSystem::inner(const BoundaryFunction& x, const BoundaryFunction& y) const {
    if (x.values.size() != nodes_.size() || y.values.size() != nodes_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "function not sampled on this model's nodes");
    }
    cplx acc = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        acc += weights_[k] * x.values[k] * std::conj(y.values[k]);
    }
    return acc;
}

cplx TripletSystem::inner(const BoundaryFunction& x, const Function& y) const {
    if (x.values.size() != nodes_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "function not sampled on this model's nodes");
    }
    cplx acc = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        acc += weights_[k] * x.values[k] * std::conj(y(nodes_[k]));
    }
    return acc;
}

double TripletSystem::norm(const BoundaryFunction& x) const {
    return std::sqrt(std::max(0.0, inner(x, x).real()));
}

ModelPtr model_first_order(int n_quad) {
    if (n_quad < 32) {
        throw Error(ErrorCode::InvalidData, "first-order model needs n_quad >= 32");
    }
    return std::make_shared<FirstOrderModel>(n_quad);
}

ModelPtr model_sl(Potential q, int n_mesh) {
    if (n_mesh < 16) {
        throw Error(ErrorCode::InvalidData, "Sturm-Liouville model needs n_mesh >= 16");
    }
    return std::make_shared<SturmLiouvilleModel>(std::move(q), n_mesh);
}

ModelPtr make_model(const ModelDescriptor& d) {
    return d.kind == ModelKind::FirstOrder ? model_first_order(d.n) : model_sl(d.q, d.n);
}

BoundaryFunction shoot_sl(const TripletSystem& model, cplx lambda, cplx y_at_1, cplx dy_at_1) {
    const auto* sl = dynamic_cast<const SturmLiouvilleModel*>(&model);
    if (!sl) {
        throw Error(ErrorCode::InvalidData, "shoot_sl needs a Sturm-Liouville model");
    }
    return sl->shoot(lambda, y_at_1, dy_at_1, nullptr);
}

cplx char_function(const TripletSystem& model, const HerglotzData& fd, cplx lambda) {
    const BoundaryFunction u = model.deficiency_solution(lambda);
    const cplx g0 = model.gamma0(u);
    if (fd.is_infinity()) {
        return g0;
    }
    return model.gamma1(u) + eval(fd, lambda).value * g0;
}

double green_residual(const TripletSystem& model, const TestFunction& x, const TestFunction& y) {
    const auto xs = model.sample(x);
    const auto ys = model.sample(y);
    const cplx lhs = model.inner(model.apply_adjoint(x), ys) - model.inner(xs, model.apply_adjoint(y));
    const cplx rhs = model.gamma1(xs) * std::conj(model.gamma0(ys)) -
                     model.gamma0(xs) * std::conj(model.gamma1(ys));
    return std::abs(lhs - rhs);
}

QuadratureRule gauss_legendre(int n) {
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double p = legendre_and_derivative(n, x, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre_and_derivative(n, x, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; store ascending on [0,1].
        r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        r.nodes[i] = 0.5 * (1.0 - x);
        r.weights[n - 1 - i] = 0.5 * w;
        r.weights[i] = 0.5 * w;
    }
    return r;
}

std::string to_string(ModelKind kind) {
    return kind == ModelKind::FirstOrder ? "first_order" : "sturm_liouville";
}

} // namespace saf::ode
