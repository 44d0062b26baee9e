#include "saf/extension.hpp"

#include "saf/error.hpp"
#include "saf/gen_resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace saf::ext {

namespace {

// Gauss points on [0,1] for element integrals.
const ode::QuadratureRule& element_rule() {
    static const ode::QuadratureRule rule = ode::gauss_legendre(5);
    return rule;
}

} // namespace

ExtensionAssembly assemble_extension(const Potential& q, const HerglotzData& fd, int n_mesh) {
    if (n_mesh < 16) {
        throw Error(ErrorCode::InvalidData, "extension assembly needs n_mesh >= 16");
    }
    const int n = n_mesh;
    const double hw = 1.0 / n;
    const bool finite = !fd.is_infinity();
    const int m = finite ? static_cast<int>(fd.atoms().size()) : 0;
    const double h0 = finite ? fd.h0() : 0.0;
    const bool has_aug = h0 > 0.0;
    const int nf = n + m + (has_aug ? 1 : 0);

    RealMatrix kf = RealMatrix::Zero(nf, nf);
    RealMatrix mf = RealMatrix::Zero(nf, nf);
    const auto& rule = element_rule();
    for (int e = 0; e < n; ++e) {
        double kl[2][2] = {{1.0 / hw, -1.0 / hw}, {-1.0 / hw, 1.0 / hw}};
        double ml[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
            const double s = rule.nodes[g];
            const double wt = hw * rule.weights[g];
            const double phi[2] = {1.0 - s, s};
            const double qx = q((e + s) * hw);
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    ml[i][j] += wt * phi[i] * phi[j];
                    kl[i][j] += wt * qx * phi[i] * phi[j];
                }
            }
        }
        const int idx[2] = {e, e + 1};
        for (int i = 0; i < 2; ++i) {
            if (idx[i] >= n) continue;
            for (int j = 0; j < 2; ++j) {
                if (idx[j] >= n) continue;
                kf(idx[i], idx[j]) += kl[i][j];
                mf(idx[i], idx[j]) += ml[i][j];
            }
        }
    }

    if (finite) {
        double shift = fd.h();
        for (int j = 0; j < m; ++j) {
            const auto& a = fd.atoms()[j];
            shift -= a.weight * a.position / (1.0 + a.position * a.position);
            kf(n + j, n + j) = a.weight * a.position;
            kf(0, n + j) = -a.weight;
            kf(n + j, 0) = -a.weight;
            mf(n + j, n + j) = a.weight;
        }
        kf(0, 0) -= shift;
        if (has_aug) mf(n + m, n + m) = 1.0 / h0;
    }

    ExtensionAssembly out;
    out.n_mesh = n;
    out.q = q;
    out.fd = fd;
    if (!finite) {
        out.layout = {n - 1, 0, 0};
        out.E = RealMatrix::Zero(nf, n - 1);
        for (int k = 1; k < n; ++k) out.E(k, k - 1) = 1.0;
    } else if (!has_aug) {
        out.layout = {n, m, 0};
        out.E = RealMatrix::Identity(nf, nf);
    } else {
        out.layout = {n - 1, m, 1};
        out.E = RealMatrix::Zero(nf, n + m);
        for (int k = 1; k < n; ++k) out.E(k, k - 1) = 1.0;
        for (int j = 0; j < m; ++j) out.E(n + j, n - 1 + j) = 1.0;
        out.E(n + m, n - 1 + m) = 1.0;
        out.E(0, n - 1 + m) = -1.0 / h0;
    }
    out.K = out.E.transpose() * kf * out.E;
    out.M = out.E.transpose() * mf * out.E;
    out.M_full = std::move(mf);
    out.gamma0_row = out.E.row(0).transpose();
    return out;
}

Blocks split_blocks(const ExtensionAssembly& assembly, const Vector& v) {
    if (v.size() != assembly.layout.total()) {
        throw Error(ErrorCode::DimensionMismatch, "vector does not match the assembly layout");
    }
    const int n = assembly.n_mesh;
    const int m = assembly.layout.m;
    const Vector full = assembly.E.cast<cplx>() * v;
    Blocks b;
    b.base = Vector::Zero(n + 1);
    b.base.head(n) = full.head(n);
    b.atoms = full.segment(n, m);
    if (assembly.layout.aug == 1) b.aug = full(n + m);
    return b;
}

Function base_function(const ExtensionAssembly& assembly, const Vector& base_nodes) {
    const int n = assembly.n_mesh;
    return [n, base_nodes](double x) {
        const double pos = std::clamp(x, 0.0, 1.0) * n;
        const int k = std::min(static_cast<int>(pos), n - 1);
        const double s = pos - k;
        return (1.0 - s) * base_nodes(k) + s * base_nodes(k + 1);
    };
}

SpectrumResult extension_eigs(const ExtensionAssembly& assembly, double lo, double hi) {
    Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> ges(assembly.K, assembly.M);
    if (ges.info() != Eigen::Success) {
        throw Error(ErrorCode::NonConvergent, "generalized eigensolver failed");
    }
    SpectrumResult out;
    std::vector<int> keep;
    for (int k = 0; k < ges.eigenvalues().size(); ++k) {
        const double ev = ges.eigenvalues()(k);
        if (ev >= lo && ev <= hi) keep.push_back(k);
    }
    out.eigenvectors.resize(assembly.K.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const double ev = ges.eigenvalues()(keep[i]);
        const RealVector v = ges.eigenvectors().col(keep[i]);
        out.eigenvalues.push_back(ev);
        out.residuals.push_back((assembly.K * v - ev * (assembly.M * v)).norm() / v.norm());
        out.eigenvectors.col(static_cast<Eigen::Index>(i)) = v;
    }
    return out;
}

std::vector<double> char_roots(const ode::TripletSystem& model, const HerglotzData& fd, double lo,
                               double hi, double tol, int scan_steps) {
    if (!(lo < hi) || !(tol > 0.0) || scan_steps < 1) {
        throw Error(ErrorCode::InvalidData, "char_roots needs lo < hi, tol > 0 and a positive step count");
    }
    if (!fd.is_infinity()) {
        for (const auto& a : fd.atoms()) {
            if (a.position >= lo - tol && a.position <= hi + tol) {
                std::ostringstream os;
                os << "atom at " << a.position << " lies in the root window [" << lo << ", " << hi << "]";
                throw Error(ErrorCode::AtomInWindow, os.str());
            }
        }
    }
    auto g = [&](double lam) {
        return (model.real_axis_normalizer(lam) * ode::char_function(model, fd, lam)).real();
    };
    const double step = (hi - lo) / scan_steps;
    std::vector<double> roots;
    double a = lo;
    double ga = g(a);
    if (ga == 0.0) roots.push_back(a);
    for (int k = 1; k <= scan_steps; ++k) {
        const double b = (k == scan_steps) ? hi : lo + step * k;
        const double gb = g(b);
        if (gb == 0.0) {
            roots.push_back(b);
        } else if (ga != 0.0 && (ga < 0.0) != (gb < 0.0)) {
            double l = a;
            double r = b;
            double gl = ga;
            for (int it = 0; it < 200 && r - l > tol; ++it) {
                const double mid = 0.5 * (l + r);
                const double gm = g(mid);
                if (gm == 0.0) {
                    l = r = mid;
                    break;
                }
                if ((gm < 0.0) == (gl < 0.0)) {
                    l = mid;
                    gl = gm;
                } else {
                    r = mid;
                }
            }
            roots.push_back(0.5 * (l + r));
        }
        a = b;
        ga = gb;
    }
    return roots;
}

Vector base_load(const ExtensionAssembly& assembly, const Function& x) {
    const int n = assembly.n_mesh;
    const double hw = assembly.mesh_width();
    Vector full = Vector::Zero(assembly.n_full());
    const auto& rule = element_rule();
    for (int e = 0; e < n; ++e) {
        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
            const double s = rule.nodes[g];
            const cplx val = hw * rule.weights[g] * x((e + s) * hw);
            full(e) += (1.0 - s) * val;
            if (e + 1 < n) full(e + 1) += s * val;
        }
    }
    return assembly.E.transpose().cast<cplx>() * full;
}

Resolver::Resolver(const ExtensionAssembly& assembly, cplx lambda) : M_(assembly.M) {
    const Matrix pencil = assembly.K.cast<cplx>() - lambda * assembly.M.cast<cplx>();
    Eigen::BDCSVD<Matrix> svd(pencil);
    sigma_min_ = svd.singularValues().minCoeff();
    if (!(sigma_min_ > 1e-10 * assembly.K.norm())) {
        std::ostringstream os;
        os << "lambda = " << lambda << " is within roundoff of a pencil eigenvalue (sigma_min = "
           << sigma_min_ << ")";
        throw Error(ErrorCode::NearEigenvalue, os.str());
    }
    lu_.compute(pencil);
}

Vector Resolver::solve_load(const Vector& load) const { return lu_.solve(load); }

Vector Resolver::solve(const Vector& xtilde) const { return lu_.solve(M_.cast<cplx>() * xtilde); }

Vector extension_resolve(const ExtensionAssembly& assembly, cplx lambda, const Vector& xtilde) {
    if (xtilde.size() != assembly.layout.total()) {
        throw Error(ErrorCode::DimensionMismatch, "block vector does not match the assembly layout");
    }
    return Resolver(assembly, lambda).solve(xtilde);
}

double compression_match(const ExtensionAssembly& assembly, const ode::TripletSystem& model, cplx lambda,
                         const Function& x) {
    const Vector y = Resolver(assembly, lambda).solve_load(base_load(assembly, x));
    const Vector base = split_blocks(assembly, y).base;
    const auto r = resolvent::generalized_resolvent(model, assembly.fd, lambda, x);
    // Node values compared under the composite Simpson rule of the mesh.
    const int n = assembly.n_mesh;
    const auto w = ode::model_sl(assembly.q, n)->weights();
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        acc += w[k] * std::norm(base(k) - r.y(static_cast<double>(k) / n));
    }
    return std::sqrt(acc);
}

std::vector<Function> hat_functions(const ExtensionAssembly& assembly) {
    const int n = assembly.n_mesh;
    std::vector<Function> out;
    for (int k = 0; k < n; ++k) {
        out.push_back([k, n](double x) { return cplx{std::max(0.0, 1.0 - std::abs(x * n - k))}; });
    }
    return out;
}

int minimality_rank(const ExtensionAssembly& assembly, const std::vector<cplx>& lambdas,
                    const std::vector<Function>& xs, double cutoff) {
    for (const cplx l : lambdas) {
        if (l.imag() == 0.0) {
            throw Error(ErrorCode::InvalidData, "minimality samples must be nonreal");
        }
    }
    Eigen::LLT<RealMatrix> llt(assembly.M);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidData, "weight matrix is not positive definite");
    }
    const Matrix lt = llt.matrixL().transpose().toDenseMatrix().cast<cplx>();
    std::vector<Vector> loads;
    for (const auto& x : xs) loads.push_back(base_load(assembly, x));
    Matrix cols(assembly.layout.total(), static_cast<Eigen::Index>(lambdas.size() * xs.size()));
    Eigen::Index c = 0;
    for (const cplx l : lambdas) {
        const Resolver r(assembly, l);
        for (const auto& b : loads) cols.col(c++) = lt * r.solve_load(b);
    }
    Eigen::BDCSVD<Matrix> svd(cols);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double top = sv.maxCoeff();
    return static_cast<int>((sv.array() > cutoff * top).count());
}

CorrespondenceResidual eigenvector_correspondence(const ExtensionAssembly& assembly, double lambda,
                                                  const Vector& v) {
    const auto& fd = assembly.fd;
    if (!fd.is_infinity()) {
        for (const auto& a : fd.atoms()) {
            if (std::abs(lambda - a.position) <= 1e-6) {
                std::ostringstream os;
                os << "eigenvalue " << lambda << " collides with the atom at " << a.position;
                throw Error(ErrorCode::AtomCollision, os.str());
            }
        }
    }
    const Blocks b = split_blocks(assembly, v);
    auto model = ode::model_sl(assembly.q, assembly.n_mesh);
    const auto u = model->deficiency_solution(lambda);
    const auto& w = model->weights();
    cplx num = 0.0;
    double den = 0.0;
    double nb2 = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        num += w[k] * b.base(static_cast<Eigen::Index>(k)) * std::conj(u.values[k]);
        den += w[k] * std::norm(u.values[k]);
        nb2 += w[k] * std::norm(b.base(static_cast<Eigen::Index>(k)));
    }
    const double nb = std::sqrt(nb2);
    const cplx alpha = num / den;
    double fit = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        fit += w[k] * std::norm(b.base(static_cast<Eigen::Index>(k)) - alpha * u.values[k]);
    }
    CorrespondenceResidual out;
    out.ode = std::sqrt(fit) / nb;
    out.bc = std::abs(alpha / nb * ode::char_function(*model, fd, lambda));
    const cplx g0 = b.base(0);
    if (!fd.is_infinity()) {
        for (int j = 0; j < assembly.layout.m; ++j) {
            const double t = fd.atoms()[j].position;
            out.atoms = std::max(out.atoms, std::abs(b.atoms(j) * (t - lambda) - g0) / nb);
        }
        if (assembly.layout.aug == 1) out.aug = std::abs(b.aug + fd.h0() * g0) / nb;
    }
    return out;
}

double hermiticity_defect(const ExtensionAssembly& assembly) {
    const double dk = (assembly.K - assembly.K.transpose()).norm() / assembly.K.norm();
    const double dm = (assembly.M - assembly.M.transpose()).norm() / assembly.M.norm();
    return std::max(dk, dm);
}

void write_matrix_market(std::ostream& os, const RealMatrix& a) {
    Eigen::Index nnz = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) ++nnz;
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
    os << std::setprecision(17);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (a(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << a(i, j) << '\n';
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& s) {
    os << "index,eigenvalue,residual\n" << std::setprecision(17);
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        os << k << ',' << s.eigenvalues[k] << ',' << s.residuals[k] << '\n';
    }
}

} // namespace saf::ext
