// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
//
// Each criterion runs its group of verify-suite checks on the default
// configuration, sequentially and timed, and where a frozen oracle exists
// compares the library output against it directly.

#include "saf/extension.hpp"
#include "saf/ode_models.hpp"
#include "saf/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace saf;

// Frozen values from tests/oracles/compute_oracles.py (mpmath, 40 digits).
const std::vector<double> kTanRoots{0.74017388439496704222, 11.734861829941968343, 41.438807847570465811};
const std::vector<double> kAtomRoots{3.0766044066233629118, 22.296218300113467809};
constexpr double kPi = 3.14159265358979323846;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
        if (!ok) {
            pass = false;
            detail += " [fail]";
        }
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs the named checks sequentially and folds them into the verdict.
void run_checks(Verdict& v, const std::vector<std::string>& names) {
    auto config = verify::default_config();
    config.checks = names;
    config.parallel = false;
    const auto report = verify::run_suite(config);
    for (const auto& c : report.checks) {
        v.require(c.pass, c.name + " " + sci(c.residual) + " <= " + sci(c.tolerance));
    }
}

double max_relative_error(const std::vector<double>& got, const std::vector<double>& want) {
    if (got.size() < want.size()) return INFINITY;
    double worst = 0.0;
    for (std::size_t k = 0; k < want.size(); ++k) worst = std::max(worst, std::abs(got[k] - want[k]) / want[k]);
    return worst;
}

std::vector<double> pencil(const HerglotzData& fd, int n, double lo, double hi) {
    return ext::extension_eigs(ext::assemble_extension(ode::Potential::uniform(0.0), fd, n), lo, hi).eigenvalues;
}

struct Criterion {
    int id;
    std::string title;
    double time_limit;  // seconds; 0 for none
    std::function<void(Verdict&)> body;
};

std::vector<Criterion> criteria() {
    std::vector<Criterion> out;
    out.push_back({1, "Green's identity, finite surrogate", 1.0,
                   [](Verdict& v) { run_checks(v, {"green_surrogate"}); }});
    out.push_back({2, "Green's identity, ODE models", 5.0, [](Verdict& v) {
                       run_checks(v, {"green_first_order", "green_sturm_liouville", "green_sturm_liouville_order"});
                   }});
    out.push_back({3, "canonical spectra", 0.0, [](Verdict& v) {
                       run_checks(v, {"spectrum_dirichlet", "spectrum_f_zero"});
                       std::vector<double> dir, neu;
                       for (int k = 1; k <= 3; ++k) {
                           dir.push_back(k * k * kPi * kPi);
                           neu.push_back((k - 0.5) * (k - 0.5) * kPi * kPi);
                       }
                       const double e1 = max_relative_error(pencil(HerglotzData::infinity(), 200, 0.0, 120.0), dir);
                       const double e2 = max_relative_error(pencil(HerglotzData::make(0.0, 0.0), 200, 0.0, 100.0), neu);
                       v.require(e1 <= 1e-3, "f=inf vs (k pi)^2 " + sci(e1));
                       v.require(e2 <= 1e-3, "f=0 vs ((k-1/2) pi)^2 " + sci(e2));
                   }});
    out.push_back({4, "lambda-dependent boundary condition", 0.0, [](Verdict& v) {
                       run_checks(v, {"spectrum_lambda_bc", "spectrum_lambda_bc_order"});
                       const auto fd = HerglotzData::make(1.0, 0.0);
                       std::vector<double> err;
                       for (int n : {100, 200, 400}) err.push_back(max_relative_error(pencil(fd, n, 0.0, 50.0), kTanRoots));
                       const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
                       v.require(err[1] <= 1e-3, "frozen tan s = 1/s roots at n=200 " + sci(err[1]));
                       v.require(order >= 1.9, "order " + sci(order) + " >= 1.9");
                   }});
    out.push_back({5, "h0 = 0 with one atom", 0.0, [](Verdict& v) {
                       run_checks(v, {"spectrum_atom_branch"});
                       const auto got = pencil(HerglotzData::make(0.0, 0.0, {{0.0, 1.0}}), 200, 0.5, 60.0);
                       const double e = got.size() == kAtomRoots.size() ? max_relative_error(got, kAtomRoots) : INFINITY;
                       v.require(e <= 1e-3, "frozen roots " + sci(e));
                   }});
    out.push_back({6, "compression to the generalized resolvent", 30.0,
                   [](Verdict& v) { run_checks(v, {"compression_abs", "compression_rate"}); }});
    out.push_back({7, "self-adjointness", 0.0, [](Verdict& v) {
                       run_checks(v, {"hermiticity", "adjoint_sampling", "resolvent_conjugate_symmetry",
                                      "resolvent_symmetry_first_order", "resolvent_symmetry_sturm_liouville"});
                   }});
    out.push_back({8, "minimality", 10.0, [](Verdict& v) { run_checks(v, {"minimality"}); }});
    out.push_back({9, "Herglotz machinery", 0.0, [](Verdict& v) {
                       run_checks(v, {"cayley_roundtrip", "cayley_disk", "stieltjes_inversion", "asymptotics"});
                   }});
    out.push_back({10, "Nevanlinna positivity of the compression", 0.0, [](Verdict& v) {
                       run_checks(v, {"nevanlinna_first_order", "nevanlinna_sturm_liouville"});
                   }});
    out.push_back({11, "full suite time and determinism", 120.0, [](Verdict& v) {
                       const auto config = verify::default_config();
                       const auto first = verify::run_suite(config);
                       const auto second = verify::run_suite(config);
                       v.require(first.pass, "suite " + std::string(first.pass ? "all pass" : "has failures"));
                       v.require(first.seconds < 120.0, "wall " + sci(first.seconds) + " s < 120 s");
                       v.require(verify::report_csv(first) == verify::report_csv(second), "identical CSV on rerun");
                   }});
    return out;
}

} // namespace

int main() {
    int passed = 0;
    const auto all = criteria();
    for (const auto& c : all) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double secs = seconds_since(start);
        if (c.time_limit > 0.0) v.require(secs < c.time_limit, "runtime < " + sci(c.time_limit) + " s");
        if (v.pass) ++passed;
        std::printf("%s  criterion %2d  %-42s %7.2f s  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", passed, all.size());
    return passed == static_cast<int>(all.size()) ? 0 : 1;
}
