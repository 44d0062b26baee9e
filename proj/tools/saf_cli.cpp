// Command-line front end. Everything goes through the C interface in saf/saf.h.

#include "saf/saf.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// A failed library call, carrying its status and message.
class CallError : public std::runtime_error {
public:
    CallError(saf_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
    saf_status status;
};

// Bad command-line input that the library never saw.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void check(saf_status s) {
    if (s != SAF_OK) throw CallError(s, saf_last_error());
}

struct FreeDeleter {
    void operator()(void* p) const { saf_free(p); }
};

template <class T>
using Owned = std::unique_ptr<T, FreeDeleter>;

template <class T>
std::vector<T> take(T* data, size_t count) {
    Owned<T> guard(data);
    return std::vector<T>(data, data + count);
}

std::string take_string(char* s) {
    Owned<char> guard(s);
    return std::string(s);
}

struct HerglotzHandle {
    saf_herglotz* p = nullptr;
    ~HerglotzHandle() { saf_herglotz_destroy(p); }
};

struct ModelHandle {
    saf_model* p = nullptr;
    ~ModelHandle() { saf_model_destroy(p); }
};

struct AssemblyHandle {
    saf_assembly* p = nullptr;
    ~AssemblyHandle() { saf_assembly_destroy(p); }
};

struct ReportHandle {
    saf_report* p = nullptr;
    ~ReportHandle() { saf_report_destroy(p); }
};

struct Complex {
    double re = 0.0;
    double im = 0.0;
};

Complex parse_complex(const std::string& text) {
    Complex z;
    check(saf_parse_complex(text.c_str(), &z.re, &z.im));
    return z;
}

std::string format_complex(double re, double im) {
    char* out = nullptr;
    check(saf_format_complex(re, im, &out));
    return take_string(out);
}

std::string format_double(double x) { return format_complex(x, 0.0); }

std::vector<Complex> parse_lambdas(const std::vector<std::string>& items) {
    std::vector<Complex> out;
    for (const auto& s : items) out.push_back(parse_complex(s));
    return out;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("--window expects 'lo,hi', got '" + text + "'");
    try {
        size_t used_lo = 0;
        size_t used_hi = 0;
        const std::string a = text.substr(0, comma);
        const std::string b = text.substr(comma + 1);
        const double lo = std::stod(a, &used_lo);
        const double hi = std::stod(b, &used_hi);
        if (used_lo != a.size() || used_hi != b.size()) throw std::invalid_argument(text);
        if (!(lo < hi)) throw UsageError("--window must satisfy lo < hi, got '" + text + "'");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("--window expects two numbers 'lo,hi', got '" + text + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Output goes to stdout when the path is empty or "-".
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw UsageError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void write_text(const std::string& path, const std::string& text) {
    Sink sink(path);
    sink.stream() << text;
}

std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Herglotz data from either a --f spec or the --h0/--h/--atoms triple.
struct HerglotzArgs {
    std::string f;
    double h0 = 0.0;
    double h = 0.0;
    std::string atoms;

    void add(CLI::App* cmd, bool with_parts) {
        cmd->add_option("--f", f, "Herglotz data: inf, h0=..,h=..,atoms=[[t,w],..], JSON, or a JSON file");
        if (with_parts) {
            cmd->add_option("--h0", h0, "Slope h0 >= 0");
            cmd->add_option("--h", h, "Real constant h");
            cmd->add_option("--atoms", atoms, "Atoms as JSON [[t,w],..]");
        }
    }

    std::string spec() const {
        if (!f.empty()) return f;
        json j;
        j["h0"] = h0;
        j["h"] = h;
        j["atoms"] = atoms.empty() ? json::array() : json::parse(atoms, nullptr, false);
        if (j["atoms"].is_discarded()) throw UsageError("--atoms is not valid JSON: '" + atoms + "'");
        return j.dump();
    }

    void open(HerglotzHandle& out) const { check(saf_herglotz_parse(spec().c_str(), &out.p)); }
};

// Model descriptor from --model/--q/--n.
struct ModelArgs {
    std::string model = "sl";
    std::string q = "0";
    int n = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--model", model, "sl | first_order")->capture_default_str();
        cmd->add_option("--q", q, "Potential: a constant or comma-separated nodal samples")->capture_default_str();
        cmd->add_option("--n", n, "Mesh size (sl) or quadrature nodes (first_order)");
    }

    std::string kind() const {
        if (model == "sl" || model == "sturm_liouville" || model == "m2") return "sturm_liouville";
        if (model == "first_order" || model == "m1") return "first_order";
        throw UsageError("--model must be sl or first_order, got '" + model + "'");
    }

    std::string descriptor() const {
        json j;
        j["model"] = kind();
        if (n > 0) j["n"] = n;
        std::vector<double> samples;
        std::stringstream ss(q);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                size_t used = 0;
                samples.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::logic_error&) {
                throw UsageError("--q expects numbers, got '" + q + "'");
            }
        }
        if (samples.empty()) throw UsageError("--q is empty");
        if (samples.size() == 1) {
            j["q"] = samples.front();
        } else {
            j["q"] = samples;
        }
        return j.dump();
    }

    void open(ModelHandle& out) const { check(saf_model_create(descriptor().c_str(), &out.p)); }
};

// Right-hand side x(t): one, sin:k (sin kπt), cos:k, exp:a (e^{at}), poly:c0,c1,...
struct Rhs {
    enum class Kind { One, Sin, Cos, Exp, Poly } kind = Kind::One;
    std::vector<double> coeffs;

    static Rhs parse(const std::string& text) {
        Rhs r;
        const auto colon = text.find(':');
        const std::string head = text.substr(0, colon);
        std::vector<double> args;
        if (colon != std::string::npos) {
            std::stringstream ss(text.substr(colon + 1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    args.push_back(std::stod(item));
                } catch (const std::logic_error&) {
                    throw UsageError("--rhs: bad number '" + item + "'");
                }
            }
        }
        auto need = [&](size_t count) {
            if (args.size() != count) throw UsageError("--rhs '" + text + "' has the wrong number of arguments");
        };
        if (head == "one") {
            need(0);
        } else if (head == "sin") {
            r.kind = Kind::Sin;
            need(1);
        } else if (head == "cos") {
            r.kind = Kind::Cos;
            need(1);
        } else if (head == "exp") {
            r.kind = Kind::Exp;
            need(1);
        } else if (head == "poly") {
            r.kind = Kind::Poly;
            if (args.empty()) throw UsageError("--rhs poly needs coefficients");
        } else {
            throw UsageError("--rhs must be one, sin:k, cos:k, exp:a or poly:c0,c1,..; got '" + text + "'");
        }
        r.coeffs = std::move(args);
        return r;
    }

    double operator()(double t) const {
        switch (kind) {
        case Kind::One:
            return 1.0;
        case Kind::Sin:
            return std::sin(coeffs[0] * M_PI * t);
        case Kind::Cos:
            return std::cos(coeffs[0] * M_PI * t);
        case Kind::Exp:
            return std::exp(coeffs[0] * t);
        case Kind::Poly: {
            double v = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
            return v;
        }
        }
        return 0.0;
    }

    static void callback(double t, void* user, double* re, double* im) {
        *re = (*static_cast<const Rhs*>(user))(t);
        *im = 0.0;
    }
};

// hgz ----------------------------------------------------------------------

void hgz_eval(const HerglotzArgs& fa, const std::vector<std::string>& lambdas) {
    HerglotzHandle fd;
    fa.open(fd);
    for (const auto& z : parse_lambdas(lambdas)) {
        double re = 0.0;
        double im = 0.0;
        int infinite = 0;
        check(saf_herglotz_eval(fd.p, z.re, z.im, &re, &im, &infinite));
        std::cout << (infinite ? "inf" : format_complex(re, im)) << '\n';
    }
}

void hgz_cayley(const std::string& f, const std::string& omega, const std::vector<std::string>& lambdas) {
    if (!omega.empty()) {
        const auto w = parse_complex(omega);
        double re = 0.0;
        double im = 0.0;
        int infinite = 0;
        check(saf_cayley_omega_to_f(w.re, w.im, &re, &im, &infinite));
        std::cout << "f = " << (infinite ? "inf" : format_complex(re, im)) << '\n';
        return;
    }
    if (f.empty()) throw UsageError("hgz cayley needs --f or --omega");
    auto print = [](double re, double im, int infinite) {
        double wr = 0.0;
        double wi = 0.0;
        check(saf_cayley_f_to_omega(re, im, infinite, &wr, &wi));
        std::cout << "omega = " << format_complex(wr, wi) << '\n';
    };
    if (lambdas.empty()) {
        // A single value of f: "inf" or a complex literal.
        if (f == "inf" || f == "infinity") {
            print(0.0, 0.0, 1);
        } else {
            const auto z = parse_complex(f);
            print(z.re, z.im, 0);
        }
        return;
    }
    HerglotzHandle fd;
    check(saf_herglotz_parse(f.c_str(), &fd.p));
    for (const auto& z : parse_lambdas(lambdas)) {
        double re = 0.0;
        double im = 0.0;
        int infinite = 0;
        check(saf_herglotz_eval(fd.p, z.re, z.im, &re, &im, &infinite));
        print(re, im, infinite);
    }
}

void hgz_invert(const HerglotzArgs& fa, const std::string& from_atoms, const std::string& window) {
    HerglotzHandle fd;
    if (!from_atoms.empty()) {
        HerglotzArgs only_atoms;
        only_atoms.atoms = from_atoms;
        only_atoms.open(fd);
    } else {
        fa.open(fd);
    }
    const auto [lo, hi] = parse_window(window);
    double* pos = nullptr;
    double* wts = nullptr;
    size_t count = 0;
    check(saf_herglotz_invert(fd.p, lo, hi, &pos, &wts, &count));
    const auto p = take(pos, count);
    const auto w = take(wts, count);
    for (size_t k = 0; k < count; ++k) {
        // Positions are shown at the inversion's resolution so that an atom at 0 prints as 0.
        double t = std::round(p[k] * 1e9) / 1e9 + 0.0;
        char buf[96];
        std::snprintf(buf, sizeof buf, "(%s, %.6f)", format_double(t).c_str(), w[k]);
        std::cout << buf << '\n';
    }
}

void hgz_asymptotics(const HerglotzArgs& fa) {
    HerglotzHandle fd;
    fa.open(fd);
    double h0 = 0.0;
    double h = 0.0;
    check(saf_herglotz_asymptotics(fd.p, &h0, &h));
    char buf[96];
    std::snprintf(buf, sizeof buf, "h0 = %.10g, h = %.10g", h0 + 0.0, h + 0.0);
    std::cout << buf << '\n';
}

// ext ----------------------------------------------------------------------

void open_assembly(const ModelArgs& ma, const HerglotzArgs& fa, int n_mesh, ModelHandle& model, HerglotzHandle& fd,
                   AssemblyHandle& assembly) {
    if (ma.kind() != "sturm_liouville") throw UsageError("this command needs --model sl");
    ma.open(model);
    fa.open(fd);
    check(saf_assembly_create(model.p, fd.p, n_mesh, &assembly.p));
}

void ext_eigs(const ModelArgs& ma, const HerglotzArgs& fa, const std::string& window, const std::string& out) {
    ModelHandle model;
    HerglotzHandle fd;
    AssemblyHandle assembly;
    const auto [lo, hi] = parse_window(window);
    open_assembly(ma, fa, ma.n > 0 ? ma.n : 200, model, fd, assembly);
    double* ev = nullptr;
    double* res = nullptr;
    size_t count = 0;
    check(saf_assembly_eigs(assembly.p, lo, hi, &ev, &res, &count));
    const auto e = take(ev, count);
    const auto r = take(res, count);
    Sink sink(out);
    sink.stream() << "index,eigenvalue,residual\n";
    for (size_t k = 0; k < count; ++k) sink.stream() << k << ',' << csv_double(e[k]) << ',' << csv_double(r[k]) << '\n';
}

void ext_roots(const ModelArgs& ma, const HerglotzArgs& fa, const std::string& window, double tol,
               const std::string& out) {
    ModelHandle model;
    HerglotzHandle fd;
    const auto [lo, hi] = parse_window(window);
    ma.open(model);
    fa.open(fd);
    double* roots = nullptr;
    size_t count = 0;
    check(saf_char_roots(model.p, fd.p, lo, hi, tol, &roots, &count));
    const auto r = take(roots, count);
    Sink sink(out);
    sink.stream() << "index,root\n";
    for (size_t k = 0; k < count; ++k) sink.stream() << k << ',' << csv_double(r[k]) << '\n';
}

void ext_resolve(const ModelArgs& ma, const HerglotzArgs& fa, const std::string& lambda, const std::string& rhs,
                 bool distance, const std::string& out) {
    ModelHandle model;
    HerglotzHandle fd;
    AssemblyHandle assembly;
    open_assembly(ma, fa, ma.n > 0 ? ma.n : 200, model, fd, assembly);
    const auto z = parse_complex(lambda);
    const Rhs x = Rhs::parse(rhs);
    void* user = const_cast<Rhs*>(&x);
    if (distance) {
        double d = 0.0;
        check(saf_assembly_compression(assembly.p, model.p, z.re, z.im, Rhs::callback, user, &d));
        Sink sink(out);
        sink.stream() << "distance = " << csv_double(d) << '\n';
        return;
    }
    double* yr = nullptr;
    double* yi = nullptr;
    size_t count = 0;
    check(saf_assembly_resolve(assembly.p, z.re, z.im, Rhs::callback, user, &yr, &yi, &count));
    const auto re = take(yr, count);
    const auto im = take(yi, count);
    Sink sink(out);
    sink.stream() << "x,re,im\n";
    const double width = count > 1 ? 1.0 / static_cast<double>(count - 1) : 1.0;
    for (size_t k = 0; k < count; ++k) {
        sink.stream() << csv_double(static_cast<double>(k) * width) << ',' << csv_double(re[k]) << ','
                      << csv_double(im[k]) << '\n';
    }
}

void ext_minimality(const ModelArgs& ma, const HerglotzArgs& fa, const std::vector<std::string>& lambdas) {
    ModelHandle model;
    HerglotzHandle fd;
    AssemblyHandle assembly;
    open_assembly(ma, fa, ma.n > 0 ? ma.n : 30, model, fd, assembly);
    const auto zs = parse_lambdas(lambdas.empty() ? std::vector<std::string>{"i", "2i", "1+i", "2+i"} : lambdas);
    std::vector<double> re, im;
    for (const auto& z : zs) {
        re.push_back(z.re);
        im.push_back(z.im);
    }
    int rank = 0;
    int total = 0;
    check(saf_assembly_minimality(assembly.p, re.data(), im.data(), zs.size(), &rank, &total));
    int n_base = 0;
    int m = 0;
    int aug = 0;
    check(saf_assembly_layout(assembly.p, &n_base, &m, &aug));
    std::cout << "rank = " << rank << " of " << total << " (base " << n_base << ", atoms " << m << ", aug " << aug
              << ")\n";
}

void ext_export(const ModelArgs& ma, const HerglotzArgs& fa, const std::string& prefix) {
    ModelHandle model;
    HerglotzHandle fd;
    AssemblyHandle assembly;
    open_assembly(ma, fa, ma.n > 0 ? ma.n : 200, model, fd, assembly);
    check(saf_assembly_export(assembly.p, prefix.c_str()));
    std::cout << prefix << "_K.mtx\n" << prefix << "_M.mtx\n" << prefix << ".json\n";
}

// resolvent ----------------------------------------------------------------

void resolvent(const ModelArgs& ma, const HerglotzArgs& fa, const std::vector<std::string>& lambdas,
               const std::string& rhs, const std::string& out, const std::string& profile) {
    ModelHandle model;
    HerglotzHandle fd;
    ma.open(model);
    fa.open(fd);
    const Rhs x = Rhs::parse(rhs);
    void* user = const_cast<Rhs*>(&x);
    Sink sink(out);
    std::optional<Sink> prof;
    if (!profile.empty()) {
        prof.emplace(profile);
        prof->stream() << "lambda_re,lambda_im,x,y_re,y_im\n";
    }
    sink.stream() << "lambda_re,lambda_im,residual_ode,residual_bc,c_re,c_im\n";
    for (const auto& z : parse_lambdas(lambdas)) {
        saf_resolvent_result r{};
        double* nodes = nullptr;
        double* yr = nullptr;
        double* yi = nullptr;
        size_t count = 0;
        check(saf_resolvent(model.p, fd.p, z.re, z.im, Rhs::callback, user, &r, &nodes, &yr, &yi, &count));
        const auto t = take(nodes, count);
        const auto re = take(yr, count);
        const auto im = take(yi, count);
        sink.stream() << csv_double(z.re) << ',' << csv_double(z.im) << ',' << csv_double(r.residual_ode) << ','
                      << csv_double(r.residual_bc) << ',' << csv_double(r.c_re) << ',' << csv_double(r.c_im) << '\n';
        if (prof) {
            for (size_t k = 0; k < count; ++k) {
                prof->stream() << csv_double(z.re) << ',' << csv_double(z.im) << ',' << csv_double(t[k]) << ','
                               << csv_double(re[k]) << ',' << csv_double(im[k]) << '\n';
            }
        }
    }
}

// verify -------------------------------------------------------------------

std::optional<uint64_t> seed_from_env() {
    const char* env = std::getenv("SAF_SEED");
    if (!env || !*env) return std::nullopt;
    try {
        size_t used = 0;
        const std::string s(env);
        const auto v = std::stoull(s, &used, 0);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError(std::string("SAF_SEED must be an unsigned integer, got '") + env + "'");
    }
}

int verify(const std::string& config_path, std::optional<uint64_t> seed, const std::string& defect,
           const std::string& json_out, const std::string& csv_out, bool quiet) {
    std::string config;
    if (!config_path.empty()) config = read_file(config_path);
    if (!seed) seed = seed_from_env();
    ReportHandle report;
    const saf_status s = saf_verify_run(config_path.empty() ? nullptr : config.c_str(), seed ? 1 : 0,
                                        seed.value_or(0), defect.empty() ? nullptr : defect.c_str(), &report.p);
    if (s == SAF_CONFIG_ERROR) {
        std::cerr << saf_last_error() << '\n';
        return kExitUsage;
    }
    check(s);
    char* text = nullptr;
    check(saf_report_text(report.p, &text));
    const std::string body = take_string(text);
    if (!quiet) std::cout << body;
    if (!json_out.empty()) {
        char* j = nullptr;
        check(saf_report_json(report.p, &j));
        write_text(json_out, take_string(j));
    }
    if (!csv_out.empty()) {
        char* c = nullptr;
        check(saf_report_csv(report.p, &c));
        write_text(csv_out, take_string(c));
    }
    return saf_report_pass(report.p) ? 0 : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal self-adjoint extensions from Herglotz data"};
    app.require_subcommand(1);
    // --h names the constant of the Herglotz data, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(saf_version()));

    int exit_code = 0;

    // hgz
    auto* hgz = app.add_subcommand("hgz", "Herglotz function utilities");
    hgz->require_subcommand(1);

    HerglotzArgs eval_f;
    std::vector<std::string> eval_lambda;
    auto* eval = hgz->add_subcommand("eval", "Evaluate f(lambda)");
    eval_f.add(eval, true);
    eval->add_option("--lambda", eval_lambda, "Spectral parameter a+bi (repeatable)")->required();
    eval->callback([&] { hgz_eval(eval_f, eval_lambda); });

    std::string cay_f;
    std::string cay_omega;
    std::vector<std::string> cay_lambda;
    auto* cayley = hgz->add_subcommand("cayley", "Cayley transform omega = (f - i)/(f + i) and its inverse");
    cayley->add_option("--f", cay_f, "A value (inf or a+bi), or Herglotz data when --lambda is given");
    cayley->add_option("--omega", cay_omega, "Map omega back to f");
    cayley->add_option("--lambda", cay_lambda, "Evaluate the Herglotz data --f here first (repeatable)");
    cayley->callback([&] { hgz_cayley(cay_f, cay_omega, cay_lambda); });

    HerglotzArgs inv_f;
    std::string inv_atoms;
    std::string inv_window;
    auto* invert = hgz->add_subcommand("invert", "Recover atoms from Im f near the real axis");
    inv_f.add(invert, true);
    invert->add_option("--from-atoms", inv_atoms, "Atoms [[t,w],..] of a purely atomic f");
    invert->add_option("--window", inv_window, "Search window lo,hi")->required()->allow_extra_args(false);
    invert->callback([&] { hgz_invert(inv_f, inv_atoms, inv_window); });

    HerglotzArgs asy_f;
    auto* asymptotics = hgz->add_subcommand("asymptotics", "Estimate (h0, h) from f(iy) as y grows");
    asy_f.add(asymptotics, true);
    asymptotics->callback([&] { hgz_asymptotics(asy_f); });

    // ext
    auto* ext = app.add_subcommand("ext", "Extension pencil and characteristic roots");
    ext->require_subcommand(1);

    ModelArgs eig_m;
    HerglotzArgs eig_f;
    std::string eig_window;
    std::string eig_out;
    auto* eigs = ext->add_subcommand("eigs", "Pencil eigenvalues in a window (CSV)");
    eig_m.add(eigs);
    eig_f.add(eigs, false);
    eigs->add_option("--window", eig_window, "Window lo,hi")->required();
    eigs->add_option("--out", eig_out, "CSV path (default stdout)");
    eigs->callback([&] { ext_eigs(eig_m, eig_f, eig_window, eig_out); });

    ModelArgs root_m;
    HerglotzArgs root_f;
    std::string root_window;
    std::string root_out;
    double root_tol = 1e-10;
    auto* roots = ext->add_subcommand("roots", "Real zeros of the characteristic function (CSV)");
    root_m.add(roots);
    root_f.add(roots, false);
    roots->add_option("--window", root_window, "Window lo,hi")->required();
    roots->add_option("--tol", root_tol, "Bisection tolerance")->capture_default_str();
    roots->add_option("--out", root_out, "CSV path (default stdout)");
    roots->callback([&] { ext_roots(root_m, root_f, root_window, root_tol, root_out); });

    ModelArgs res_m;
    HerglotzArgs res_f;
    std::string res_lambda;
    std::string res_rhs = "one";
    std::string res_out;
    bool res_distance = false;
    auto* resolve = ext->add_subcommand("resolve", "Base block of the pencil resolvent applied to x (CSV)");
    res_m.add(resolve);
    res_f.add(resolve, false);
    resolve->add_option("--lambda", res_lambda, "Spectral parameter a+bi")->required();
    resolve->add_option("--rhs", res_rhs, "x(t): one, sin:k, cos:k, exp:a, poly:c0,c1,..")->capture_default_str();
    resolve->add_flag("--distance", res_distance, "Print the distance to the boundary-value resolvent instead");
    resolve->add_option("--out", res_out, "Output path (default stdout)");
    resolve->callback([&] { ext_resolve(res_m, res_f, res_lambda, res_rhs, res_distance, res_out); });

    ModelArgs min_m;
    HerglotzArgs min_f;
    std::vector<std::string> min_lambda;
    auto* minimality = ext->add_subcommand("minimality", "Rank of resolvent orbits of the base space");
    min_m.add(minimality);
    min_f.add(minimality, false);
    minimality->add_option("--lambda", min_lambda, "Spectral parameters (repeatable; default i,2i,1+i,2+i)");
    minimality->callback([&] { ext_minimality(min_m, min_f, min_lambda); });

    ModelArgs exp_m;
    HerglotzArgs exp_f;
    std::string exp_prefix;
    auto* exporter = ext->add_subcommand("export", "Write K and M as Matrix Market plus a JSON header");
    exp_m.add(exporter);
    exp_f.add(exporter, false);
    exporter->add_option("--prefix", exp_prefix, "Output path prefix")->required();
    exporter->callback([&] { ext_export(exp_m, exp_f, exp_prefix); });

    // resolvent
    ModelArgs rv_m;
    HerglotzArgs rv_f;
    std::vector<std::string> rv_lambda;
    std::string rv_rhs = "one";
    std::string rv_out;
    std::string rv_profile;
    auto* rv = app.add_subcommand("resolvent", "Boundary-value generalized resolvent R_f(lambda)x (CSV)");
    rv_m.add(rv);
    rv_f.add(rv, false);
    rv->add_option("--lambda", rv_lambda, "Spectral parameters a+bi (repeatable)")->required();
    rv->add_option("--rhs", rv_rhs, "x(t): one, sin:k, cos:k, exp:a, poly:c0,c1,..")->capture_default_str();
    rv->add_option("--out", rv_out, "CSV path (default stdout)");
    rv->add_option("--profile", rv_profile, "Also write y on the model grid to this CSV");
    rv->callback([&] { resolvent(rv_m, rv_f, rv_lambda, rv_rhs, rv_out, rv_profile); });

    // verify
    std::string vf_config;
    std::optional<uint64_t> vf_seed;
    std::string vf_defect;
    std::string vf_json;
    std::string vf_csv;
    bool vf_quiet = false;
    auto* vf = app.add_subcommand("verify", "Run the verification suite");
    vf->add_option("--config", vf_config, "JSON config file (default: built-in configuration)");
    vf->add_option("--seed", vf_seed, "Seed override (takes precedence over SAF_SEED)");
    vf->add_option("--inject-defect", vf_defect, "Negative control: nonhermitian");
    vf->add_option("--json", vf_json, "Write the JSON report here");
    vf->add_option("--csv", vf_csv, "Write the CSV report here");
    vf->add_flag("--quiet", vf_quiet, "Suppress the text report");
    vf->callback([&] { exit_code = verify(vf_config, vf_seed, vf_defect, vf_json, vf_csv, vf_quiet); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CallError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.status == SAF_CONFIG_ERROR ? kExitUsage : kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return exit_code;
}
