#include "saf/saf.h"

#include "saf/error.hpp"
#include "saf/extension.hpp"
#include "saf/gen_resolvent.hpp"
#include "saf/io.hpp"
#include "saf/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

struct saf_herglotz {
    saf::HerglotzData fd;
};

struct saf_model {
    saf::ode::ModelDescriptor descriptor;
    saf::ode::ModelPtr model;
};

struct saf_assembly {
    saf::ext::ExtensionAssembly assembly;
};

struct saf_report {
    saf::verify::Report report;
};

namespace {

thread_local std::string g_last_error;

saf_status fail(saf_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
saf_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return SAF_OK;
    } catch (const saf::Error& e) {
        return fail(static_cast<saf_status>(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail(SAF_INTERNAL, e.what());
    } catch (...) {
        return fail(SAF_INTERNAL, "unknown failure");
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw saf::Error(saf::ErrorCode::InvalidData, what);
}

template <class T>
T* copy_array(const std::vector<T>& v) {
    auto* p = static_cast<T*>(std::malloc(sizeof(T) * (v.empty() ? 1 : v.size())));
    if (!p) throw std::bad_alloc();
    if (!v.empty()) std::memcpy(p, v.data(), sizeof(T) * v.size());
    return p;
}

char* copy_string(const std::string& s) {
    auto* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

saf::ode::Function wrap(saf_function x, void* user) {
    require(x != nullptr, "right-hand side callback is null");
    return [x, user](double t) {
        double re = 0.0;
        double im = 0.0;
        x(t, user, &re, &im);
        return saf::cplx{re, im};
    };
}

const saf::ode::TripletSystem& sl_model(const saf_model* m) {
    require(m != nullptr, "model handle is null");
    if (m->descriptor.kind != saf::ode::ModelKind::SturmLiouville) {
        throw saf::Error(saf::ErrorCode::InvalidData, "extension assembly needs a sturm_liouville model");
    }
    return *m->model;
}

void split(const std::vector<saf::cplx>& v, double** re, double** im) {
    std::vector<double> r, i;
    for (const auto& z : v) {
        r.push_back(z.real());
        i.push_back(z.imag());
    }
    *re = copy_array(r);
    *im = copy_array(i);
}

} // namespace

extern "C" {

const char* saf_version(void) { return "1.0.0"; }

const char* saf_last_error(void) { return g_last_error.c_str(); }

const char* saf_status_name(saf_status status) {
    if (status == SAF_OK) return "Ok";
    return saf::to_string(static_cast<saf::ErrorCode>(status));
}

void saf_free(void* p) { std::free(p); }

saf_status saf_parse_complex(const char* text, double* re, double* im) {
    return guarded([&] {
        require(text && re && im, "null argument");
        const auto z = saf::io::parse_complex(text);
        *re = z.real();
        *im = z.imag();
    });
}

saf_status saf_format_complex(double re, double im, char** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = copy_string(saf::io::format_complex(saf::cplx{re, im}));
    });
}

saf_status saf_herglotz_create(double h0, double h, const double* positions, const double* weights, size_t count,
                               saf_herglotz** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        require(count == 0 || (positions && weights), "atom arrays are null");
        std::vector<saf::Atom> atoms;
        for (size_t k = 0; k < count; ++k) atoms.push_back({positions[k], weights[k]});
        *out = new saf_herglotz{saf::HerglotzData::make(h0, h, std::move(atoms))};
    });
}

saf_status saf_herglotz_infinity(saf_herglotz** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new saf_herglotz{saf::HerglotzData::infinity()};
    });
}

saf_status saf_herglotz_parse(const char* spec, saf_herglotz** out) {
    return guarded([&] {
        require(spec && out, "null argument");
        *out = new saf_herglotz{saf::io::parse_herglotz_spec(spec)};
    });
}

void saf_herglotz_destroy(saf_herglotz* fd) { delete fd; }

saf_status saf_herglotz_to_json(const saf_herglotz* fd, char** out) {
    return guarded([&] {
        require(fd && out, "null argument");
        *out = copy_string(saf::io::herglotz_to_json(fd->fd));
    });
}

saf_status saf_herglotz_eval(const saf_herglotz* fd, double re, double im, double* out_re, double* out_im,
                             int* out_infinite) {
    return guarded([&] {
        require(fd && out_re && out_im && out_infinite, "null argument");
        const auto v = saf::eval(fd->fd, saf::cplx{re, im});
        *out_re = v.value.real();
        *out_im = v.value.imag();
        *out_infinite = v.infinite ? 1 : 0;
    });
}

saf_status saf_herglotz_asymptotics(const saf_herglotz* fd, double* h0, double* h) {
    return guarded([&] {
        require(fd && h0 && h, "null argument");
        const auto a = saf::extract_asymptotics(saf::make_evaluator(fd->fd));
        *h0 = a.h0;
        *h = a.h;
    });
}

saf_status saf_herglotz_invert(const saf_herglotz* fd, double lo, double hi, double** positions, double** weights,
                               size_t* count) {
    return guarded([&] {
        require(fd && positions && weights && count, "null argument");
        saf::InversionOptions opts;
        opts.window_lo = lo;
        opts.window_hi = hi;
        const auto atoms = saf::stieltjes_invert(saf::make_evaluator(fd->fd), opts);
        std::vector<double> p, w;
        for (const auto& a : atoms) {
            p.push_back(a.position);
            w.push_back(a.weight);
        }
        *positions = copy_array(p);
        *weights = copy_array(w);
        *count = atoms.size();
    });
}

saf_status saf_cayley_f_to_omega(double f_re, double f_im, int f_infinite, double* w_re, double* w_im) {
    return guarded([&] {
        require(w_re && w_im, "null argument");
        const auto f = f_infinite ? saf::ExtendedComplex::infinity()
                                  : saf::ExtendedComplex::finite(saf::cplx{f_re, f_im});
        const auto w = saf::f_to_omega(f);
        *w_re = w.value.real();
        *w_im = w.value.imag();
    });
}

saf_status saf_cayley_omega_to_f(double w_re, double w_im, double* f_re, double* f_im, int* f_infinite) {
    return guarded([&] {
        require(f_re && f_im && f_infinite, "null argument");
        const auto f = saf::omega_to_f(saf::OmegaValue{saf::cplx{w_re, w_im}});
        *f_re = f.value.real();
        *f_im = f.value.imag();
        *f_infinite = f.infinite ? 1 : 0;
    });
}

saf_status saf_model_create(const char* descriptor_json, saf_model** out) {
    return guarded([&] {
        require(descriptor_json && out, "null argument");
        auto d = saf::io::model_from_json(descriptor_json);
        auto m = saf::ode::make_model(d);
        *out = new saf_model{std::move(d), std::move(m)};
    });
}

void saf_model_destroy(saf_model* model) { delete model; }

saf_status saf_resolvent(const saf_model* model, const saf_herglotz* fd, double lambda_re, double lambda_im,
                         saf_function x, void* user, saf_resolvent_result* out, double** nodes, double** y_re,
                         double** y_im, size_t* count) {
    return guarded([&] {
        require(model && fd && out, "null argument");
        const auto r = saf::resolvent::generalized_resolvent(*model->model, fd->fd,
                                                             saf::cplx{lambda_re, lambda_im}, wrap(x, user));
        out->c_re = r.c.real();
        out->c_im = r.c.imag();
        out->residual_ode = r.residual_ode;
        out->residual_bc = r.residual_bc;
        if (nodes && y_re && y_im && count) {
            *nodes = copy_array(r.y.nodes);
            split(r.y.values, y_re, y_im);
            *count = r.y.nodes.size();
        }
    });
}

saf_status saf_char_roots(const saf_model* model, const saf_herglotz* fd, double lo, double hi, double tol,
                          double** roots, size_t* count) {
    return guarded([&] {
        require(model && fd && roots && count, "null argument");
        const auto r = saf::ext::char_roots(*model->model, fd->fd, lo, hi, tol);
        *roots = copy_array(r);
        *count = r.size();
    });
}

saf_status saf_assembly_create(const saf_model* sl, const saf_herglotz* fd, int n_mesh, saf_assembly** out) {
    return guarded([&] {
        require(fd && out, "null argument");
        sl_model(sl);
        *out = new saf_assembly{saf::ext::assemble_extension(sl->descriptor.q, fd->fd, n_mesh)};
    });
}

void saf_assembly_destroy(saf_assembly* assembly) { delete assembly; }

saf_status saf_assembly_layout(const saf_assembly* a, int* n_base, int* m, int* aug) {
    return guarded([&] {
        require(a && n_base && m && aug, "null argument");
        *n_base = a->assembly.layout.n_base;
        *m = a->assembly.layout.m;
        *aug = a->assembly.layout.aug;
    });
}

saf_status saf_assembly_eigs(const saf_assembly* a, double lo, double hi, double** eigenvalues, double** residuals,
                             size_t* count) {
    return guarded([&] {
        require(a && eigenvalues && residuals && count, "null argument");
        const auto s = saf::ext::extension_eigs(a->assembly, lo, hi);
        *eigenvalues = copy_array(s.eigenvalues);
        *residuals = copy_array(s.residuals);
        *count = s.eigenvalues.size();
    });
}

saf_status saf_assembly_resolve(const saf_assembly* a, double lambda_re, double lambda_im, saf_function x,
                                void* user, double** base_re, double** base_im, size_t* count) {
    return guarded([&] {
        require(a && base_re && base_im && count, "null argument");
        const saf::ext::Resolver r(a->assembly, saf::cplx{lambda_re, lambda_im});
        const auto y = r.solve_load(saf::ext::base_load(a->assembly, wrap(x, user)));
        const auto base = saf::ext::split_blocks(a->assembly, y).base;
        split(std::vector<saf::cplx>(base.data(), base.data() + base.size()), base_re, base_im);
        *count = static_cast<size_t>(base.size());
    });
}

saf_status saf_assembly_compression(const saf_assembly* a, const saf_model* sl, double lambda_re, double lambda_im,
                                    saf_function x, void* user, double* distance) {
    return guarded([&] {
        require(a && distance, "null argument");
        *distance = saf::ext::compression_match(a->assembly, sl_model(sl), saf::cplx{lambda_re, lambda_im},
                                                wrap(x, user));
    });
}

saf_status saf_assembly_minimality(const saf_assembly* a, const double* lambda_re, const double* lambda_im,
                                   size_t count, int* rank, int* total) {
    return guarded([&] {
        require(a && lambda_re && lambda_im && rank && total, "null argument");
        std::vector<saf::cplx> lambdas;
        for (size_t k = 0; k < count; ++k) lambdas.emplace_back(lambda_re[k], lambda_im[k]);
        *rank = saf::ext::minimality_rank(a->assembly, lambdas, saf::ext::hat_functions(a->assembly));
        *total = a->assembly.layout.total();
    });
}

saf_status saf_assembly_export(const saf_assembly* a, const char* prefix) {
    return guarded([&] {
        require(a && prefix, "null argument");
        const std::string p(prefix);
        auto open = [](const std::string& path) {
            std::ofstream f(path);
            if (!f) throw saf::Error(saf::ErrorCode::InvalidData, "cannot write '" + path + "'");
            return f;
        };
        auto k = open(p + "_K.mtx");
        saf::ext::write_matrix_market(k, a->assembly.K);
        auto m = open(p + "_M.mtx");
        saf::ext::write_matrix_market(m, a->assembly.M);
        auto h = open(p + ".json");
        h << saf::io::assembly_header_json(a->assembly) << '\n';
    });
}

saf_status saf_verify_run(const char* config_json, int has_seed_override, uint64_t seed_override,
                          const char* inject_defect, saf_report** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        auto config = config_json ? saf::verify::parse_config(config_json) : saf::verify::default_config();
        if (has_seed_override) config.seed = seed_override;
        if (inject_defect && *inject_defect) {
            if (std::string(inject_defect) != "nonhermitian") {
                throw saf::Error(saf::ErrorCode::ConfigError, "inject_defect: only \"nonhermitian\" is supported");
            }
            config.inject_defect = inject_defect;
        }
        *out = new saf_report{saf::verify::run_suite(config)};
    });
}

void saf_report_destroy(saf_report* report) { delete report; }

int saf_report_pass(const saf_report* report) { return report && report->report.pass ? 1 : 0; }

saf_status saf_report_text(const saf_report* report, char** out) {
    return guarded([&] {
        require(report && out, "null argument");
        *out = copy_string(saf::verify::report_text(report->report));
    });
}

saf_status saf_report_json(const saf_report* report, char** out) {
    return guarded([&] {
        require(report && out, "null argument");
        *out = copy_string(saf::verify::report_json(report->report));
    });
}

saf_status saf_report_csv(const saf_report* report, char** out) {
    return guarded([&] {
        require(report && out, "null argument");
        *out = copy_string(saf::verify::report_csv(report->report));
    });
}

} // extern "C"
