#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "saf/saf.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

void one(double, void*, double* re, double* im) {
    *re = 1.0;
    *im = 0.0;
}

void sine(double t, void*, double* re, double* im) {
    *re = std::sin(M_PI * t);
    *im = 0.0;
}

std::string take(char* s) {
    std::string out(s);
    saf_free(s);
    return out;
}

} // namespace

TEST_CASE("complex literals round-trip through the C interface") {
    double re = 0.0;
    double im = 0.0;
    REQUIRE(saf_parse_complex("-0.5-3i", &re, &im) == SAF_OK);
    CHECK(re == -0.5);
    CHECK(im == -3.0);
    char* s = nullptr;
    REQUIRE(saf_format_complex(2.0, 1.0, &s) == SAF_OK);
    CHECK(take(s) == "2+1i");
    REQUIRE(saf_format_complex(1.0, 0.0, &s) == SAF_OK);
    CHECK(take(s) == "1");
    CHECK(saf_parse_complex("2+", &re, &im) == SAF_INVALID_DATA);
    CHECK(std::string(saf_last_error()).size() > 0);
}

TEST_CASE("herglotz handles evaluate and report errors") {
    saf_herglotz* fd = nullptr;
    const double t[] = {0.0};
    const double w[] = {1.0};
    REQUIRE(saf_herglotz_create(1.0, 2.0, t, w, 1, &fd) == SAF_OK);
    double re = 0.0;
    double im = 0.0;
    int inf = 0;
    REQUIRE(saf_herglotz_eval(fd, 0.0, 1.0, &re, &im, &inf) == SAF_OK);
    // f(i) = i + 2 + 1/(0 - i) = 2 + 2i
    CHECK(inf == 0);
    CHECK(re == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(im == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(saf_herglotz_eval(fd, 0.0, 0.0, &re, &im, &inf) == SAF_POLE_AT_ATOM);
    char* js = nullptr;
    REQUIRE(saf_herglotz_to_json(fd, &js) == SAF_OK);
    CHECK(take(js).find("atoms") != std::string::npos);
    saf_herglotz_destroy(fd);

    saf_herglotz* bad = nullptr;
    CHECK(saf_herglotz_create(-1.0, 0.0, nullptr, nullptr, 0, &bad) == SAF_INVALID_DATA);
    CHECK(bad == nullptr);
    CHECK(std::string(saf_status_name(SAF_INVALID_DATA)) == "InvalidData");
    CHECK(saf_herglotz_eval(nullptr, 0.0, 1.0, &re, &im, &inf) == SAF_INVALID_DATA);
}

TEST_CASE("cayley transform maps infinity to one") {
    double wr = 0.0;
    double wi = 0.0;
    REQUIRE(saf_cayley_f_to_omega(0.0, 0.0, 1, &wr, &wi) == SAF_OK);
    CHECK(wr == 1.0);
    CHECK(wi == 0.0);
    double fr = 0.0;
    double fi = 0.0;
    int inf = 0;
    REQUIRE(saf_cayley_omega_to_f(0.0, 0.0, &fr, &fi, &inf) == SAF_OK);
    CHECK(inf == 0);
    CHECK(std::abs(fr) < 1e-15);
    CHECK(fi == doctest::Approx(1.0));
}

TEST_CASE("inversion and asymptotics through the C interface") {
    saf_herglotz* fd = nullptr;
    REQUIRE(saf_herglotz_parse("h0=1,h=2,atoms=[[0,1]]", &fd) == SAF_OK);
    double h0 = 0.0;
    double h = 0.0;
    REQUIRE(saf_herglotz_asymptotics(fd, &h0, &h) == SAF_OK);
    CHECK(h0 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(h == doctest::Approx(2.0).epsilon(1e-8));
    double* p = nullptr;
    double* w = nullptr;
    size_t n = 0;
    REQUIRE(saf_herglotz_invert(fd, -1.0, 1.0, &p, &w, &n) == SAF_OK);
    REQUIRE(n == 1);
    CHECK(std::abs(p[0]) < 1e-6);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-6));
    saf_free(p);
    saf_free(w);
    saf_herglotz_destroy(fd);
}

TEST_CASE("resolvent and characteristic roots on the Dirichlet problem") {
    saf_model* model = nullptr;
    REQUIRE(saf_model_create(R"({"model":"sturm_liouville","n":200,"q":0})", &model) == SAF_OK);
    saf_herglotz* fd = nullptr;
    REQUIRE(saf_herglotz_infinity(&fd) == SAF_OK);

    saf_resolvent_result r{};
    double* nodes = nullptr;
    double* yr = nullptr;
    double* yi = nullptr;
    size_t count = 0;
    REQUIRE(saf_resolvent(model, fd, 0.0, 1.0, sine, nullptr, &r, &nodes, &yr, &yi, &count) == SAF_OK);
    REQUIRE(count > 2);
    // y = sin(πx)/(π² − i)
    const double d = M_PI * M_PI * M_PI * M_PI + 1.0;
    for (size_t k = 0; k < count; k += count / 8) {
        const double s = std::sin(M_PI * nodes[k]);
        CHECK(std::abs(yr[k] - s * M_PI * M_PI / d) < 1e-6);
        CHECK(std::abs(yi[k] - s / d) < 1e-6);
    }
    CHECK(r.residual_bc < 1e-8);
    saf_free(nodes);
    saf_free(yr);
    saf_free(yi);

    double* roots = nullptr;
    REQUIRE(saf_char_roots(model, fd, 0.0, 50.0, 1e-10, &roots, &count) == SAF_OK);
    REQUIRE(count == 2);
    CHECK(roots[0] == doctest::Approx(M_PI * M_PI).epsilon(1e-6));
    CHECK(roots[1] == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-6));
    saf_free(roots);

    CHECK(saf_resolvent(model, fd, 0.0, 1.0, nullptr, nullptr, &r, nullptr, nullptr, nullptr, nullptr) ==
          SAF_INVALID_DATA);
    saf_herglotz_destroy(fd);
    saf_model_destroy(model);
}

TEST_CASE("assembly eigenvalues, compression, minimality and export") {
    saf_model* model = nullptr;
    REQUIRE(saf_model_create(R"({"model":"sturm_liouville","n":200,"q":0})", &model) == SAF_OK);
    saf_herglotz* fd = nullptr;
    REQUIRE(saf_herglotz_parse("h0=1", &fd) == SAF_OK);
    saf_assembly* a = nullptr;
    REQUIRE(saf_assembly_create(model, fd, 200, &a) == SAF_OK);

    int nb = 0;
    int m = 0;
    int aug = 0;
    REQUIRE(saf_assembly_layout(a, &nb, &m, &aug) == SAF_OK);
    CHECK(nb == 199);
    CHECK(m == 0);
    CHECK(aug == 1);

    double* ev = nullptr;
    double* res = nullptr;
    size_t count = 0;
    REQUIRE(saf_assembly_eigs(a, 0.0, 50.0, &ev, &res, &count) == SAF_OK);
    REQUIRE(count == 3);
    const double oracle[] = {0.74017388439496704222, 11.734861829941968343, 41.438807847570465811};
    for (size_t k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - oracle[k]) / oracle[k] < 1e-3);
    saf_free(ev);
    saf_free(res);

    double distance = 1.0;
    REQUIRE(saf_assembly_compression(a, model, 1.0, 1.0, one, nullptr, &distance) == SAF_OK);
    CHECK(distance < 1e-4);

    double* br = nullptr;
    double* bi = nullptr;
    REQUIRE(saf_assembly_resolve(a, 1.0, 1.0, one, nullptr, &br, &bi, &count) == SAF_OK);
    CHECK(count == 201);
    saf_free(br);
    saf_free(bi);

    const std::string prefix = "c_api_export";
    REQUIRE(saf_assembly_export(a, prefix.c_str()) == SAF_OK);
    std::ifstream k(prefix + "_K.mtx");
    std::string header;
    std::getline(k, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real general");
    std::remove((prefix + "_K.mtx").c_str());
    std::remove((prefix + "_M.mtx").c_str());
    std::remove((prefix + ".json").c_str());
    saf_assembly_destroy(a);

    saf_assembly* small = nullptr;
    REQUIRE(saf_assembly_create(model, fd, 30, &small) == SAF_OK);
    const double lre[] = {0.0, 0.0, 1.0, 2.0};
    const double lim[] = {1.0, 2.0, 1.0, 1.0};
    int rank = 0;
    int total = 0;
    REQUIRE(saf_assembly_minimality(small, lre, lim, 4, &rank, &total) == SAF_OK);
    CHECK(total == 30);
    CHECK(rank == 30);
    saf_assembly_destroy(small);

    saf_model* m1 = nullptr;
    REQUIRE(saf_model_create(R"({"model":"first_order"})", &m1) == SAF_OK);
    CHECK(saf_assembly_create(m1, fd, 30, &small) == SAF_INVALID_DATA);
    saf_model_destroy(m1);
    saf_herglotz_destroy(fd);
    saf_model_destroy(model);
}

TEST_CASE("verify suite through the C interface") {
    saf_report* report = nullptr;
    const char* config = R"({"checks": ["cayley_roundtrip", "hermiticity"]})";
    REQUIRE(saf_verify_run(config, 1, 7, nullptr, &report) == SAF_OK);
    CHECK(saf_report_pass(report) == 1);
    char* csv = nullptr;
    REQUIRE(saf_report_csv(report, &csv) == SAF_OK);
    const std::string text = take(csv);
    CHECK(text.find("cayley_roundtrip") != std::string::npos);
    CHECK(text.find("hermiticity") != std::string::npos);
    char* js = nullptr;
    REQUIRE(saf_report_json(report, &js) == SAF_OK);
    CHECK(take(js).find("\"seed\"") != std::string::npos);
    saf_report_destroy(report);

    REQUIRE(saf_verify_run(config, 0, 0, "nonhermitian", &report) == SAF_OK);
    CHECK(saf_report_pass(report) == 0);
    saf_report_destroy(report);

    CHECK(saf_verify_run("{\"seed\": -1}", 0, 0, nullptr, &report) == SAF_CONFIG_ERROR);
    CHECK(std::string(saf_last_error()).find("seed") != std::string::npos);
    CHECK(saf_verify_run(nullptr, 0, 0, "bogus", &report) == SAF_CONFIG_ERROR);
}
