#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "json.hpp"

#include "dhoa/dhoa.h"

namespace {

struct WeightHandle {
    dhoa_weight* w = nullptr;
    explicit WeightHandle(const char* spec) { REQUIRE(dhoa_weight_create(spec, &w) == DHOA_OK); }
    ~WeightHandle() { dhoa_weight_destroy(w); }
};

struct ProfileHandle {
    dhoa_profile* p = nullptr;
    ProfileHandle(const dhoa_weight* w, const char* method = nullptr) {
        REQUIRE(dhoa_profile_create(w, method, &p) == DHOA_OK);
    }
    ~ProfileHandle() { dhoa_profile_destroy(p); }
};

} // namespace

TEST_CASE("weight handles evaluate and report domain errors") {
    WeightHandle w("{\"family\":\"power\",\"sigma\":2,\"alpha\":0,\"beta\":1}");
    double v = 0.0;
    CHECK(dhoa_weight_evaluate(w.w, 0.5, &v) == DHOA_OK);
    CHECK(v == doctest::Approx(0.25));
    CHECK(dhoa_weight_evaluate(w.w, 2.0, &v) == DHOA_ERR_DOMAIN);
    CHECK(std::strlen(dhoa_last_error()) > 0);
}

TEST_CASE("malformed specs are parse errors") {
    dhoa_weight* w = nullptr;
    CHECK(dhoa_weight_create("{not json", &w) == DHOA_ERR_PARSE);
    CHECK(dhoa_weight_create("{\"family\":\"nope\"}", &w) == DHOA_ERR_PARSE);
    CHECK(dhoa_weight_create(nullptr, &w) == DHOA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("profile handles expose the transform") {
    WeightHandle w("{\"family\":\"stretched_exp\",\"k\":1,\"m\":1}");
    ProfileHandle p(w.w);
    double v = 0.0;
    CHECK(dhoa_profile_value(p.p, 5.0, &v) == DHOA_OK);
    CHECK(v == doctest::Approx(24.0));
    CHECK(dhoa_profile_value(p.p, -1.0, &v) == DHOA_ERR_DIVERGENT);

    double nu = 1.0;
    CHECK(dhoa_profile_abscissa(p.p, &nu) == DHOA_OK);
    CHECK(nu == doctest::Approx(0.0));

    double lo = 0, hi = 0;
    CHECK(dhoa_profile_ratio_limits(p.p, &lo, &hi) == DHOA_OK);
    CHECK(lo == 0.0);
    CHECK(std::isinf(hi));
}

TEST_CASE("algebra handles: build, psi, dual, kernel, residual") {
    WeightHandle w("{\"family\":\"power\",\"sigma\":0,\"alpha\":1,\"beta\":4}");
    ProfileHandle p(w.w);
    dhoa_algebra* a = nullptr;
    char* report = nullptr;
    REQUIRE(dhoa_algebra_build(p.p, DHOA_MODE_ANNIHILATION, 0.0, &a, &report) == DHOA_OK);
    REQUIRE(report != nullptr);
    auto j = nlohmann::json::parse(report);
    CHECK(j["verdict"] == "constructible");
    dhoa_string_free(report);

    dhoa_spectrum_shape shape;
    long edge = -1;
    CHECK(dhoa_algebra_spectrum(a, &shape, &edge) == DHOA_OK);
    CHECK(shape == DHOA_SPECTRUM_ALL_INTEGERS);

    double inner = 0, outer = 0;
    CHECK(dhoa_algebra_domain(a, &inner, &outer) == DHOA_OK);
    CHECK(inner == doctest::Approx(1.0));
    CHECK(outer == doctest::Approx(4.0));

    double psi = 0.0;
    CHECK(dhoa_algebra_psi(a, 1.0, &psi) == DHOA_OK);
    CHECK(psi == doctest::Approx(0.5 * (16.0 - 1.0) / (4.0 - 1.0))); // (1/2)(4^2-1)/(4-1)

    double fact = 0.0;
    CHECK(dhoa_algebra_psi_factorial(a, 0, &fact) == DHOA_OK);
    CHECK(fact == doctest::Approx(1.0));

    dhoa_algebra* dual = nullptr;
    REQUIRE(dhoa_algebra_dual(a, &dual) == DHOA_OK);
    double pd = 0.0, pr = 0.0;
    CHECK(dhoa_algebra_psi(dual, 0.25, &pd) == DHOA_OK);
    CHECK(dhoa_algebra_psi(a, 0.75, &pr) == DHOA_OK);
    CHECK(pd == doctest::Approx(pr).epsilon(1e-12));

    double gre = 0, gim = 0;
    CHECK(dhoa_algebra_kernel(a, 2.0, 0.0, &gre, &gim) == DHOA_OK);
    CHECK(gre > 0.0);
    CHECK(dhoa_algebra_kernel(a, 9.0, 0.0, &gre, &gim) == DHOA_ERR_DOMAIN);

    double res = 0.0;
    CHECK(dhoa_algebra_eigen_residual(a, 1.4, 0.0, 64, &res) == DHOA_OK);
    CHECK(res < 1e-6);

    dhoa_algebra_destroy(dual);
    dhoa_algebra_destroy(a);
}

TEST_CASE("rejected constructions surface the diagnostics") {
    WeightHandle w("{\"family\":\"power\",\"sigma\":1.5,\"alpha\":0,\"beta\":1}");
    ProfileHandle p(w.w);
    dhoa_algebra* a = reinterpret_cast<dhoa_algebra*>(0x1);
    char* report = nullptr;
    CHECK(dhoa_algebra_build(p.p, DHOA_MODE_ANNIHILATION, 0.0, &a, &report) ==
          DHOA_ERR_REJECTED);
    CHECK(a == nullptr);
    REQUIRE(report != nullptr);
    auto j = nlohmann::json::parse(report);
    CHECK(j["verdict"] == "rejected");
    CHECK(std::string(dhoa_last_error()).find("nonpositive integer") != std::string::npos);
    dhoa_string_free(report);
}

TEST_CASE("analyze entry point returns the full report") {
    char* report = nullptr;
    const char* cfg = "{\"weight\":{\"family\":\"power\",\"sigma\":0,\"alpha\":1,\"beta\":4}}";
    REQUIRE(dhoa_analyze(cfg, &report) == DHOA_OK);
    auto j = nlohmann::json::parse(report);
    CHECK(j["exit_status"] == 0);
    CHECK(j["verdict"] == "constructible");
    CHECK(j["domain"]["inner_sq"].get<double>() == doctest::Approx(1.0));
    dhoa_string_free(report);

    CHECK(dhoa_analyze("{\"weight\":{}}", &report) == DHOA_ERR_PARSE);
    CHECK(dhoa_analyze("not json", &report) == DHOA_ERR_PARSE);
}

TEST_CASE("status names are stable") {
    CHECK(std::string(dhoa_status_name(DHOA_OK)) == "ok");
    CHECK(std::string(dhoa_status_name(DHOA_ERR_REJECTED)) == "rejected");
    CHECK(std::string(dhoa_status_name(DHOA_ERR_PARSE)) == "parse-error");
}
