#include "dhoa/dhoa.h"

#include <cstring>
#include <new>
#include <string>

#include "core/analyze.hpp"
#include "core/errors.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Runs `fn` and maps the library's exception hierarchy onto status codes.
template <typename Fn>
dhoa_status guard(Fn&& fn) {
    try {
        return fn();
    } catch (const dhoa::ParseError& e) {
        g_last_error = e.what();
        return DHOA_ERR_PARSE;
    } catch (const dhoa::DivergentIntegral& e) {
        g_last_error = e.what();
        return DHOA_ERR_DIVERGENT;
    } catch (const dhoa::DomainError& e) {
        g_last_error = e.what();
        return DHOA_ERR_DOMAIN;
    } catch (const dhoa::NumericalFailure& e) {
        g_last_error = e.what();
        return DHOA_ERR_NUMERICAL;
    } catch (const dhoa::InvalidArgument& e) {
        g_last_error = e.what();
        return DHOA_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DHOA_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return DHOA_ERR_INTERNAL;
    }
}

} // namespace

struct dhoa_weight {
    dhoa::WeightFunction w;
};

struct dhoa_profile {
    dhoa::MellinProfilePtr p;
};

struct dhoa_algebra {
    dhoa::DeformedAlgebra a;
};

extern "C" {

const char* dhoa_status_name(dhoa_status s) {
    switch (s) {
    case DHOA_OK: return "ok";
    case DHOA_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case DHOA_ERR_DOMAIN: return "domain-error";
    case DHOA_ERR_DIVERGENT: return "divergent";
    case DHOA_ERR_NUMERICAL: return "numerical-failure";
    case DHOA_ERR_REJECTED: return "rejected";
    case DHOA_ERR_PARSE: return "parse-error";
    case DHOA_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* dhoa_last_error(void) {
    return g_last_error.c_str();
}

void dhoa_string_free(char* s) {
    delete[] s;
}

dhoa_status dhoa_weight_create(const char* spec_json, dhoa_weight** out) {
    if (!spec_json || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        dhoa::RunConfig cfg;
        cfg.weight_spec = dhoa::Json::parse(spec_json, nullptr, false);
        if (cfg.weight_spec.is_discarded())
            throw dhoa::ParseError("weight spec is not valid JSON");
        *out = new dhoa_weight{cfg.make_weight()};
        return DHOA_OK;
    });
}

void dhoa_weight_destroy(dhoa_weight* w) {
    delete w;
}

dhoa_status dhoa_weight_evaluate(const dhoa_weight* w, double x, double* out) {
    if (!w || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = w->w.evaluate(x);
        return DHOA_OK;
    });
}

dhoa_status dhoa_profile_create(const dhoa_weight* w, const char* method, dhoa_profile** out) {
    if (!w || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        dhoa::MellinOptions mo;
        if (method && std::strcmp(method, "auto") != 0) {
            if (std::strcmp(method, "closed_form") == 0)
                mo.method = dhoa::MellinMethod::closed_form;
            else if (std::strcmp(method, "quadrature") == 0)
                mo.method = dhoa::MellinMethod::quadrature;
            else
                throw dhoa::InvalidArgument("method must be auto, closed_form or quadrature");
        }
        *out = new dhoa_profile{std::make_shared<dhoa::MellinProfile>(w->w, mo)};
        return DHOA_OK;
    });
}

void dhoa_profile_destroy(dhoa_profile* p) {
    delete p;
}

dhoa_status dhoa_profile_value(const dhoa_profile* p, double rho, double* out) {
    if (!p || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = p->p->value(rho);
        return DHOA_OK;
    });
}

dhoa_status dhoa_profile_log_value(const dhoa_profile* p, double rho, double* out) {
    if (!p || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = p->p->log_value(rho);
        return DHOA_OK;
    });
}

dhoa_status dhoa_profile_abscissa(const dhoa_profile* p, double* nu) {
    if (!p || !nu)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *nu = p->p->abscissa();
        return DHOA_OK;
    });
}

dhoa_status dhoa_profile_ratio_limits(const dhoa_profile* p, double* at_minus, double* at_plus) {
    if (!p || !at_minus || !at_plus)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        const dhoa::RatioLimits& rl = p->p->ratio_limits();
        *at_minus = rl.at_minus_infinity;
        *at_plus = rl.at_plus_infinity;
        return DHOA_OK;
    });
}

dhoa_status dhoa_algebra_build(const dhoa_profile* p, dhoa_mode mode, double mu,
                               dhoa_algebra** out, char** report_json) {
    if (!p || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        dhoa::BuildOutcome res = dhoa::build_algebra(
            p->p, mode == DHOA_MODE_CREATION ? dhoa::Mode::creation : dhoa::Mode::annihilation,
            mu);
        if (report_json)
            *report_json = dup_string(dhoa::to_json(res.report).dump());
        if (!res.algebra) {
            g_last_error = res.report.rejection_reason;
            *out = nullptr;
            return DHOA_ERR_REJECTED;
        }
        *out = new dhoa_algebra{*std::move(res.algebra)};
        return DHOA_OK;
    });
}

void dhoa_algebra_destroy(dhoa_algebra* a) {
    delete a;
}

dhoa_status dhoa_algebra_psi(const dhoa_algebra* a, double rho, double* out) {
    if (!a || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = a->a.psi(rho);
        return DHOA_OK;
    });
}

dhoa_status dhoa_algebra_psi_factorial(const dhoa_algebra* a, long n, double* out) {
    if (!a || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = a->a.psi_factorial(n);
        return DHOA_OK;
    });
}

dhoa_status dhoa_algebra_dual(const dhoa_algebra* a, dhoa_algebra** out) {
    if (!a || !out)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = new dhoa_algebra{a->a.dual()};
        return DHOA_OK;
    });
}

dhoa_status dhoa_algebra_spectrum(const dhoa_algebra* a, dhoa_spectrum_shape* shape, long* edge) {
    if (!a || !shape || !edge)
        return DHOA_ERR_INVALID_ARGUMENT;
    const dhoa::SpectrumDescriptor& s = a->a.spectrum();
    switch (s.shape) {
    case dhoa::SpectrumDescriptor::Shape::all_integers:
        *shape = DHOA_SPECTRUM_ALL_INTEGERS;
        break;
    case dhoa::SpectrumDescriptor::Shape::lower_bounded:
        *shape = DHOA_SPECTRUM_LOWER_BOUNDED;
        break;
    case dhoa::SpectrumDescriptor::Shape::upper_bounded:
        *shape = DHOA_SPECTRUM_UPPER_BOUNDED;
        break;
    }
    *edge = s.edge;
    return DHOA_OK;
}

dhoa_status dhoa_algebra_domain(const dhoa_algebra* a, double* inner_sq, double* outer_sq) {
    if (!a || !inner_sq || !outer_sq)
        return DHOA_ERR_INVALID_ARGUMENT;
    *inner_sq = a->a.domain().inner_sq;
    *outer_sq = a->a.domain().outer_sq;
    return DHOA_OK;
}

dhoa_status dhoa_algebra_kernel(const dhoa_algebra* a, double x_re, double x_im,
                                double* out_re, double* out_im) {
    if (!a || !out_re || !out_im)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        const dhoa::Complex g = dhoa::kernel(a->a, dhoa::Complex(x_re, x_im));
        *out_re = g.real();
        *out_im = g.imag();
        return DHOA_OK;
    });
}

dhoa_status dhoa_algebra_eigen_residual(const dhoa_algebra* a, double z_re, double z_im,
                                        long extent, double* out) {
    if (!a || !out || extent < 8)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = dhoa::eigen_residual(a->a, dhoa::Complex(z_re, z_im), extent);
        return DHOA_OK;
    });
}

dhoa_status dhoa_analyze(const char* config_json, char** report_json) {
    if (!config_json || !report_json)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        dhoa::Json j = dhoa::Json::parse(config_json, nullptr, false);
        if (j.is_discarded())
            throw dhoa::ParseError("configuration is not valid JSON");
        dhoa::RunConfig cfg = dhoa::RunConfig::from_json(j);
        cfg.make_weight(); // validate the weight spec up front
        dhoa::RunResult res = dhoa::run_analyze(cfg);
        *report_json = dup_string(res.report.dump(2));
        return DHOA_OK;
    });
}

dhoa_status dhoa_reproduce_paper(int max_threads, char** report_json) {
    if (!report_json)
        return DHOA_ERR_INVALID_ARGUMENT;
    return guard([&] {
        dhoa::RunResult res = dhoa::run_reproduce_paper(max_threads);
        *report_json = dup_string(res.report.dump(2));
        return DHOA_OK;
    });
}

} // extern "C"
