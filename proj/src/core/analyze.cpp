#include "core/analyze.hpp"

#include <chrono>
#include <cmath>

#include "core/errors.hpp"

namespace dhoa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double require_number(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError(std::string("weight spec needs numeric field '") + key + "'");
    return j[key].get<double>();
}

double number_or_inf(const Json& v, const char* key) {
    if (v.is_number())
        return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "infinity")
            return kInf;
    }
    throw ParseError(std::string("field '") + key + "' must be a number or \"inf\"");
}

} // namespace

Json num_or_str(double v) {
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

Json to_json(const DiagnosticsReport& rep) {
    Json checks = Json::array();
    for (const CheckEntry& c : rep.checks) {
        const char* status = c.status == CheckEntry::Status::pass
                                 ? "pass"
                                 : (c.status == CheckEntry::Status::fail ? "fail"
                                                                         : "not-applicable");
        checks.push_back({{"name", c.name},
                          {"status", status},
                          {"required", c.required},
                          {"residual", num_or_str(c.residual)},
                          {"statement", c.statement}});
    }
    Json out;
    out["checks"] = checks;
    // The verdict reflects existence of the algebra; failed verification
    // checks keep the verdict but are visible in checks_passed.
    out["verdict"] = rep.constructible ? "constructible" : "rejected";
    out["checks_passed"] = rep.all_required_pass();
    if (!rep.rejection_reason.empty())
        out["rejection_reason"] = rep.rejection_reason;
    return out;
}

// ---------------------------------------------------------------------------
// RunConfig

WeightFunction RunConfig::make_weight() const {
    const Json& w = weight_spec;
    if (!w.is_object() || !w.contains("family") || !w["family"].is_string())
        throw ParseError("weight spec needs a 'family' string");
    const std::string family = w["family"].get<std::string>();
    try {
        if (family == "power") {
            const double alpha = w.contains("alpha") ? require_number(w, "alpha") : 0.0;
            const double beta = w.contains("beta") ? number_or_inf(w["beta"], "beta") : 1.0;
            return WeightFunction::power(require_number(w, "sigma"), Interval(alpha, beta));
        }
        if (family == "power_beta")
            return WeightFunction::power_beta(require_number(w, "sigma"),
                                              require_number(w, "eta"),
                                              require_number(w, "beta"));
        if (family == "stretched_exp")
            return WeightFunction::stretched_exp(
                static_cast<long>(require_number(w, "k")),
                static_cast<long>(require_number(w, "m")));
        if (family == "log_gaussian")
            return WeightFunction::log_gaussian(require_number(w, "sigma"),
                                                static_cast<int>(require_number(w, "n")));
        if (family == "essential_edge") {
            const double alpha = w.contains("alpha") ? require_number(w, "alpha") : 0.0;
            return WeightFunction::essential_edge(require_number(w, "beta"), alpha);
        }
        if (family == "tabulated") {
            if (!w.contains("x") || !w.contains("f") || !w["x"].is_array() || !w["f"].is_array())
                throw ParseError("tabulated weight needs 'x' and 'f' arrays");
            return WeightFunction::tabulated(w["x"].get<std::vector<double>>(),
                                             w["f"].get<std::vector<double>>());
        }
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("invalid weight parameters: ") + e.what());
    }
    throw ParseError("unknown weight family '" + family + "'");
}

RunConfig RunConfig::from_json(const Json& j) {
    RunConfig cfg;
    if (!j.is_object())
        throw ParseError("configuration must be a JSON object");
    if (!j.contains("weight"))
        throw ParseError("configuration needs a 'weight' object");
    cfg.weight_spec = j["weight"];

    if (j.contains("mode")) {
        const std::string m = j["mode"].get<std::string>();
        if (m == "annihilation")
            cfg.mode = Mode::annihilation;
        else if (m == "creation")
            cfg.mode = Mode::creation;
        else
            throw ParseError("mode must be 'annihilation' or 'creation'");
    }
    if (j.contains("mu"))
        cfg.mu = j["mu"].get<double>();
    if (j.contains("method")) {
        const std::string m = j["method"].get<std::string>();
        if (m == "auto")
            cfg.method = MellinMethod::automatic;
        else if (m == "closed_form")
            cfg.method = MellinMethod::closed_form;
        else if (m == "quadrature")
            cfg.method = MellinMethod::quadrature;
        else
            throw ParseError("method must be 'auto', 'closed_form' or 'quadrature'");
    }
    if (j.contains("grid")) {
        const Json& g = j["grid"];
        if (g.contains("points"))
            cfg.grid_points = g["points"].get<int>();
        if (g.contains("span"))
            cfg.grid_span = g["span"].get<double>();
    }
    if (j.contains("quadrature")) {
        const Json& q = j["quadrature"];
        if (q.contains("max_panels")) {
            cfg.quadrature.max_panels = q["max_panels"].get<int>();
            if (cfg.quadrature.max_panels < 1)
                throw ParseError("quadrature max_panels must be positive");
        }
        if (q.contains("rel_tol")) {
            cfg.quadrature.rel_tol = q["rel_tol"].get<double>();
            if (!(cfg.quadrature.rel_tol > 0.0))
                throw ParseError("quadrature rel_tol must be positive");
        }
    }
    if (j.contains("basis") && j["basis"].contains("extent"))
        cfg.basis_extent = j["basis"]["extent"].get<long>();
    if (j.contains("nmax")) // flag-level alias
        cfg.basis_extent = j["nmax"].get<long>();
    if (j.contains("seed"))
        cfg.verify.seed = j["seed"].get<unsigned>();
    if (j.contains("coherent_points")) {
        for (const Json& pt : j["coherent_points"]) {
            if (!pt.is_array() || pt.size() != 2)
                throw ParseError("coherent_points entries must be [re, im] pairs");
            cfg.coherent_points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
    }
    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        auto grab = [&](const char* key, double& slot) {
            if (t.contains(key)) {
                slot = t[key].get<double>();
                if (!(slot > 0.0))
                    throw ParseError(std::string("tolerance '") + key + "' must be positive");
            }
        };
        grab("adjointness", cfg.verify.adjoint_tol);
        grab("ladder_relations", cfg.verify.relation_tol);
        grab("gram_finite", cfg.verify.gram_tol_finite);
        grab("gram_infinite", cfg.verify.gram_tol_infinite);
        grab("eigen_inside", cfg.verify.eigen_inside_tol);
        grab("kernel", cfg.verify.kernel_tol);
        grab("monomial", cfg.verify.monomial_tol);
    }
    if (cfg.basis_extent < 8)
        throw ParseError("basis extent must be at least 8");
    if (cfg.grid_points < 3)
        throw ParseError("grid needs at least 3 points");
    return cfg;
}

Json RunConfig::echo() const {
    Json j;
    j["weight"] = weight_spec;
    j["mode"] = mode == Mode::annihilation ? "annihilation" : "creation";
    j["mu"] = mu;
    j["method"] = method == MellinMethod::automatic
                      ? "auto"
                      : (method == MellinMethod::closed_form ? "closed_form" : "quadrature");
    j["grid"] = {{"points", grid_points}, {"span", grid_span}};
    j["basis"] = {{"extent", basis_extent}};
    j["seed"] = verify.seed;
    return j;
}

// ---------------------------------------------------------------------------
// analyze pipeline

namespace {

const char* spectrum_name(SpectrumDescriptor::Shape s) {
    switch (s) {
    case SpectrumDescriptor::Shape::all_integers: return "all-integers";
    case SpectrumDescriptor::Shape::lower_bounded: return "lower-bounded";
    case SpectrumDescriptor::Shape::upper_bounded: return "upper-bounded";
    }
    return "?";
}

Json mellin_to_json(const MellinProfile& p, bool with_limits) {
    Json m;
    const ConvergenceDomain& conv = p.convergence();
    const char* shape = "all";
    switch (conv.shape) {
    case ConvergenceDomain::Shape::all_rho: shape = "all"; break;
    case ConvergenceDomain::Shape::above_nu: shape = "above-nu"; break;
    case ConvergenceDomain::Shape::below_nu: shape = "below-nu"; break;
    case ConvergenceDomain::Shape::nowhere: shape = "nowhere"; break;
    }
    m["shape"] = shape;
    m["nu"] = num_or_str(conv.abscissa());
    m["method"] = p.has_closed_form() && p.options().method != MellinMethod::quadrature
                      ? "closed-form"
                      : "quadrature";
    if (with_limits) {
        const RatioLimits& rl = p.ratio_limits();
        m["ratio_limits"] = {
            {"at_minus_infinity", num_or_str(rl.at_minus_infinity)},
            {"at_plus_infinity", num_or_str(rl.at_plus_infinity)},
            {"confidence",
             rl.confidence == RatioLimits::Confidence::closed_form ? "closed-form"
                                                                   : "extrapolated"},
            {"residual", num_or_str(rl.residual)}};
        m["normalization"] = num_or_str(std::exp(p.log_normalization()));
    }
    return m;
}

} // namespace

RunResult run_analyze(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult res;
    Json& rep = res.report;
    rep["config"] = cfg.echo();

    DiagnosticsReport diag;
    try {
        WeightFunction w = cfg.make_weight();
        rep["weight"] = w.describe();

        MellinOptions mo;
        mo.method = cfg.method;
        mo.quadrature = cfg.quadrature;
        auto profile = std::make_shared<MellinProfile>(std::move(w), mo);

        BuildOutcome build = build_algebra(profile, cfg.mode, cfg.mu);
        diag.merge(build.report);

        const bool usable_shape =
            profile->convergence().shape == ConvergenceDomain::Shape::all_rho ||
            profile->convergence().shape == ConvergenceDomain::Shape::above_nu;
        rep["mellin"] = mellin_to_json(*profile, usable_shape);

        if (build.algebra) {
            const DeformedAlgebra& alg = *build.algebra;
            rep["spectrum"] = {{"shape", spectrum_name(alg.spectrum().shape)},
                               {"edge", alg.spectrum().edge}};
            rep["domain"] = {{"inner_sq", num_or_str(alg.domain().inner_sq)},
                             {"outer_sq", num_or_str(alg.domain().outer_sq)}};

            diag.merge(check_sufficient(alg, cfg.checks));

            Json samples = Json::array();
            for (double rho : make_psi_grid(alg, cfg.grid_points, cfg.grid_span))
                samples.push_back({{"rho", rho}, {"psi", num_or_str(alg.psi(rho))}});
            rep["psi_samples"] = samples;

            TruncatedBasis basis(alg, cfg.basis_extent, -cfg.basis_extent);
            diag.merge(verify_representation(alg, basis, cfg.verify));

            // kernel table on a few interior arguments
            Json ker = Json::array();
            const CoherentDomain& dom = alg.domain();
            for (double u : {0.3, 0.5, 0.8}) {
                double xx = std::isfinite(dom.outer_sq)
                                ? dom.inner_sq + (dom.outer_sq - dom.inner_sq) * u
                                : std::max(dom.inner_sq * 2.0, 0.25) * std::pow(8.0, u);
                Complex g = kernel(alg, Complex(xx, 0.0));
                ker.push_back(
                    {{"x", xx}, {"g_re", num_or_str(g.real())}, {"g_im", num_or_str(g.imag())}});
            }
            rep["kernel_samples"] = ker;

            // eigen-residual table (explicit points from the config, if any)
            Json eig = Json::array();
            for (const Complex& z : cfg.coherent_points) {
                const double r = eigen_residual(alg, z, cfg.basis_extent);
                eig.push_back({{"z_re", z.real()},
                               {"z_im", z.imag()},
                               {"inside", dom.contains_sq(std::norm(z))},
                               {"residual", num_or_str(r)}});
            }
            rep["eigen_samples"] = eig;
        }

        const bool ok = diag.constructible && diag.all_required_pass();
        res.exit_status = ok ? 0 : 1;
    } catch (const NumericalFailure& e) {
        rep["numerical_failure"] = {{"what", e.what()},
                                    {"best_estimate", num_or_str(e.best_estimate())},
                                    {"error_bound", num_or_str(e.error_bound())}};
        res.exit_status = 3;
    }

    Json d = to_json(diag);
    rep["checks"] = d["checks"];
    rep["checks_passed"] = d["checks_passed"];
    rep["verdict"] = res.exit_status == 3 ? "numerical-failure" : d["verdict"];
    if (d.contains("rejection_reason"))
        rep["rejection_reason"] = d["rejection_reason"];
    rep["exit_status"] = res.exit_status;
    rep["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace dhoa
