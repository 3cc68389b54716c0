#include "cocycle/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cocycle/errors.hpp"

namespace cocycle::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double EntryFnSpec::eval(const BasePoint& p) const {
    double v = c0;
    for (std::size_t k = 0; k < cos_coef.size(); ++k)
        v += cos_coef[k] * std::cos(kTwoPi * static_cast<double>(k + 1) * p.x);
    for (std::size_t k = 0; k < sin_coef.size(); ++k)
        v += sin_coef[k] * std::sin(kTwoPi * static_cast<double>(k + 1) * p.x);
    return v;
}

std::vector<double> ExperimentConfig::theta_grid() const {
    std::vector<double> g;
    const long steps = std::lround(std::floor((theta_max - theta_min) / theta_step + 1e-9));
    for (long i = 0; i <= steps; ++i) g.push_back(theta_min + theta_step * static_cast<double>(i));
    return g;
}

CertifyOptions ExperimentConfig::certify_options() const {
    CertifyOptions c;
    c.samples = certify_samples;
    c.l_max = certify_l_max;
    c.seed = seed;
    c.section.tol = tol_section;
    c.refutation.n_probe = refute_n_probe;
    c.refutation.gap_floor = refute_gap_floor;
    c.refutation.seed = seed;
    return c;
}

LyapThetaOptions ExperimentConfig::lyap_options() const {
    LyapThetaOptions o;
    o.orbit_length = orbit_length;
    o.samples = samples;
    o.seed = seed;
    o.u.tol = tol_u;
    return o;
}

namespace {

// numeric fields accept JSON numbers or decimal strings (locale drift guard)
double as_double(const ordered_json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        double v = 0.0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw config_error("field '" + field + "': cannot parse decimal string '" + s + "'");
        return v;
    }
    throw config_error("field '" + field + "' must be a number or decimal string");
}

double get_double(const ordered_json& j, const std::string& field, double dflt) {
    if (!j.contains(field)) return dflt;
    return as_double(j.at(field), field);
}

long get_long(const ordered_json& j, const std::string& field, long dflt) {
    if (!j.contains(field)) return dflt;
    return static_cast<long>(std::llround(as_double(j.at(field), field)));
}

EntryFnSpec parse_entry_fn(const ordered_json& j, const std::string& field) {
    EntryFnSpec f;
    if (j.is_number() || j.is_string()) {
        f.c0 = as_double(j, field);
        return f;
    }
    if (!j.is_object()) throw config_error("field '" + field + "' must be a number or object");
    f.c0 = get_double(j, "c0", 0.0);
    for (const char* name : {"cos", "sin"}) {
        if (!j.contains(name)) continue;
        if (!j.at(name).is_array()) throw config_error("field '" + field + "." + name + "' must be an array");
        std::vector<double>& dst = name[0] == 'c' ? f.cos_coef : f.sin_coef;
        int k = 0;
        for (const auto& v : j.at(name)) dst.push_back(as_double(v, field + "[" + std::to_string(k++) + "]"));
    }
    return f;
}

BaseSystem parse_base(const ordered_json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle_rotation") return BaseSystem::circle_rotation(as_double(j.at("alpha"), "base.alpha"));
    if (kind == "torus_automorphism") {
        const auto& m = j.at("matrix");
        IMat2 im{static_cast<long long>(std::llround(as_double(m.at(0).at(0), "base.matrix"))),
                 static_cast<long long>(std::llround(as_double(m.at(0).at(1), "base.matrix"))),
                 static_cast<long long>(std::llround(as_double(m.at(1).at(0), "base.matrix"))),
                 static_cast<long long>(std::llround(as_double(m.at(1).at(1), "base.matrix")))};
        return BaseSystem::torus_automorphism(im);
    }
    if (kind == "periodic_orbit") {
        std::vector<BasePoint> pts;
        for (const auto& p : j.at("points"))
            pts.push_back({as_double(p.at(0), "base.points"), as_double(p.at(1), "base.points"), -1});
        return BaseSystem::periodic_orbit(std::move(pts));
    }
    throw config_error("base.kind must be circle_rotation | torus_automorphism | periodic_orbit");
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("JSON parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("cocycle")) {
            const auto& c = j.at("cocycle");
            const std::string kind = c.at("kind").get<std::string>();
            if (kind == "constant") {
                cfg.kind = ExperimentConfig::CocycleKind::constant_matrix;
                const auto& e = c.at("entries");
                cfg.constant_entries = {as_double(e.at(0).at(0), "cocycle.entries"),
                                        as_double(e.at(0).at(1), "cocycle.entries"),
                                        as_double(e.at(1).at(0), "cocycle.entries"),
                                        as_double(e.at(1).at(1), "cocycle.entries")};
            } else if (kind == "heisenberg") {
                cfg.kind = ExperimentConfig::CocycleKind::heisenberg;
            } else if (kind == "triangular") {
                cfg.kind = ExperimentConfig::CocycleKind::triangular;
                cfg.lam = parse_entry_fn(c.at("lam"), "cocycle.lam");
                cfg.sig = parse_entry_fn(c.at("sig"), "cocycle.sig");
                cfg.eta = parse_entry_fn(c.at("eta"), "cocycle.eta");
            } else {
                throw config_error("cocycle.kind must be constant | heisenberg | triangular");
            }
        }
        if (j.contains("base")) cfg.base = parse_base(j.at("base"));
        else if (cfg.kind == ExperimentConfig::CocycleKind::heisenberg)
            cfg.base = BaseSystem::torus_automorphism({2, 1, 1, 1});

        if (j.contains("theta_grid")) {
            const auto& g = j.at("theta_grid");
            cfg.theta_min = as_double(g.at("min"), "theta_grid.min");
            cfg.theta_max = as_double(g.at("max"), "theta_grid.max");
            cfg.theta_step = as_double(g.at("step"), "theta_grid.step");
        }
        if (!(cfg.theta_step > 0.0)) throw config_error("theta_grid.step must be > 0");
        if (cfg.theta_max < cfg.theta_min) throw config_error("theta_grid.max must be >= min");

        cfg.orbit_length = get_long(j, "orbit_length", cfg.orbit_length);
        if (cfg.orbit_length < 1) throw config_error("orbit_length must be >= 1");
        cfg.samples = static_cast<int>(get_long(j, "samples", cfg.samples));
        if (cfg.samples < 1) throw config_error("samples must be >= 1");
        cfg.seed = static_cast<std::uint64_t>(get_long(j, "seed", static_cast<long>(cfg.seed)));
        cfg.series_depth = static_cast<int>(get_long(j, "series_depth", cfg.series_depth));

        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            cfg.tol_section = get_double(t, "section", cfg.tol_section);
            cfg.tol_u = get_double(t, "u", cfg.tol_u);
            cfg.tol_formula_vs_direct = get_double(t, "formula_vs_direct", cfg.tol_formula_vs_direct);
            if (!(cfg.tol_section > 0.0) || !(cfg.tol_u > 0.0) || !(cfg.tol_formula_vs_direct > 0.0))
                throw config_error("tolerances must be positive");
        }
        if (j.contains("certify")) {
            const auto& t = j.at("certify");
            cfg.certify_samples = static_cast<int>(get_long(t, "samples", cfg.certify_samples));
            cfg.certify_l_max = static_cast<int>(get_long(t, "l_max", cfg.certify_l_max));
            cfg.refute_n_probe = static_cast<int>(get_long(t, "n_probe", cfg.refute_n_probe));
            cfg.refute_gap_floor = get_double(t, "gap_floor", cfg.refute_gap_floor);
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config structure error: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

// All outputs staged here and renamed together; failure leaves nothing.
class StagedOutputs {
public:
    explicit StagedOutputs(const std::string& out_dir) : dir_(out_dir) {
        fs::create_directories(dir_);
    }
    ~StagedOutputs() {
        for (const auto& [tmp, final_] : staged_)
            if (fs::exists(tmp)) fs::remove(tmp);
    }

    void stage(const std::string& name, const std::string& content) {
        const fs::path tmp = dir_ / (name + ".tmp");
        std::ofstream out(tmp, std::ios::binary);
        out << content;
        out.close();
        if (!out) throw std::runtime_error("failed to write " + tmp.string());
        staged_.emplace_back(tmp, dir_ / name);
    }

    std::vector<std::string> commit() {
        std::vector<std::string> files;
        for (auto& [tmp, final_] : staged_) {
            fs::rename(tmp, final_);
            files.push_back(final_.string());
        }
        staged_.clear();
        return files;
    }

private:
    fs::path dir_;
    std::vector<std::pair<fs::path, fs::path>> staged_;
};

struct Pipeline {
    TriangularCocycle tri;
    CocycleSpec base_cocycle; // the A whose rotations get certified
};

Pipeline build_pipeline(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
    case ExperimentConfig::CocycleKind::constant_matrix: {
        const CocycleSpec c = constant_cocycle(cfg.constant_entries);
        SectionOptions sopt;
        sopt.tol = cfg.tol_section;
        return {build_triangular(c, cfg.base, sopt, cfg.certify_samples, cfg.seed), c};
    }
    case ExperimentConfig::CocycleKind::heisenberg: {
        const HeisenbergModel model = heisenberg_model();
        const CocycleSpec c = ecu_cocycle(model);
        SectionOptions sopt;
        sopt.tol = cfg.tol_section;
        return {build_triangular(c, model.base, sopt, cfg.certify_samples, cfg.seed), c};
    }
    case ExperimentConfig::CocycleKind::triangular: {
        const EntryFnSpec lam = cfg.lam, sig = cfg.sig, eta = cfg.eta;
        TriangularCocycle tri = TriangularCocycle::from_functions(
            cfg.base, [lam](const BasePoint& p) { return lam.eval(p); },
            [sig](const BasePoint& p) { return sig.eval(p); },
            [eta](const BasePoint& p) { return eta.eval(p); });
        CocycleSpec c = tri.as_cocycle();
        return {std::move(tri), std::move(c)};
    }
    }
    throw std::logic_error("unreachable");
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string s = "theta,lambda_plus_formula,lambda_plus_direct,lambda_minus,dominated,"
                    "residual,ddlambda_estimate\r\n";
    for (const SweepRow& r : rows) {
        s += fmt17(r.theta) + "," + fmt17(r.lambda_plus_formula) + "," +
             fmt17(r.lambda_plus_direct) + "," + fmt17(r.lambda_minus) + "," +
             to_string(r.verdict) + "," + fmt17(r.residual) + "," + fmt17(r.dd_estimate) +
             "\r\n";
    }
    return s;
}

std::string plotdata_csv(const std::vector<SweepRow>& rows) {
    std::string s = "theta,lambda_plus\r\n";
    for (const SweepRow& r : rows)
        if (std::isfinite(r.lambda_plus_formula))
            s += fmt17(r.theta) + "," + fmt17(r.lambda_plus_formula) + "\r\n";
    return s;
}

std::string dset_csv(const std::vector<DsetRow>& rows) {
    std::string s = "theta,verdict,l,margin,gap_rate\r\n";
    for (const DsetRow& r : rows)
        s += fmt17(r.theta) + "," + to_string(r.verdict) + "," + std::to_string(r.l) + "," +
             fmt17(r.margin) + "," + fmt17(r.gap_rate) + "\r\n";
    return s;
}

ordered_json certificate_json(const DominationCertificate& cert) {
    ordered_json j;
    j["verdict"] = to_string(cert.verdict);
    j["l"] = cert.l;
    j["margin"] = cert.margin;
    j["samples"] = cert.samples.size();
    int converged = 0;
    for (const auto& s : cert.samples) converged += s.converged ? 1 : 0;
    j["converged_sections"] = converged;
    if (cert.witness) {
        j["witness"] = {{"x", {cert.witness->x.x, cert.witness->x.y}},
                        {"n", cert.witness->n},
                        {"gap_rate", cert.witness->gap_rate}};
    }
    if (!cert.note.empty()) j["note"] = cert.note;
    return j;
}

ordered_json derivatives_json(const DerivativeData& d, double tau) {
    ordered_json j;
    j["dlambda0"] = d.dlambda;
    j["ddlambda0"] = d.ddlambda;
    j["concave"] = d.concave;
    j["K"] = d.K;
    j["tau"] = tau;
    j["udot0_truncation_bound"] = d.udot_tail_bound;
    j["uddot0_truncation_bound"] = d.uddot_tail_bound;
    j["sup_alpha_sigma"] = d.sup_alpha_sigma;
    return j;
}

RunResult fail(int code, const std::string& kind, const std::string& detail) {
    ordered_json j;
    j["error"] = kind;
    j["detail"] = detail;
    RunResult r;
    r.exit_code = code;
    r.error = j.dump(2);
    return r;
}

} // namespace

RunResult run(const ExperimentConfig& cfg, const std::string& out_dir) {
    try {
        StagedOutputs out(out_dir);
        const Pipeline pipe = build_pipeline(cfg);

        SweepOptions sopt;
        sopt.lyap = cfg.lyap_options();
        sopt.certify = cfg.certify_options();
        sopt.formula_vs_direct_tol = cfg.tol_formula_vs_direct;
        const std::vector<SweepRow> rows = sweep(pipe.tri, cfg.theta_grid(), sopt);
        for (const SweepRow& r : rows)
            if (r.anomaly)
                return fail(1, "sweep_anomaly",
                            "theta = " + fmt17(r.theta) + ": " + r.note);

        const DerivativeData deriv =
            derivatives_at_zero(pipe.tri, cfg.lyap_options(), cfg.series_depth);
        if (!deriv.concave)
            return fail(1, "concavity_anomaly",
                        "ddlambda0 = " + fmt17(deriv.ddlambda) + " is non-negative");

        const DominationCertificate cert =
            certify(pipe.base_cocycle, pipe.tri.base(), cfg.certify_options());

        out.stage("sweep.csv", sweep_csv(rows));
        out.stage("plotdata.csv", plotdata_csv(rows));
        out.stage("derivatives.json", derivatives_json(deriv, pipe.tri.tau()).dump(2) + "\n");
        out.stage("certificate.json", certificate_json(cert).dump(2) + "\n");

        RunResult res;
        res.files_written = out.commit();
        return res;
    } catch (const config_error& e) {
        return fail(2, "config_error", e.what());
    } catch (const std::exception& e) {
        return fail(1, "run_error", e.what());
    }
}

RunResult run_derivatives(const ExperimentConfig& cfg, const std::string& out_dir) {
    try {
        StagedOutputs out(out_dir);
        const Pipeline pipe = build_pipeline(cfg);
        const DerivativeData deriv =
            derivatives_at_zero(pipe.tri, cfg.lyap_options(), cfg.series_depth);
        out.stage("derivatives.json", derivatives_json(deriv, pipe.tri.tau()).dump(2) + "\n");
        RunResult res;
        res.files_written = out.commit();
        if (!deriv.concave)
            return fail(1, "concavity_anomaly",
                        "ddlambda0 = " + fmt17(deriv.ddlambda) + " is non-negative");
        return res;
    } catch (const config_error& e) {
        return fail(2, "config_error", e.what());
    } catch (const std::exception& e) {
        return fail(1, "run_error", e.what());
    }
}

RunResult run_dominate(const ExperimentConfig& cfg, const std::string& out_dir) {
    try {
        StagedOutputs out(out_dir);
        const Pipeline pipe = build_pipeline(cfg);
        const std::vector<DsetRow> rows =
            dset_sweep(pipe.base_cocycle, pipe.tri.base(), cfg.theta_grid(), cfg.certify_options());
        const DominationCertificate cert =
            certify(pipe.base_cocycle, pipe.tri.base(), cfg.certify_options());
        out.stage("dset.csv", dset_csv(rows));
        out.stage("certificate.json", certificate_json(cert).dump(2) + "\n");
        RunResult res;
        res.files_written = out.commit();
        return res;
    } catch (const config_error& e) {
        return fail(2, "config_error", e.what());
    } catch (const std::exception& e) {
        return fail(1, "run_error", e.what());
    }
}

RunResult run_heisenberg(const ExperimentConfig& cfg, const std::string& out_dir) {
    try {
        StagedOutputs out(out_dir);
        const HeisenbergModel model = heisenberg_model();
        CorollaryOptions copt;
        copt.lyap = cfg.lyap_options();
        copt.certify = cfg.certify_options();
        const CorollaryReport rep = corollary_main_report(model, cfg.theta_grid(), copt);

        std::string csv = "theta,verdict,lambda_plus,lambda_minus,witness\r\n";
        for (const CorollaryRow& r : rep.rows)
            csv += fmt17(r.theta) + "," + to_string(r.verdict) + "," + fmt17(r.lambda_plus) +
                   "," + fmt17(r.lambda_minus) + "," + (r.witness ? "1" : "0") + "\r\n";

        std::string summary;
        summary += "heisenberg nilmanifold rotated family\n";
        summary += "lambda_plus(0)  = " + fmt17(rep.lambda_plus_0) + "\n";
        summary += "lambda_minus(0) = " + fmt17(rep.lambda_minus_0) + "\n";
        summary += "log(lam_u)      = " + fmt17(std::log(model.lam_u)) + "\n";
        summary += "ddlambda0       = " + fmt17(rep.ddlambda0) + "\n";
        if (rep.found) {
            summary += "nonuniform-hyperbolicity window: [" + fmt17(rep.lo) + ", " +
                       fmt17(rep.hi) + "] (threshold " + fmt17(rep.threshold) + ")\n";
        } else {
            summary += "no window found: " + rep.note + "\n";
        }

        out.stage("corollary.csv", csv);
        out.stage("summary.txt", summary);
        RunResult res;
        res.files_written = out.commit();
        if (rep.ddlambda0 >= 0.0)
            return fail(1, "concavity_anomaly", "ddlambda0 is non-negative");
        return res;
    } catch (const config_error& e) {
        return fail(2, "config_error", e.what());
    } catch (const std::exception& e) {
        return fail(1, "run_error", e.what());
    }
}

SelftestResult selftest(double tolerance_scale) {
    SelftestResult res;
    res.pass = true;
    std::string& rep = res.report;

    auto check = [&](const std::string& name, double measured, double expected, double tol) {
        tol *= tolerance_scale;
        const bool ok = std::abs(measured - expected) <= tol;
        res.pass = res.pass && ok;
        rep += std::string(ok ? "[ok]   " : "[FAIL] ") + name + ": measured=" + fmt17(measured) +
               " expected=" + fmt17(expected) + " tol=" + fmt17(tol) + "\n";
    };
    auto check_true = [&](const std::string& name, bool ok, const std::string& detail) {
        res.pass = res.pass && ok;
        rep += std::string(ok ? "[ok]   " : "[FAIL] ") + name + ": " + detail + "\n";
    };

    const BaseSystem circle = BaseSystem::circle_rotation(std::sqrt(2.0) - 1.0);
    const TriangularCocycle tri0 = TriangularCocycle::constant(circle, 0.5, 0.0, 2.0);
    const TriangularCocycle tri1 = TriangularCocycle::constant(circle, 0.5, 1.0, 2.0);
    LyapThetaOptions lopt;
    lopt.orbit_length = 2000;
    lopt.samples = 8;

    // arccosh oracle for the sigma = 0 constant family
    for (const double theta : {0.0, 0.1, -0.3, 0.6}) {
        const double t = 2.5 * std::cos(theta);
        const double expected = std::acosh(0.5 * t);
        const LyapThetaResult r = lyap_plus_theta(tri0, theta, lopt);
        check("arccosh_family theta=" + fmt17(theta), r.lambda_plus, expected, 1e-6);
    }

    // derivative closed forms
    check("dlambda0(sigma=1)", derivatives_at_zero(tri1, lopt, 60).dlambda, -2.0 / 3.0, 1e-6);
    check("ddlambda0(sigma=0)", derivatives_at_zero(tri0, lopt, 60).ddlambda, -5.0 / 3.0, 1e-6);
    check("ddlambda0(sigma=1)", derivatives_at_zero(tri1, lopt, 60).ddlambda, -65.0 / 27.0, 1e-6);

    // geometric series
    const BasePoint x0{0.0, 0.0, -1};
    check("udot0", udot0(tri1, x0, 60), -1.0 / 3.0, 1e-10);
    check("uddot0", uddot0(tri1, x0, 60), -16.0 / 27.0, 1e-10);

    // elliptic non-domination at theta = pi/2
    {
        const CocycleSpec fam = rotate_family(constant_cocycle(Mat2::diag(2.0, 0.5)), 0.5 * kPi);
        CertifyOptions copt;
        copt.samples = 8;
        copt.refutation.samples = 8;
        const DominationCertificate cert = certify(fam, circle, copt);
        const bool refuted = cert.verdict == Verdict::not_dominated && cert.witness &&
                             std::abs(cert.witness->gap_rate) <= 1e-8 * tolerance_scale;
        check_true("elliptic_witness theta=pi/2", refuted,
                   cert.witness ? "gap_rate=" + fmt17(cert.witness->gap_rate)
                                : "no witness (" + to_string(cert.verdict) + ")");
    }

    // Heisenberg upper exponent
    {
        const HeisenbergModel model = heisenberg_model();
        LyapOptions dopt;
        dopt.orbit_length = 10000;
        dopt.samples = 32;
        const double measured = lyap_plus_direct(ecu_cocycle(model), model.base, dopt);
        check("heisenberg_lyap_plus", measured, std::log(model.lam_u), 5e-3);
    }

    rep += res.pass ? "selftest: PASS\n" : "selftest: FAIL\n";
    return res;
}

} // namespace cocycle::cli
