#include "qlc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace qlc {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

struct CheckList {
    json checks = json::array();
    bool any_fail = false;
    bool any_ran = false;

    void add(const std::string& name, bool pass, double value, double threshold) {
        checks.push_back({{"name", name},
                          {"status", pass ? "pass" : "fail"},
                          {"value", value},
                          {"threshold", threshold}});
        any_ran = true;
        if (!pass) any_fail = true;
    }
    void add_skipped(const std::string& name) {
        checks.push_back({{"name", name},
                          {"status", "skipped"},
                          {"value", nullptr},
                          {"threshold", nullptr}});
    }
    void add_undefined(const std::string& name) {
        checks.push_back({{"name", name},
                          {"status", "undefined"},
                          {"value", nullptr},
                          {"threshold", nullptr}});
    }
};

json base_record(const RunConfig& cfg, const std::string& command) {
    json rec;
    rec["schema_version"] = kSchemaVersion;
    rec["command"] = command;
    rec["config"] = config_to_text(cfg);
    rec["seed"] = cfg.seed;
    rec["timestamp"] = 0;  // isolated field; filled just before writing
    return rec;
}

CommandResult finalize(const RunConfig& cfg, json rec, const CheckList& cl,
                       const std::string& command) {
    rec["checks"] = cl.checks;
    rec["status"] = cl.any_fail ? "fail" : "pass";
    rec["timestamp"] =
        static_cast<std::int64_t>(std::time(nullptr));

    CommandResult out;
    out.exit_code = cl.any_fail ? 1 : 0;
    out.record_json = rec.dump(2) + "\n";
    std::filesystem::create_directories(cfg.out_dir);
    out.record_path = cfg.out_dir + "/" + command + "_record.json";
    std::ofstream f(out.record_path, std::ios::binary);
    f << out.record_json;
    return out;
}

Mat3 random_tangent(Rng& rng, const Vec3& u) {
    Mat3 g;
    for (int k = 0; k < 3; ++k) {
        Vec3 row = {rng.normal(), rng.normal(), rng.normal()};
        const double proj = dot(row, u);
        for (int i = 0; i < 3; ++i) g[k][i] = row[i] - proj * u[i];
    }
    return g;
}

QTensor random_tensor(Rng& rng, double scale_max) {
    Mat3 raw;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) raw[i][j] = rng.normal();
    QTensor q(raw);
    if (q.norm() < 1e-12) return q;
    return (rng.uniform(0.1, scale_max) / q.norm()) * q;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json tensor_to_json(const QTensor& q) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i)
        rows.push_back({q(i, 0), q(i, 1), q(i, 2)});
    return rows;
}

}  // namespace

CommandResult cmd_verify(const RunConfig& cfg) {
    json rec = base_record(cfg, "verify");
    CheckList cl;
    Rng rng(cfg.seed);
    const double tol = cfg.identity_tol;

    if (cfg.samples == 0) {
        rec["warning"] = "sample count is zero; all checks skipped";
        for (const char* name :
             {"third_order_identity", "fourth_order_combination", "fourth_order_bend",
              "fourth_order_gradient", "oseen_frank_equivalence", "coercive_equivalence",
              "w_tilde_equivalence", "bulk_gradient_fd", "bulk_hessian_fd",
              "hessian_lower_bound"})
            cl.add_skipped(name);
        return finalize(cfg, rec, cl, "verify");
    }

    // Identity suites over random unit tangents and material constants. The
    // negative-control fixture feeds non-unit directors through the same
    // pipeline and must trip the thresholds.
    const double director_stretch = cfg.negative_control ? 1.3 : 1.0;
    double worst3 = 0, worst4c = 0, worst4b = 0, worst4g = 0, worstW = 0, worstC = 0,
           worstWt = 0;
    for (int i = 0; i < cfg.samples; ++i) {
        const MaterialConstants mc = MaterialConstants::make(
            rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
        const Vec3 u0 = rng.unit_vector();
        const Vec3 u = scale(u0, director_stretch);
        const Mat3 g = random_tangent(rng, u0);
        const double s = mc.s_plus;
        const TensorGradient p = uniaxial_gradient(u, g, s);
        const double scale3 =
            1.0 + p.norm_sq() * (1.0 + std::sqrt(2.0 / 3.0) * s);
        worst3 = std::max(worst3, verify_third_order_identity(u, g, s) / scale3);

        const FourthOrderResiduals r4 = verify_fourth_order_identities(u, g, s);
        double gg = 0;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) gg += g[r][c] * g[r][c];
        const double scale4 = 1.0 + s * s * s * s * (1.0 + gg * gg);
        worst4c = std::max(worst4c, r4.combination / scale4);
        worst4b = std::max(worst4b, r4.bend / scale4);
        worst4g = std::max(worst4g, r4.gradient / scale4);

        ElasticConstants L{rng.uniform(0.5, 2.0), rng.uniform(-0.3, 0.5),
                           rng.uniform(-0.3, 0.3), rng.uniform(-0.8, 0.8)};
        const FrankConstants k = elastic_to_frank(L, s);
        const EquivalenceResiduals re = verify_uniaxial_equivalence(u, g, L, s);
        const double scaleW = 1.0 + std::fabs(oseen_frank_W(u0, g, k));
        worstW = std::max(worstW, re.vs_oseen_frank / scaleW);
        worstC = std::max(worstC, re.vs_coercive / scaleW);

        FrankConstants kw{rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0),
                          rng.uniform(0.5, 3.0), rng.uniform(-0.5, 0.5)};
        if (w_tilde_alpha(kw) > 0.0 && kw.k2 > std::fabs(kw.k4) &&
            std::min(kw.k1, kw.k3) > 0.5 * (kw.k2 + kw.k4)) {
            const double w = oseen_frank_W(u0, g, kw);
            const double wt = oseen_frank_W_tilde(scale(u0, director_stretch), g, kw);
            worstWt = std::max(worstWt, std::fabs(w - wt) / (1.0 + std::fabs(w)));
        }
    }
    cl.add("third_order_identity", worst3 <= tol, worst3, tol);
    cl.add("fourth_order_combination", worst4c <= tol, worst4c, tol);
    cl.add("fourth_order_bend", worst4b <= tol, worst4b, tol);
    cl.add("fourth_order_gradient", worst4g <= tol, worst4g, tol);
    cl.add("oseen_frank_equivalence", worstW <= tol, worstW, tol);
    cl.add("coercive_equivalence", worstC <= tol, worstC, tol);
    cl.add("w_tilde_equivalence", worstWt <= tol, worstWt, tol);

    // Bulk calculus against central finite differences.
    {
        double worst_g = 0, worst_h = 0, worst_crit = 0;
        const int n = std::min(cfg.samples, 1000);
        for (int i = 0; i < n; ++i) {
            const QTensor q = random_tensor(rng, 2.0);
            const Coords5 v = pack5(q);
            const Coords5 an = pack5(bulk_gradient(q, cfg.material));
            const auto hess = bulk_hessian(q, cfg.material);
            for (int m = 0; m < 5; ++m) {
                Coords5 vp = v, vm = v;
                vp[m] += 1e-6;
                vm[m] -= 1e-6;
                const double fd = (bulk_value(unpack5(vp), cfg.material) -
                                   bulk_value(unpack5(vm), cfg.material)) /
                                  2e-6;
                worst_g = std::max(worst_g, std::fabs(an[m] - fd) /
                                                (1.0 + std::pow(q.norm(), 3)));
                const Coords5 gp = pack5(bulk_gradient(unpack5(vp), cfg.material));
                const Coords5 gm = pack5(bulk_gradient(unpack5(vm), cfg.material));
                for (int r = 0; r < 5; ++r) {
                    const double hfd = (gp[r] - gm[r]) / 2e-6;
                    worst_h = std::max(worst_h, std::fabs(hess[r * 5 + m] - hfd) /
                                                    (1.0 + q.norm() * q.norm()));
                }
            }
            const QTensor crit =
                from_director(rng.unit_vector(), cfg.material.s_plus * director_stretch);
            worst_crit =
                std::max(worst_crit, bulk_gradient(crit, cfg.material).norm());
        }
        cl.add("bulk_gradient_fd", worst_g <= 1e-6, worst_g, 1e-6);
        cl.add("bulk_hessian_fd", worst_h <= 1e-5, worst_h, 1e-5);
        const double crit_tol = 1e-10 * std::pow(cfg.material.s_plus, 3);
        cl.add("bulk_critical_on_manifold", worst_crit <= crit_tol, worst_crit,
               crit_tol);
    }

    // Eigenframe Hessian lower bound over the uniaxial neighbourhood.
    {
        const double delta = default_delta(cfg.material);
        double worst = 1e300;
        int tested = 0;
        while (tested < cfg.samples) {
            const QTensor base =
                from_director(rng.unit_vector(), cfg.material.s_plus * director_stretch);
            QTensor noise = random_tensor(rng, 1.0);
            if (noise.norm() < 1e-12) continue;
            const QTensor q =
                base + (delta * std::pow(rng.uniform(), 0.2) / noise.norm()) * noise;
            Vec3 xi = {rng.normal(), rng.normal(), 0.0};
            xi[2] = -(xi[0] + xi[1]);
            try {
                const auto r = hessian_bound_check(q, xi, cfg.material, delta);
                worst = std::min(worst, r.lhs - r.rhs);
                ++tested;
            } catch (const std::domain_error&) {
                if (cfg.negative_control) ++tested;  // stretched samples fall outside
            }
        }
        const bool pass = worst >= -1e-10 && worst < 1e290;
        cl.add("hessian_lower_bound", pass, worst < 1e290 ? worst : 0.0, 0.0);
    }

    return finalize(cfg, rec, cl, "verify");
}

CommandResult cmd_coercivity(const RunConfig& cfg) {
    json rec = base_record(cfg, "coercivity");
    CheckList cl;
    Rng rng(cfg.seed);
    const double s = cfg.material.s_plus;

    const ConditionLReport cond = check_condition_L(cfg.elastic, s);
    rec["condition_L"] = {{"holds", cond.holds},
                          {"margin", cond.margin},
                          {"tightest", cond.worst}};
    cl.add("condition_L", cond.holds, cond.margin, 0.0);

    if (cond.holds && cfg.samples > 0) {
        const CoercivityReport rep = estimate_alpha(cfg.elastic, s, cfg.samples, rng);
        rec["alpha"] = rep.alpha;
        rec["upper_C"] = rep.upper_C;
        rec["negative_eigen_count"] = rep.negative_eigen_count;
        cl.add("alpha_positive", rep.alpha > 0.0, rep.alpha, 0.0);
        cl.add("no_negative_eigenvalues", rep.negative_eigen_count == 0,
               rep.negative_eigen_count, 0.0);
    } else {
        cl.add_skipped("alpha_positive");
        cl.add_skipped("no_negative_eigenvalues");
    }

    if (cfg.elastic.L4 != 0.0) {
        const NonCoercivityWitness w = non_coercivity_witness(cfg.elastic, s, -1e3);
        rec["witness"] = {{"Q", tensor_to_json(w.q)},
                          {"p", {tensor_to_json(QTensor(w.p.slice[0])),
                                 tensor_to_json(QTensor(w.p.slice[1])),
                                 tensor_to_json(QTensor(w.p.slice[2]))}},
                          {"value", w.value},
                          {"scale", w.scale}};
        cl.add("non_coercivity_witness", w.value < -1e3, w.value, -1e3);
    } else {
        cl.add_skipped("non_coercivity_witness");
    }

    // Strengthened Ericksen audit on the Frank side.
    const bool newk = cfg.frank.k2 > std::fabs(cfg.frank.k4) &&
                      std::min(cfg.frank.k1, cfg.frank.k3) >
                          0.5 * (cfg.frank.k2 + cfg.frank.k4);
    const HatConstants hat = frank_to_hat(cfg.frank, s);
    rec["strong_ericksen"] = {{"holds", newk},
                              {"alpha_tilde", w_tilde_alpha(cfg.frank)},
                              {"hat", {hat.h1, hat.h2, hat.h3, hat.h4}}};
    cl.add("strong_ericksen_consistent", newk == (hat.min() > 0.0),
           hat.min(), 0.0);

    return finalize(cfg, rec, cl, "coercivity");
}

CommandResult cmd_minimize(const RunConfig& cfg) {
    json rec = base_record(cfg, "minimize");
    CheckList cl;
    SolverConfig sc = make_solver_config(cfg);
    sc.L = cfg.L_list.front();

    QField field = make_scenario_field(cfg);
    if (!cfg.resume_from.empty()) {
        SnapshotMeta meta;
        field = load_snapshot(cfg.resume_from, meta);
    }

    std::string failure;
    MinimizeStats stats;
    try {
        stats = minimize(field, sc);
    } catch (const DivergenceError& e) {
        failure = std::string("divergence (non-coercive density): ") + e.what();
    } catch (const std::domain_error& e) {
        failure = std::string("inadmissible configuration: ") + e.what();
    }

    if (failure.empty()) {
        const EnergyBreakdown e = total_energy(field, sc);
        const Diagnostics diag =
            compute_diagnostics(field, sc, default_diagnostics(field));
        rec["energy"] = {{"elastic", e.elastic},
                         {"bulk_over_L", e.bulk_over_L},
                         {"total", e.total},
                         {"max_dist_uniaxial", e.max_dist_uniaxial},
                         {"ambiguous_nodes", e.ambiguous_nodes},
                         {"max_norm", e.max_norm}};
        rec["iterations"] = stats.iterations;
        rec["final_grad_sup"] = stats.final_grad_sup;
        rec["el_residual"] = el_residual(field, sc);
        rec["diag_gradient_penalty"] = diag.diag_gradient_penalty;
        rec["degenerate_skipped"] = diag.degenerate_skipped;

        std::filesystem::create_directories(cfg.out_dir);
        const std::string snap = cfg.out_dir + "/minimize_field.bin";
        save_snapshot(snap, field, SnapshotMeta{cfg.material.s_plus, cfg.density_kind});
        rec["snapshot"] = snap;

        cl.add("converged", stats.converged, stats.final_grad_sup, sc.grad_tol);
        cl.add("energy_decreased", stats.final_energy <= stats.initial_energy + 1e-12,
               stats.final_energy - stats.initial_energy, 0.0);
    } else {
        rec["failure"] = failure;
        cl.add("converged", false, 0.0, 0.0);
    }
    return finalize(cfg, rec, cl, "minimize");
}

CommandResult cmd_sweep(const RunConfig& cfg) {
    json rec = base_record(cfg, "sweep");
    CheckList cl;
    SolverConfig sc = make_solver_config(cfg);
    const QField f0 = make_scenario_field(cfg);
    const DiagnosticsConfig dcfg = default_diagnostics(f0);

    SweepReport rep;
    std::string failure;
    try {
        rep = sweep_L(sc, cfg.L_list, f0, dcfg);
    } catch (const DivergenceError& e) {
        failure = e.what();
    }
    if (!failure.empty()) {
        rec["failure"] = failure;
        cl.add("sweep_completed", false, 0.0, 0.0);
        return finalize(cfg, rec, cl, "sweep");
    }

    std::string csv =
        "L,elastic_energy,bulk_over_L,total,max_dist_uniaxial,max_norm,el_residual,"
        "diag_gradient_penalty,caccioppoli_ratio,iterations\n";
    json rows = json::array();
    bool all_converged = true;
    for (const SweepRow& r : rep.rows) {
        all_converged = all_converged && r.converged;
        csv += format_double(r.L) + "," + format_double(r.energy.elastic) + "," +
               format_double(r.energy.bulk_over_L) + "," +
               format_double(r.energy.total) + "," +
               format_double(r.energy.max_dist_uniaxial) + "," +
               format_double(r.energy.max_norm) + "," + format_double(r.el_residual) +
               "," + format_double(r.diag.diag_gradient_penalty) + "," +
               format_double(r.diag.caccioppoli_ratio) + "," +
               std::to_string(r.iterations) + "\n";
        rows.push_back({{"L", r.L},
                        {"elastic", r.energy.elastic},
                        {"bulk_over_L", r.energy.bulk_over_L},
                        {"total", r.energy.total},
                        {"max_dist_uniaxial", r.energy.max_dist_uniaxial},
                        {"max_norm", r.energy.max_norm},
                        {"el_residual", r.el_residual},
                        {"diag_gradient_penalty", r.diag.diag_gradient_penalty},
                        {"caccioppoli_defined", r.diag.caccioppoli_defined},
                        {"iterations", r.iterations},
                        {"converged", r.converged}});
        if (!r.diag.caccioppoli_defined) cl.add_undefined("caccioppoli_L=" + format_double(r.L));
    }
    rec["rows"] = rows;

    std::filesystem::create_directories(cfg.out_dir);
    const std::string csv_path = cfg.out_dir + "/sweep.csv";
    std::ofstream f(csv_path, std::ios::binary);
    f << csv;
    rec["csv"] = csv_path;

    cl.add("all_L_converged", all_converged, all_converged ? 1.0 : 0.0, 1.0);
    if (rep.rows.size() > 1) {
        const double first = rep.rows.front().energy.bulk_over_L;
        const double last = rep.rows.back().energy.bulk_over_L;
        rec["bulk_over_L_ratio"] = last / first;
    }
    return finalize(cfg, rec, cl, "sweep");
}

}  // namespace qlc
