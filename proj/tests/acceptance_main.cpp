// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Thresholds are pinned here; measured values are printed
// next to every verdict. The CLI binary path is passed as argv[1] for the
// determinism criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qlc/bulk.hpp"
#include "qlc/densities.hpp"
#include "qlc/solver.hpp"

using namespace qlc;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void verdict(int criterion, const char* title, bool pass, const std::string& detail) {
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                title, detail.c_str());
    std::fflush(stdout);
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
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

QTensor sample_near_manifold(Rng& rng, const MaterialConstants& mc, double delta) {
    const QTensor base = from_director(rng.unit_vector(), mc.s_plus);
    QTensor noise = random_tensor(rng, 1.0);
    if (noise.norm() < 1e-12) return base;
    return base + (delta * std::pow(rng.uniform(), 0.2) / noise.norm()) * noise;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    // ------------------------------------------------------------------ 1
    {
        const auto t0 = clock_type::now();
        Rng rng(20240401);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const MaterialConstants mc = MaterialConstants::make(
                rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
            const double s = mc.s_plus;
            const Vec3 u = rng.unit_vector();
            const Mat3 g = random_tangent(rng, u);
            const QTensor q = from_director(u, s);
            const TensorGradient p = uniaxial_gradient(u, g, s);

            double gg = 0.0;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) gg += g[r][c] * g[r][c];
            const Vec3 curl = {g[1][2] - g[2][1], g[2][0] - g[0][2], g[0][1] - g[1][0]};
            const Vec3 uxc = cross(u, curl);
            const double s4 = s * s * s * s;

            // third-order exchange identity
            const double scale3 = 1.0 + p.norm_sq() * (1.0 + q.norm());
            worst = std::max(worst, verify_third_order_identity(u, g, s) / scale3);

            // fourth-order term vs its two-factor contractions and the
            // director-frame right-hand sides
            const FourthOrderResiduals r4 = verify_fourth_order_identities(u, g, s);
            const double scale4 = 1.0 + s4 * (1.0 + gg * gg);
            worst = std::max(worst, r4.combination / scale4);
            worst = std::max(worst, r4.bend / scale4);
            worst = std::max(worst, r4.gradient / scale4);

            // quartic contraction against its director closed form
            const double q4 = quartic_contraction(q, p);
            const double q4_expected =
                2.0 / 3.0 * s4 * dot(uxc, uxc) + 2.0 / 9.0 * s4 * gg;
            worst = std::max(worst, std::fabs(q4 - q4_expected) / scale4);

            // density equivalences through the constant conversions
            ElasticConstants L{rng.uniform(0.5, 2.0), rng.uniform(-0.3, 0.5),
                               rng.uniform(-0.3, 0.3), rng.uniform(-0.8, 0.8)};
            const EquivalenceResiduals re = verify_uniaxial_equivalence(u, g, L, s);
            const double scaleW =
                1.0 + std::fabs(oseen_frank_W(u, g, elastic_to_frank(L, s)));
            worst = std::max(worst, re.vs_oseen_frank / scaleW);
            worst = std::max(worst, re.vs_coercive / scaleW);
        }
        const double secs = seconds_since(t0);
        verdict(1, "identity suite residuals <= 1e-9 over 1e4 tangent pairs",
                worst <= 1e-9 && secs < 10.0,
                fmt("worst rel residual %.2e, %.1f s", worst, secs));
    }

    // ------------------------------------------------------------------ 2
    {
        const MaterialConstants mc = MaterialConstants::make(1, 1, 1);
        const FrankConstants paa{5.0, 3.8, 10.1, 0.0};
        const ElasticConstants L = frank_to_elastic(paa, mc.s_plus);

        const auto t0 = clock_type::now();
        const NonCoercivityWitness w = non_coercivity_witness(L, mc.s_plus, -1e3);
        const double witness_secs = seconds_since(t0);

        Rng rng(99);
        const ConditionLReport cond = check_condition_L(L, mc.s_plus);
        const CoercivityReport rep = estimate_alpha(L, mc.s_plus, 10000, rng);
        verdict(2, "coercivity dichotomy at the PAA constants",
                w.value < -1e3 && witness_secs < 1.0 && cond.holds && rep.alpha > 0.0 &&
                    rep.negative_eigen_count == 0,
                fmt("witness %.3g in %.2f s; alpha %.4f, 0 negative eigenvalues",
                    w.value, witness_secs, rep.alpha));
    }

    // ------------------------------------------------------------------ 3
    {
        const MaterialConstants mc = MaterialConstants::make(1, 1, 1);
        Rng rng(314159);
        double worst_g = 0, worst_h = 0, worst_crit = 0;
        for (int i = 0; i < 1000; ++i) {
            const QTensor q = random_tensor(rng, 2.0);
            const Coords5 v = pack5(q);
            const Coords5 an = pack5(bulk_gradient(q, mc));
            const auto hess = bulk_hessian(q, mc);
            for (int m = 0; m < 5; ++m) {
                Coords5 vp = v, vm = v;
                vp[m] += 1e-6;
                vm[m] -= 1e-6;
                const double fd =
                    (bulk_value(unpack5(vp), mc) - bulk_value(unpack5(vm), mc)) / 2e-6;
                worst_g = std::max(
                    worst_g, std::fabs(an[m] - fd) / (1.0 + std::pow(q.norm(), 3)));
                const Coords5 gp = pack5(bulk_gradient(unpack5(vp), mc));
                const Coords5 gm = pack5(bulk_gradient(unpack5(vm), mc));
                for (int r = 0; r < 5; ++r)
                    worst_h = std::max(worst_h,
                                       std::fabs(hess[r * 5 + m] - (gp[r] - gm[r]) / 2e-6) /
                                           (1.0 + q.norm() * q.norm()));
            }
            worst_crit = std::max(
                worst_crit, bulk_gradient(from_director(rng.unit_vector(), mc.s_plus), mc)
                                .norm());
        }

        const double delta = 0.1 * mc.s_plus;
        int violations = 0;
        int tested = 0;
        while (tested < 10000) {
            const QTensor q = sample_near_manifold(rng, mc, delta);
            Vec3 xi = {rng.normal(), rng.normal(), 0.0};
            xi[2] = -(xi[0] + xi[1]);
            try {
                const auto r = hessian_bound_check(q, xi, mc, delta);
                if (r.lhs < r.rhs - 1e-10 * (1.0 + std::fabs(r.lhs))) ++violations;
                ++tested;
            } catch (const std::domain_error&) {
            }
        }
        const double crit_tol = 1e-10 * std::pow(mc.s_plus, 3);
        verdict(3, "bulk calculus: FD match, criticality, eigenframe bound",
                worst_g < 1e-6 && worst_h < 1e-6 && worst_crit <= crit_tol &&
                    violations == 0,
                fmt("FD grad %.2e, FD hess %.2e, bound violations %g", worst_g, worst_h,
                    static_cast<double>(violations)));
    }

    // ------------------------------------------------------------------ 4
    {
        // Constants strictly inside the bound's validity region at this
        // neighbourhood radius: 3a < s_plus * b, so the Hessian modulus is
        // attained on the branch with quadratic slack. At the tie 3a >= s b
        // the stated constant is sharp-to-failing; the unit suite pins that
        // regime separately.
        const MaterialConstants mc = MaterialConstants::make(0.5, 2, 1);
        const double delta = 0.1 * mc.s_plus;
        const double lam = bulk_lambda(mc);
        Rng rng(2718);

        int violations = 0, tested = 0;
        double worst_ratio = 1e300;
        while (tested < 10000) {
            const QTensor q = sample_near_manifold(rng, mc, delta);
            DistanceBounds r;
            try {
                r = distance_bounds_check(q, mc, delta);
            } catch (const std::domain_error&) {
                continue;
            }
            ++tested;
            if (r.dist_sq < 1e-20) continue;
            if (r.f_shifted < 0.5 * lam * r.dist_sq - 1e-12) ++violations;
            worst_ratio = std::min(worst_ratio, r.f_shifted / (0.5 * lam * r.dist_sq));
        }

        // brute-force projection validation on a 1e4-point sphere mesh
        std::vector<Vec3> mesh;
        mesh.reserve(10000);
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < 10000; ++i) {
            const double z = 1.0 - 2.0 * (i + 0.5) / 10000.0;
            const double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
            mesh.push_back({radius * std::cos(golden * i), radius * std::sin(golden * i), z});
        }
        const double mesh_tol = 4.0 * mc.s_plus * std::sqrt(4.0 * M_PI / 10000.0);
        bool pi_ok = true;
        int pi_tested = 0;
        while (pi_tested < 100) {
            const QTensor q = sample_near_manifold(rng, mc, delta);
            double exact;
            try {
                exact = dist_to_uniaxial(q, mc);
            } catch (const AmbiguityError&) {
                continue;
            }
            ++pi_tested;
            double brute = 1e300;
            for (const Vec3& u : mesh)
                brute = std::min(brute, (q - from_director(u, mc.s_plus)).norm());
            if (std::fabs(exact - brute) > mesh_tol || brute + 1e-12 < exact)
                pi_ok = false;
        }

        verdict(4, "projection bounds: (lambda/2) distance bound and brute-force pi",
                violations == 0 && pi_ok,
                fmt("violations %g/10000 (worst ratio %.4f), sphere-search ok=%g",
                    static_cast<double>(violations), worst_ratio,
                    static_cast<double>(pi_ok)));
    }

    // ------------------------------------------------------------------ 5
    {
        const MaterialConstants mc = MaterialConstants::make(1, 1, 1);
        Rng rng(5555);
        double worst_fd = 0.0;
        bool fd_ok = true;

        struct Case {
            DensityParams params;
        };
        std::vector<Case> cases;
        {
            DensityParams p;
            p.kind = DensityKind::Original;
            p.L = ElasticConstants{1.2, 0.3, -0.2, 0.4};
            p.s_plus = mc.s_plus;
            cases.push_back({p});
            p.kind = DensityKind::NewPlus;
            cases.push_back({p});
            p.kind = DensityKind::NewMinus;
            p.L.L4 = -0.4;
            cases.push_back({p});
            DensityParams e;
            e.kind = DensityKind::Ericksen;
            e.hat = frank_to_hat(FrankConstants{5, 3.8, 10.1, 0}, mc.s_plus);
            e.s_plus = mc.s_plus;
            cases.push_back({e});
            DensityParams m;
            m.kind = DensityKind::ModifiedCutoff;
            m.L = ElasticConstants{1.2, 0.3, -0.2, 0.4};
            m.s_plus = mc.s_plus;
            m.alpha = 0.8;
            m.cutoff_M = 1.1;
            cases.push_back({m});
        }
        for (const Case& c : cases) {
            SolverConfig cfg;
            cfg.material = mc;
            cfg.L = 0.07;
            cfg.density = c.params;
            QField f = make_hedgehog_field({5, 5, 5}, 0.15, mc);
            for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] += 0.25 * rng.normal();
            std::vector<double> grad;
            energy_gradient(f, cfg, grad);
            for (int trial = 0; trial < 40; ++trial) {
                const int ix = 1 + static_cast<int>(rng.uniform(0, 3));
                const int iy = 1 + static_cast<int>(rng.uniform(0, 3));
                const int iz = 1 + static_cast<int>(rng.uniform(0, 3));
                const int m = static_cast<int>(rng.uniform(0, 5));
                const int idx = f.index(ix, iy, iz);
                const double saved = f.data[5 * idx + m];
                f.data[5 * idx + m] = saved + 1e-6;
                const double ep = total_energy(f, cfg).total;
                f.data[5 * idx + m] = saved - 1e-6;
                const double em = total_energy(f, cfg).total;
                f.data[5 * idx + m] = saved;
                const double fd = (ep - em) / 2e-6;
                const double err =
                    std::fabs(grad[5 * idx + m] - fd) / (1.0 + std::fabs(fd));
                worst_fd = std::max(worst_fd, err);
                if (err > 1e-6) fd_ok = false;
            }
        }

        // quadrature order on a closed-form rotation field
        SolverConfig cfg;
        cfg.material = mc;
        cfg.L = 0.1;
        cfg.density.kind = DensityKind::NewPlus;
        cfg.density.L = ElasticConstants{1, 0, 0, 0};
        cfg.density.s_plus = mc.s_plus;
        const double omega = 0.9, width = 1.2;
        double errs[2];
        int k = 0;
        for (int n : {25, 49}) {
            const double h = width / (n - 1);
            QField f = make_hedgehog_field({n, n, n}, h, mc);
            for (int iz = 0; iz < n; ++iz)
                for (int iy = 0; iy < n; ++iy)
                    for (int ix = 0; ix < n; ++ix) {
                        const Vec3 x = f.position(ix, iy, iz);
                        const Vec3 u = {std::cos(omega * x[0]), std::sin(omega * x[0]),
                                        0.0};
                        f.set(f.index(ix, iy, iz), pack5(from_director(u, mc.s_plus)));
                    }
            const double exact =
                mc.s_plus * mc.s_plus * omega * omega * width * width * width;
            errs[k++] = std::fabs(total_energy(f, cfg).elastic - exact);
        }
        const double ratio = errs[0] / errs[1];
        verdict(5, "discrete gradient FD match for all density kinds, quadrature order",
                fd_ok && ratio >= 3.5 && ratio <= 4.5,
                fmt("worst FD err %.2e, halving ratio %.2f", worst_fd, ratio));
    }

    // ------------------------------------------------------------------ 6
    {
        const auto t0 = clock_type::now();
        const MaterialConstants mc = MaterialConstants::make(1, 1, 1);
        const double hc = 0.12;
        const QField coarse = make_hedgehog_field({9, 9, 9}, hc, mc);
        const QField fine = make_hedgehog_field({17, 17, 17}, hc / 2.0, mc);
        // two-step core exclusion placed so both grids include the same
        // innermost lattice radius (between 2h and sqrt(5) h)
        const double r_excl = 2.2 * hc;
        const double rc = harmonic_residual(coarse, mc, r_excl);
        const double rf = harmonic_residual(fine, mc, r_excl);
        const double ratio = rc / rf;
        const double secs = seconds_since(t0);
        verdict(6, "harmonic-map anchor: residual drops by 3x-5x when h halves",
                ratio >= 3.0 && ratio <= 5.0 && secs < 30.0,
                fmt("ratio %.3f in %.1f s", ratio, secs));
    }

    // ------------------------------------------------------------------ 7, 8
    {
        const auto t0 = clock_type::now();
        const MaterialConstants mc = MaterialConstants::make(1, 1, 1);
        const double h = 0.45;
        SolverConfig cfg;
        cfg.material = mc;
        cfg.density.kind = DensityKind::NewPlus;
        cfg.density.L = ElasticConstants{1, 0, 0, 0};
        cfg.density.s_plus = mc.s_plus;
        cfg.max_iters = 400000;
        cfg.grad_tol = 2e-4 * h * h * h;

        const QField f0 = make_hedgehog_field({9, 9, 9}, h, mc);
        const SweepReport rep =
            sweep_L(cfg, {0.1, 0.05, 0.025, 0.0125}, f0, default_diagnostics(f0));
        const double secs = seconds_since(t0);

        bool all_conv = true, res_ok = true;
        const double res_bound = 10.0 * cfg.grad_tol / (h * h * h);
        for (const SweepRow& r : rep.rows) {
            all_conv = all_conv && r.converged;
            if (r.el_residual > res_bound) res_ok = false;
        }
        const double bulk_ratio =
            rep.rows.back().energy.bulk_over_L / rep.rows.front().energy.bulk_over_L;
        const double dist_ratio = rep.rows.back().energy.max_dist_uniaxial /
                                  rep.rows.front().energy.max_dist_uniaxial;
        verdict(7, "relaxation sweep: convergence and decay trends",
                all_conv && res_ok && bulk_ratio <= 0.5 && dist_ratio <= 0.7 &&
                    secs < 300.0,
                fmt("bulk ratio %.3f, dist ratio %.3f, %.0f s", bulk_ratio, dist_ratio,
                    secs));

        const double pen_growth = rep.rows.back().diag.diag_gradient_penalty /
                                  rep.rows.front().diag.diag_gradient_penalty;
        verdict(8, "gradient-penalty diagnostic stays bounded across the sweep",
                pen_growth < 2.0, fmt("growth factor %.3f", pen_growth));
    }

    // ------------------------------------------------------------------ 9
    {
        const MaterialConstants mc = MaterialConstants::make(1, 1, 1);
        SolverConfig cfg;
        cfg.material = mc;
        cfg.L = 0.05;
        cfg.density.kind = DensityKind::ModifiedCutoff;
        cfg.density.L = ElasticConstants{1, 0, 0, 0.5};
        cfg.density.s_plus = mc.s_plus;
        cfg.density.cutoff_M = 2.0 * mc.s_plus;
        cfg.density.alpha = 0.7;
        cfg.max_iters = 300000;
        const double cap = cfg.density.cutoff_M + 1.0 + 1e-8;

        Rng rng(660);
        bool ok = true;
        double worst = 0.0;
        for (int scenario = 0; scenario < 2; ++scenario) {
            cfg.grad_tol = 2e-4 * ((scenario == 0) ? 0.6 : 0.2) * 0.6 * 0.6;
            QField f = (scenario == 0)
                           ? make_hedgehog_field({7, 7, 7}, 0.6, mc)
                           : make_hedgehog_field({5, 5, 5}, 0.2, mc);
            if (scenario == 1) {
                // adversarial large-norm interior start
                for (int i = 0; i < f.dims.count(); ++i)
                    if (!f.boundary[i])
                        for (int m = 0; m < 5; ++m)
                            f.data[5 * i + m] = 4.0 * rng.normal();
            }
            const MinimizeStats st = minimize(f, cfg);
            double max_norm = 0.0;
            for (int i = 0; i < f.dims.count(); ++i) {
                double s = 0;
                for (int m = 0; m < 5; ++m) s += f.data[5 * i + m] * f.data[5 * i + m];
                max_norm = std::max(max_norm, std::sqrt(s));
            }
            worst = std::max(worst, max_norm);
            if (!st.converged || max_norm > cap) ok = false;
        }
        verdict(9, "maximum principle under the cutoff density", ok,
                fmt("worst converged max norm %.4f vs cap %.4f", worst, cap));
    }

    // ------------------------------------------------------------------ 10
    {
        bool pass = false;
        std::string detail = "CLI binary path not provided";
        if (!cli.empty()) {
            const fs::path dir = fs::temp_directory_path() / "qlc_acceptance";
            fs::remove_all(dir);
            fs::create_directories(dir);
            const fs::path cfg_path = dir / "sweep.ini";
            std::ofstream cfgf(cfg_path);
            cfgf << "[material]\na = 1.0\nb = 1.0\nc = 1.0\n\n"
                 << "[elastic]\nL1 = 1.0\n\n"
                 << "[run]\nseed = 42\nsamples = 100\n\n"
                 << "[grid]\nnx = 7\nny = 7\nnz = 7\nh = 0.6\n\n"
                 << "[boundary]\nscenario = hedgehog\n\n"
                 << "[solver]\nL_list = 0.08, 0.04, 0.02\nmax_iters = 200000\n\n"
                 << "[output]\nout_dir = " << (dir / "out1").string() << "\n";
            cfgf.close();
            const std::string base = cli + " sweep --config " + cfg_path.string();
            const int rc1 =
                std::system((base + " > /dev/null 2>&1").c_str());
            const int rc2 = std::system(
                (base + " --out " + (dir / "out2").string() + " > /dev/null 2>&1").c_str());
            const std::string csv1 = read_file(dir / "out1" / "sweep.csv");
            const std::string csv2 = read_file(dir / "out2" / "sweep.csv");
            pass = rc1 == 0 && rc2 == 0 && !csv1.empty() && csv1 == csv2;
            detail = fmt("runs rc=%g/%g, identical=%g", WEXITSTATUS(rc1),
                         WEXITSTATUS(rc2), static_cast<double>(csv1 == csv2));
        }
        verdict(10, "sweep rerun reproduces byte-identical CSV output", pass, detail);
    }

    std::printf("acceptance: %d criterion failure(s)\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
