// Finite-difference discretization of the relaxed energy on a 3D box lattice
// with Dirichlet boundary data: energy assembly, exact discrete gradient,
// descent minimization, strong-form residuals, and the relaxation-parameter
// sweep with its diagnostics.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlc/bulk.hpp"
#include "qlc/densities.hpp"
#include "qlc/qtensor.hpp"

namespace qlc {

class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct GridDims {
    int nx = 0, ny = 0, nz = 0;
    int count() const { return nx * ny * nz; }
};

// Node-centered tensor field. Node (ix,iy,iz) sits at the centered position
// ((ix-(nx-1)/2) h, ...). Storage is row-major with x fastest; each node
// holds five orthonormal coordinates.
struct QField {
    GridDims dims;
    double h = 1.0;
    std::vector<double> data;           // 5 per node
    std::vector<std::uint8_t> boundary; // 1 = Dirichlet node

    int index(int ix, int iy, int iz) const {
        return (iz * dims.ny + iy) * dims.nx + ix;
    }
    Coords5 at(int idx) const {
        return {data[5 * idx], data[5 * idx + 1], data[5 * idx + 2], data[5 * idx + 3],
                data[5 * idx + 4]};
    }
    void set(int idx, const Coords5& v) {
        for (int m = 0; m < 5; ++m) data[5 * idx + m] = v[m];
    }
    Vec3 position(int ix, int iy, int iz) const {
        return {(ix - 0.5 * (dims.nx - 1)) * h, (iy - 0.5 * (dims.ny - 1)) * h,
                (iz - 0.5 * (dims.nz - 1)) * h};
    }
    bool on_face(int ix, int iy, int iz) const {
        return ix == 0 || iy == 0 || iz == 0 || ix == dims.nx - 1 || iy == dims.ny - 1 ||
               iz == dims.nz - 1;
    }
};

// Radial hedgehog data: Q = s_+ (x^ (x) x^ - I/3) with the center node set to
// zero (isotropic core) and the outer shell marked Dirichlet.
QField make_hedgehog_field(const GridDims& dims, double h, const MaterialConstants& mc);

// Uniform field with the outer shell marked Dirichlet.
QField make_constant_field(const GridDims& dims, double h, const QTensor& q);

struct SolverConfig {
    double L = 0.1;
    DensityParams density;
    MaterialConstants material;
    int max_iters = 50000;
    double grad_tol = 1e-7;      // sup over free nodes of the nodal gradient norm
    double armijo_c1 = 1e-4;
    double step_safety = 1.0;
    int max_backtracks = 60;
    bool use_conjugate_gradient = false;
    double divergence_floor = -1e30;
    bool allow_noncoercive = false;  // caller override for the original density
};

struct EnergyBreakdown {
    double elastic = 0.0;
    double bulk_over_L = 0.0;
    double total = 0.0;
    // Max over nodes whose uniaxial projection is unambiguous; nodes with a
    // degenerate top eigenvalue (the defect core) are skipped and counted.
    double max_dist_uniaxial = 0.0;
    int ambiguous_nodes = 0;
    double max_norm = 0.0;
};

EnergyBreakdown total_energy(const QField& field, const SolverConfig& cfg);

// Exact gradient of the discrete energy with respect to the free nodes; zero
// rows at Dirichlet nodes. `out` is resized to field.data.size().
void energy_gradient(const QField& field, const SolverConfig& cfg,
                     std::vector<double>& out);

struct MinimizeStats {
    int iterations = 0;
    bool converged = false;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    double final_grad_sup = 0.0;
    int backtracks = 0;
};

// Backtracking descent on the discrete energy. Monotone in the accepted
// iterates; throws DivergenceError on non-finite energy or when the energy
// falls through cfg.divergence_floor (the non-coercive blow-up signature).
// Throws std::domain_error when the density fails its coercivity audit and
// cfg.allow_noncoercive is not set.
MinimizeStats minimize(QField& field, const SolverConfig& cfg);

// Sup over interior nodes of the strong-form Euler-Lagrange residual
// (second-order stencils; bulk term scaled by 1/L).
double el_residual(const QField& field, const SolverConfig& cfg);

// Sup over included interior nodes of the harmonic-map-form residual
//   dQ_ij - (2/s) grad_k Q_il grad_k Q_jl + (2/s)(Q_ij/s + d_ij/3)|grad Q|^2
// for a uniaxial field; nodes within radius r_excl of the grid center are
// excluded.
double harmonic_residual(const QField& field, const MaterialConstants& mc,
                         double r_excl);

struct DiagnosticsConfig {
    Vec3 ball_center{0, 0, 0};   // absolute position of the diagnostic ball
    double ball_radius = 0.0;    // gradient-penalty ball
    double cacc_radius = 0.0;    // Caccioppoli outer radius (inner = half)
};

// Ball placement offset from the grid center, away from the hedgehog core.
DiagnosticsConfig default_diagnostics(const QField& field);

struct Diagnostics {
    double max_norm = 0.0;
    double diag_gradient_penalty = 0.0;  // (1/L) integral of |(R^T grad Q R)_D|^2
    int degenerate_skipped = 0;
    double caccioppoli_ratio = 0.0;
    bool caccioppoli_defined = false;
};

Diagnostics compute_diagnostics(const QField& field, const SolverConfig& cfg,
                                const DiagnosticsConfig& dcfg);

struct SweepRow {
    double L = 0.0;
    EnergyBreakdown energy;
    double el_residual = 0.0;
    Diagnostics diag;
    int iterations = 0;
    bool converged = false;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // ordered by decreasing L
};

// Minimize at each L with warm starts from the previous solution. L values
// must be strictly decreasing and positive.
SweepReport sweep_L(const SolverConfig& cfg_base, const std::vector<double>& L_list,
                    const QField& field0, const DiagnosticsConfig& dcfg);

// Cutoff-modified density value exposed directly (the solver applies it via
// density kind modified_cutoff).
double modified_density_eval(const QTensor& q, const TensorGradient& p,
                             const DensityParams& params);

// ---------------------------------------------------------------------------
// Field snapshots: "QLCF" magic, version, dims, spacing, s_plus, density
// kind, then row-major (x fastest) five-coordinate node data as little-endian
// doubles. The Dirichlet mask is the outer shell, reconstructed on load.
// ---------------------------------------------------------------------------

struct SnapshotMeta {
    double s_plus = 0.0;
    DensityKind kind = DensityKind::NewPlus;
};

void save_snapshot(const std::string& path, const QField& field, const SnapshotMeta& meta);
QField load_snapshot(const std::string& path, SnapshotMeta& meta);

}  // namespace qlc
