// Elastic energy densities for the Q-tensor model, Frank constant
// conversions, coercivity condition auditing, and the algebraic identities on
// the uniaxial manifold as executable residual checks.
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "qlc/linalg.hpp"
#include "qlc/qtensor.hpp"

namespace qlc {

struct ElasticConstants {
    double L1 = 1.0;
    double L2 = 0.0;
    double L3 = 0.0;
    double L4 = 0.0;
};

struct FrankConstants {
    double k1 = 1.0;  // splay
    double k2 = 1.0;  // twist
    double k3 = 1.0;  // bend
    double k4 = 0.0;  // surface
};

// Coefficients of the strong-Ericksen rewrite, all positive exactly when the
// strengthened Ericksen inequalities hold.
struct HatConstants {
    double h1, h2, h3, h4;
    double min() const;
};

// Spatial gradient of a tensor field: slice k holds dQ_ij/dx_k. Slices of a
// valid gradient are symmetric traceless.
struct TensorGradient {
    std::array<Mat3, 3> slice;

    static TensorGradient zero();
    // Project each slice onto the symmetric traceless set.
    static TensorGradient from_raw(const std::array<Mat3, 3>& raw);

    double norm_sq() const;
};

// Director gradient g[k][i] = du_i/dx_k together with the director.
struct DirectorGradient {
    Vec3 u;
    Mat3 g;

    // max_k |u . g[k]|, zero for a differentiated unit-length field.
    double tangency_defect() const;
};

// Gradient slice induced on the uniaxial manifold:
// p[k]_ij = s (g[k][i] u_j + u_i g[k][j]).
TensorGradient uniaxial_gradient(const Vec3& u, const Mat3& g, double s_plus);

// ---------------------------------------------------------------------------
// Density evaluations
// ---------------------------------------------------------------------------

// (L1/2)|p|^2 + (L2/2) divergence term + (L3/2) cross term + (L4/2) cubic term.
double elastic_original(const QTensor& q, const TensorGradient& p,
                        const ElasticConstants& L);

// Coercive replacement for L4 >= 0: cubic term traded for the nonnegative
// square (3 L4 / 2 s) Q_ln Q_kn p^l_ij p^k_ij plus the |p|^2 shift. Agrees
// with elastic_original on the uniaxial manifold.
double elastic_new_plus(const QTensor& q, const TensorGradient& p,
                        const ElasticConstants& L, double s_plus);

// Coercive replacement for L4 < 0 built on the Cauchy-Schwarz gap
// |Q|^2 |p|^2 - Q_ln Q_kn p^l_ij p^k_ij >= 0. Agrees with elastic_original on
// the uniaxial manifold.
double elastic_new_minus(const QTensor& q, const TensorGradient& p,
                         const ElasticConstants& L, double s_plus);

// The nonnegative Cauchy-Schwarz combination reported by elastic_new_minus.
double cauchy_schwarz_gap(const QTensor& q, const TensorGradient& p);

// Bare contractions used by the identity checks:
//   cubic:   Q_lk p^l_ij p^k_ij
//   quartic: Q_ln Q_kn p^l_ij p^k_ij
double cubic_contraction(const QTensor& q, const TensorGradient& p);
double quartic_contraction(const QTensor& q, const TensorGradient& p);

// Strong-Ericksen density: (alpha/2)|p|^2 plus square corrections with the
// hat-constant prefactors; equals the Oseen-Frank density for uniaxial data.
// Throws std::domain_error when min hat constant <= 0.
double elastic_ericksen(const QTensor& q, const TensorGradient& p,
                        const HatConstants& hat, double s_plus);

// Oseen-Frank density. g[k][i] = du_i/dx_k; throws for non-unit u.
double oseen_frank_W(const Vec3& u, const Mat3& g, const FrankConstants& k);

// Coercive rewrite of the Oseen-Frank density: equals W for unit tangent
// (u, g) and is bounded below by (alpha_tilde/2)|g|^2 for arbitrary inputs.
// Throws std::domain_error when the strengthened Ericksen condition fails.
double oseen_frank_W_tilde(const Vec3& u, const Mat3& g, const FrankConstants& k);

// alpha_tilde = min{k2 - |k4|, 2k1 - k2 - k4, 2k3 - k2 - k4}.
double w_tilde_alpha(const FrankConstants& k);

// ---------------------------------------------------------------------------
// Constant conversions
// ---------------------------------------------------------------------------

// s^2 L1 = -k1/6 + k2/2 + k3/6, s^2 L2 = k1 - k2 - k4, s^2 L3 = k4,
// s^3 L4 = (k3 - k1)/2.
ElasticConstants frank_to_elastic(const FrankConstants& k, double s_plus);
FrankConstants elastic_to_frank(const ElasticConstants& L, double s_plus);

// h1 = (2k1-k2-k4)/(2s^2), h2 = (2k3-k2-k4)/(2s^2), h3 = (k2-k4)/(2s^2),
// h4 = (k2+k4)/(2s^2).
HatConstants frank_to_hat(const FrankConstants& k, double s_plus);

// ---------------------------------------------------------------------------
// Coercivity auditing
// ---------------------------------------------------------------------------

struct ConditionLReport {
    bool holds;
    double margin;             // minimum slack across the inequalities
    std::string worst;         // name of the tightest inequality
};

// The four inequalities guaranteeing coercivity of elastic_new_plus:
//   L1 - s L4/6 > 0,   -L1 - s L4/6 < L3 < 2 L1 - s L4/3,
//   L1 - s L4/6 + (5/3) L2 + (1/6) L3 > 0,   L4 >= 0.
ConditionLReport check_condition_L(const ElasticConstants& L, double s_plus);

struct CoercivityReport {
    bool conditions_hold;
    double alpha;              // infimum of smallest p-Hessian eigenvalues
    double upper_C;            // empirical constant in f <= C (1+|Q|^2)|p|^2
    QTensor worst_q;           // sample attaining the smallest eigenvalue
    TensorGradient worst_p;    // unit gradient attaining the worst ratio
    double worst_ratio;        // smallest sampled f / |p|^2
    int negative_eigen_count;  // should be zero under the condition
};

// Samples |Q| <= 2 s_plus, assembles the 15x15 p-Hessian of elastic_new_plus
// per sample (5 tensor x 3 spatial coordinates) and reports the infimum of
// its smallest eigenvalues. Throws std::logic_error if a negative eigenvalue
// shows up even though check_condition_L passes.
CoercivityReport estimate_alpha(const ElasticConstants& L, double s_plus,
                                int samples, Rng& rng);

// 15x15 p-Hessian of elastic_new_plus at fixed Q, row-major, in the
// orthonormal (slice x basis) coordinates.
std::array<double, 225> p_hessian_new_plus(const QTensor& q, const ElasticConstants& L,
                                           double s_plus);

struct NonCoercivityWitness {
    QTensor q;
    TensorGradient p;
    double value;         // elastic_original at the witness, below the target
    double scale;         // the scaling parameter reached
};

// Deterministic witness that the original density with L4 != 0 is unbounded
// below: scale Q = t Q+ against a fixed unit gradient so the cubic term
// dominates linearly in t. Throws std::domain_error when L4 == 0 and a
// runtime error if the bounded scan fails (the cubic contraction is nonzero
// by construction, so it should not).
NonCoercivityWitness non_coercivity_witness(const ElasticConstants& L, double s_plus,
                                            double target = -1e3);

// ---------------------------------------------------------------------------
// Identity residuals on the uniaxial manifold
// ---------------------------------------------------------------------------

// | Q_lk p^l_ij p^k_ij - (3/s) Q_ln Q_kn p^l_ij p^k_ij + (2s/3)|p|^2 | for the
// induced uniaxial (Q, p).
double verify_third_order_identity(const Vec3& u, const Mat3& g, double s_plus);

struct FourthOrderResiduals {
    double combination;   // quartic term vs (8/5)L5 - (2/5)L6 + (2/5)L7
    double bend;          // 4 L5 - L6 vs (5 s^4/3)|u x curl u|^2
    double gradient;      // L7 vs (5/9) s^4 |grad u|^2
};
FourthOrderResiduals verify_fourth_order_identities(const Vec3& u, const Mat3& g,
                                                    double s_plus);

struct EquivalenceResiduals {
    double vs_oseen_frank;   // |f_E - W|
    double vs_coercive;      // |f_E - f_{new}| for the matching L4 branch
};
EquivalenceResiduals verify_uniaxial_equivalence(const Vec3& u, const Mat3& g,
                                                 const ElasticConstants& L,
                                                 double s_plus);

// ---------------------------------------------------------------------------
// Raw-density evaluation with analytic derivatives (solver support)
// ---------------------------------------------------------------------------

enum class DensityKind : std::uint8_t {
    Original,
    NewPlus,
    NewMinus,
    Ericksen,
    ModifiedCutoff,
};

const char* density_kind_name(DensityKind k);
DensityKind density_kind_from_name(const std::string& name);

struct DensityParams {
    DensityKind kind = DensityKind::NewPlus;
    ElasticConstants L;
    HatConstants hat{0, 0, 0, 0};  // used by the Ericksen kind
    double s_plus = 1.5;
    double alpha = 1.0;            // coercive leading constant (cutoff kind)
    double cutoff_M = 0.0;         // cutoff radius (cutoff kind)
};

// Value and raw partial derivatives (entries treated as independent; callers
// contract against the orthonormal basis to land back on the constraint set).
struct DensityEval {
    double value = 0.0;
    Mat3 dQ = mat3_zero();
    std::array<Mat3, 3> dp = {mat3_zero(), mat3_zero(), mat3_zero()};
};

DensityEval density_eval(const DensityParams& params, const Mat3& q,
                         const std::array<Mat3, 3>& p, bool want_derivatives);

}  // namespace qlc
