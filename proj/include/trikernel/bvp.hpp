#ifndef TRIKERNEL_BVP_HPP
#define TRIKERNEL_BVP_HPP

#include <functional>
#include <memory>

#include "trikernel/conformal.hpp"
#include "trikernel/enumerate.hpp"
#include "trikernel/geometry.hpp"

namespace trikernel {

// Numeric evaluator for the diagonal section D(y): walks of the symmetric
// model ending on the diagonal, expressed after the change of coordinates.
// Built from a model, a fixed t and a traced kernel curve; D can then be
// computed either through the index -1 Riemann solution (theorem1_D) or the
// decoupled zero-index form (theorem2_D).
struct EvaluatorOptions {
    int n_contour = 2048;
    bool deform_to_circle = false; // integrate over the unit circle (valid at y
                                   // inside it when the integrand is analytic
                                   // in between; recorded in outputs)
};

struct DiagonalEvaluator {
    StepSet hat_steps, s_steps;
    KernelData kd; // transformed step set
    double t = 0;
    EvaluatorOptions opts;
    Contour curve;
    BranchPointsNum bp;
    std::shared_ptr<GluingMap> w; // pole at y2
    Cplx wA, wB, w_y1, residue;
    int index = 0;      // verified boundary index of the Riemann problem
    double sign2 = 1.0; // global sign of the decoupled route, anchored at D(0) > 0

    // integration nodes (traced curve or unit circle) with cached w, w'
    std::vector<Cplx> int_pts, int_dz, int_w, int_wp;
    std::vector<Cplx> sqrt_w_minus_wy1; // phase-tracked along the nodes
    // upper-half caches for the index -1 route
    std::vector<Cplx> up_w, up_wp, up_dz, up_logG, up_psi_plus, up_g;
    double u_a = 0, u_b = 0; // w(Y(x2)), w(Y(x1))
};

DiagonalEvaluator build_evaluator(const StepSet& hat_model, double t,
                                  EvaluatorOptions opts = {});

Cplx theorem1_D(const DiagonalEvaluator& ev, Cplx y);
Cplx theorem2_D(const DiagonalEvaluator& ev, Cplx y);

struct CauchyIntegralResult {
    Cplx value;
    double error_estimate = 0;
    const char* contour = "";
};
CauchyIntegralResult theorem2_D_detailed(const DiagonalEvaluator& ev, Cplx y);

// ---- Sokhotski-Plemelj ---------------------------------------------------------

// Closed sampled contour z(theta_k), k = 0..n-1, theta uniform. F(z) =
// (1/2pi i) int f(u)/(u - z) du; the boundary limits satisfy
// F_pm = pm f/2 + principal value.
struct SampledContour {
    std::vector<Cplx> pts, dz;
    double dtheta = 0;
};

SampledContour contour_nodes(const Contour& c);
SampledContour unit_circle_nodes(int n);

Cplx sp_offcontour(const SampledContour& c, const std::vector<Cplx>& f, Cplx z);
struct PlemeljLimits {
    Cplx plus, minus;
};
// Limits at the midpoint between nodes k and k+1 (midpoint evaluation keeps
// the principal value regular at every node).
PlemeljLimits sp_limits_at_mid(const SampledContour& c, const std::vector<Cplx>& f, size_t k,
                               const std::function<Cplx(Cplx)>& f_eval);

// ---- enumeration-backed oracle --------------------------------------------------

struct DiagonalOracle {
    double t = 0;
    int order = 0;
    std::vector<std::map<int, Int>> diag; // n -> (i -> c_{i,i}(n))
    Cplx eval(Cplx y) const;
    // Empirical geometric tail bound at |y|; infinite when not contracting.
    double tail_estimate(double abs_y) const;
};

DiagonalOracle make_diagonal_oracle(const StepSet& hat_model, double t, int order);

// Max over curve samples of |sqrt(dt)(y) D(y) - sqrt(dt)(conj y) D(conj y) - (y - conj y)|.
double boundary_residual(const KernelData& kd, const Contour& curve, double t,
                         const std::function<Cplx(Cplx)>& D_oracle, int n_samples,
                         double oracle_tail = 0.0, double tail_tolerance = 1e-9);

// ---- exact series pipeline (reverse Kreweras) -----------------------------------

// All printed intermediates of the diagonal-excursion computation: branch
// points, the algebraic series W, the gluing values, the -1/t prefactor, the
// W-expanded integrand with its unit-circle residues, and the excursion
// series itself.
struct D0SeriesBundle {
    PuiseuxSeries W;
    PuiseuxSeries x1, x2;
    PuiseuxSeries sqrt_dtp_y2;    // sqrt(dt'(y2)), ramification 4
    PuiseuxSeries w_at_y2;        // w(y2) for the pole-at-0 map
    PuiseuxSeries sqrt_neg_wp_y2; // sqrt(-w'(y2))
    PuiseuxSeries wy2_at_y1, wy2_at_Yx1, wy2_at_Yx2;
    PuiseuxSeries prefactor;  // identically -1/t
    PuiseuxSeries integral_t; // unit-circle residue series, back in t
    PuiseuxSeries d0;
    std::map<int, ZRat> integrand_w; // W-order -> Laurent polynomial in z
    std::optional<PuiseuxSeries> y3; // large branch point, equals 1/W^2
};

D0SeriesBundle d0_series_bundle(int order);
PuiseuxSeries theorem2_D0_series(int order);

// ---- section reconstruction ------------------------------------------------------

struct SectionValues {
    Cplx L, L_minus0, C;
};
// Numeric values of the lower section, its axis section and the full
// three-quadrant series at a point, all driven by the diagonal evaluator.
SectionValues reconstruct_sections(const DiagonalEvaluator& ev, Cplx x, Cplx y);

} // namespace trikernel

#endif
