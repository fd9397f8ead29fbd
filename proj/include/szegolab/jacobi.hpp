#ifndef SZEGOLAB_JACOBI_HPP
#define SZEGOLAB_JACOBI_HPP

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "szegolab/gapset.hpp"

namespace szegolab {

// Thrown when an adaptive numerical procedure cannot reach its tolerance.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bounded Jacobi recurrence coefficients, one- or two-sided. Entries come
// from a deterministic rule n -> (a_n, b_n) and are memoized. One-sided
// sequences are indexed from n = 1.
//
// The cache grows on demand and is not synchronized: call ensure() before
// reading the same object from several threads.
class JacobiCoeffs {
public:
    enum class Side { OneSided, TwoSided };
    using Rule = std::function<std::pair<double, double>(long)>;

    JacobiCoeffs() = default;

    static JacobiCoeffs from_rule(Side side, Rule rule);
    // table[i] = (a,b) at n = 1+i (one-sided) or n = lo+i (two-sided)
    static JacobiCoeffs from_table(std::vector<std::pair<double, double>> table);
    static JacobiCoeffs from_table_two_sided(long lo, std::vector<std::pair<double, double>> table);

    static JacobiCoeffs free_matrix(); // a == 1, b == 0, one-sided

    Side side() const { return side_; }
    double a(long n) const;
    double b(long n) const;
    void ensure(long lo, long hi) const;

    // sup bounds over the materialized range (and any rule-probed entries)
    double bound_a() const { return bound_a_; }
    double bound_b() const { return bound_b_; }

private:
    Side side_ = Side::OneSided;
    Rule rule_;
    mutable std::vector<std::pair<double, double>> fwd_; // n = 1,2,...
    mutable std::vector<std::pair<double, double>> bwd_; // n = 0,-1,...
    mutable double bound_a_ = 0.0, bound_b_ = 0.0;

    const std::pair<double, double>& entry(long n) const;
};

// J|_m = {a_{n+m}, b_{n+m}}_{n>=1}; one-sided only.
JacobiCoeffs strip(const JacobiCoeffs& J, long m);

// A measure dmu = f(t)dt on the bands of a FiniteGapSet plus finitely many
// point masses off E. The a.c. part is discretized on per-band cos-angle
// midpoint nodes; eff_weights absorb the density so that
// sum_i eff_weights[i] h(nodes[i]) + sum_k w_k h(x_k) ~ int h dmu.
//
// density_rule (optional) evaluates f anywhere on the bands; edge_exponents
// record the power of |t-e| in f at each band edge (ascending edge order,
// one of -1/2, 0, +1/2) and drive the closed-form pieces of the Szego and
// Jost machinery.
struct DiscretizedMeasure {
    FiniteGapSet set;

    // Bands with half-integer edge exponents use cos-angle midpoint nodes
    // (the trig substitution makes the integrands analytic); bands with
    // regular edges use Gauss-Legendre in t.
    enum class NodeFamily { ThetaMidpoint, GaussLegendre };

    struct Band {
        NodeFamily family = NodeFamily::ThetaMidpoint;
        Eigen::ArrayXd theta;
        Eigen::ArrayXd nodes;
        Eigen::ArrayXd geom_weights; // quadrature weights without the density
        Eigen::ArrayXd f_values;
        Eigen::ArrayXd eff_weights;  // geom_weights * f_values
    };
    std::vector<Band> bands;
    std::vector<std::pair<double, double>> point_masses; // (x_k, w_k), x_k off E
    std::function<double(double)> density_rule;          // may be empty
    std::vector<double> edge_exponents;                  // size 2*(ell+1) when known

    double total_mass() const;
    int support_size() const;
    double node_spacing_near(double t) const;

    // smallest |t - x| over all nodes and mass points
    double dist_to_support(double x) const;
};

// Builds the discretization of f(t)dt + point masses on `set` with M nodes
// per band. If exponents is empty, +1/2 at every edge is assumed for the
// bookkeeping fields (the quadrature itself only uses f pointwise).
DiscretizedMeasure discretize_measure(const FiniteGapSet& set, int nodes_per_band,
                                      const std::function<double(double)>& density,
                                      std::vector<std::pair<double, double>> masses = {},
                                      std::vector<double> exponents = {});

// Named reference measures on [alpha,beta] (single band).
DiscretizedMeasure chebyshev_second_kind_measure(const FiniteGapSet& set, int nodes);
DiscretizedMeasure chebyshev_first_kind_measure(const FiniteGapSet& set, int nodes); // = equilibrium
DiscretizedMeasure uniform_measure(const FiniteGapSet& set, int nodes);
// Renormalized copy with an extra point mass.
DiscretizedMeasure with_point_mass(const DiscretizedMeasure& mu, double x, double w);

// --- orthonormal polynomials ------------------------------------------------

// P_n(x) by the forward three-term recurrence (P_{-1} = 0, P_0 = 1).
Complex orthonormal_eval(const JacobiCoeffs& J, int n, Complex x);

// log-scaled variant: P_n(x) = exp(log_abs) * phase, |phase| = 1. Safe for
// large n where P_n ~ e^{n g(x)} overflows.
struct ScaledValue {
    double log_abs;
    Complex phase;
    Complex value() const { return std::exp(log_abs) * phase; }
};
ScaledValue orthonormal_eval_log(const JacobiCoeffs& J, int n, Complex x);
// whole sequence P_0..P_n at once
std::vector<ScaledValue> orthonormal_sequence_log(const JacobiCoeffs& J, int n, Complex x);

// --- measures -> coefficients ----------------------------------------------

// First N recurrence coefficients of mu's orthonormal polynomials by Lanczos
// against the discrete inner product, with full reorthogonalization.
// Requires N <= support/2.
JacobiCoeffs stieltjes_coeffs(const DiscretizedMeasure& mu, int N);

// --- Herglotz data -----------------------------------------------------------

// m(x) = int dmu(t)/(t - x) for x off the support. When x comes closer to
// the support than the local node spacing the quadrature degrades; the
// optional flag reports that.
Complex m_function(const DiscretizedMeasure& mu, Complex x,
                   bool* accuracy_warning = nullptr);

// Boundary value m(t+i0) on a band interior: principal value + i*pi*f(t).
// Needs density_rule.
Complex m_boundary(const DiscretizedMeasure& mu, double t);

// --- spectral approximation ---------------------------------------------------

// Eigenvalues of the N x N truncation lying in (window_lo, window_hi),
// ascending. For two-sided J the truncation covers sites -N/2..N/2.
std::vector<double> truncation_eigs(const JacobiCoeffs& J, int N,
                                    double window_lo, double window_hi);

// Gap eigenvalues that are stable between truncation sizes N and N+7; used
// to separate genuine point spectrum from truncation-boundary artifacts.
std::vector<double> stable_gap_eigs(const JacobiCoeffs& J, int N,
                                    double window_lo, double window_hi,
                                    double tol = 1e-8);

// G_{nm}(x) = -<delta_n, (J-x)^{-1} delta_m> on a truncation grown until the
// entry stabilizes (Combes-Thomas tail below 1e-12).
Complex greens_entry(const JacobiCoeffs& J, long n, long m, Complex x);

// W_n(x) = -<delta_n, (J-x)^{-1} delta_1>, one-sided.
Complex weyl_solution(const JacobiCoeffs& J, long n, Complex x);

} // namespace szegolab

#endif
