#ifndef SZEGOLAB_GAPSET_HPP
#define SZEGOLAB_GAPSET_HPP

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "szegolab/algebra.hpp"
#include "szegolab/quadrature.hpp"

namespace szegolab {

// E = [alpha,beta] minus finitely many open gaps (a_j,b_j), strictly inside
// and pairwise disjoint. ell+1 closed bands of positive length remain.
struct FiniteGapSet {
    double alpha = -2.0;
    double beta = 2.0;
    std::vector<std::pair<double, double>> gaps; // sorted, disjoint

    FiniteGapSet() = default;
    FiniteGapSet(double a, double b, std::vector<std::pair<double, double>> g = {});

    int num_gaps() const { return static_cast<int>(gaps.size()); }
    int num_bands() const { return num_gaps() + 1; }

    // band k = [band_lo(k), band_hi(k)], k = 0..ell
    double band_lo(int k) const;
    double band_hi(int k) const;

    // all 2(ell+1) band edges, ascending
    std::vector<double> edges() const;

    double diameter() const { return beta - alpha; }
    double center() const { return 0.5 * (alpha + beta); }

    bool contains(double t) const;        // t in E (closed bands)
    bool in_open_gap(double t) const;
    int gap_index(double t) const;        // -1 if not in any open gap

    void validate() const; // throws std::invalid_argument on bad data
};

// sqrt(R), R(x) = prod over all band edges of (x - e), with the branch that
// is analytic on C \ E and behaves like x^{ell+1} at +infinity.
Complex sqrt_R(const FiniteGapSet& set, Complex x);
// value for real x off E (limit from the upper half plane; it is real there)
double sqrt_R_real(const FiniteGapSet& set, double x);
// boundary value from above on a band interior is i*shat(t) with shat real;
// returns shat.
double sqrt_R_band_imag(const FiniteGapSet& set, double t);

// Green's function data for C \ E with pole at infinity:
//   g'(x) = Q(x)/sqrt(R(x)),  Q monic of degree ell fixed by the ell
//   vanishing gap integrals; equilibrium density |Q|/(pi sqrt|R|) on bands.
struct GreenFunction {
    FiniteGapSet set;
    Eigen::VectorXd Q;            // ascending coefficients, monic, deg = ell
    std::vector<double> q_roots;  // critical points c_j, one per gap
    double capacity = 0.0;

    struct BandRule {
        Eigen::ArrayXd theta;     // midpoint nodes in (0,pi)
        Eigen::ArrayXd nodes;     // t = mid + half*cos(theta)
        Eigen::ArrayXd eq_weights;// equilibrium-measure weights (sum = band mass)
        double mass = 0.0;
    };
    std::vector<BandRule> band_rules;

    int quad_order = 0;
};

GreenFunction build_green(const FiniteGapSet& set, int quad_order = 128);

// g(x) for x off E; zero on E. Real x in E returns exactly 0. Symmetric in
// complex conjugation. Throws on NaN input.
double green_value(const GreenFunction& G, Complex x);
double green_value(const GreenFunction& G, double x);

// mu_E(band k).
double equilibrium_mass(const GreenFunction& G, int band_index);
// mu_E([lo,hi]); the interval may cover parts of several bands.
double equilibrium_mass(const GreenFunction& G, double lo, double hi);

// Parreau-Widom sum over gap critical points (finite here by construction).
double pw_sum(const GreenFunction& G);

// Blaschke-condition sum over points off E; rejects points inside E.
double blaschke_sum(const GreenFunction& G, const std::vector<double>& points);

} // namespace szegolab

#endif
