#ifndef SZEGOLAB_JOST_HPP
#define SZEGOLAB_JOST_HPP

#include <vector>

#include "szegolab/gapset.hpp"
#include "szegolab/jacobi.hpp"

namespace szegolab {

// Joukowski covering of a single band [alpha,beta]:
//   cm(z) = c + s (z + 1/z),  s = (beta-alpha)/4,  B(z) = z,
// so that |B(z)| = exp(-g(cm(z))). cm(0) = infinity, lim z cm(z) = s > 0.
struct CoveringL0 {
    FiniteGapSet set;
    double c = 0.0;
    double s = 1.0;

    explicit CoveringL0(const FiniteGapSet& single_band);

    Complex cm(Complex z) const { return c + s * (z + 1.0 / z); }
    // the preimage in the unit disk (|icm(x)| < 1 for x off the band)
    Complex icm(Complex x) const;
    double icm_real(double x) const; // real x off [alpha,beta]

    double theta_of(double t) const;     // t in [alpha,beta] -> theta in [0,pi]
    double t_of_theta(double th) const { return c + 2.0 * s * std::cos(th); }
};

// single Moebius-Blaschke factor with zero at p in (-1,1)\{0}
Complex blaschke_factor(Complex z, double p);

// u(z; dmu) = prod_k B(z,p_k) * outer part. The outer part is carried as
// explicit (1-z)/(1+z) powers for the |t-edge|^{p} density factors plus a
// cosine series for the remaining smooth log-density, so both interior and
// boundary evaluation are cheap and accurate.
struct JostFunction {
    CoveringL0 cov;
    std::vector<double> blaschke_points;
    double p_alpha = 0.5, p_beta = 0.5; // density edge exponents
    Eigen::VectorXd fourier;            // a_k, phi_reg = a0/2 + sum a_k cos(k theta)

    Complex eval(Complex z) const;          // |z| < 1
    Complex boundary(double theta) const;   // z = e^{i theta}
};

// Builds the Jost function of a Szego-class measure on a single band.
// Needs mu.density_rule and edge exponents.
JostFunction build_jost(const DiscretizedMeasure& mu, int fourier_terms = 512,
                        int theta_samples = 4096);

// One-shot convenience: u(z; dmu) for z strictly inside the disk.
Complex jost_eval(const DiscretizedMeasure& mu, Complex z);

// Jost solution u_n(z; dmu) = u(z; dmu) W_n(cm(z)).
Complex jost_solution(const DiscretizedMeasure& mu, const JacobiCoeffs& J, long n, Complex z);

// Realizes the spectral measure of a one-sided J on a single band whose
// coefficients settle to the band's free-type values: the density comes from
// the continued fraction closed with the free-type tail m-function, point
// masses from stable truncation eigenvalues polished on 1/m and weighted by
// 1/sum P_n^2.
DiscretizedMeasure measure_from_coeffs_l0(const JacobiCoeffs& J, const FiniteGapSet& set,
                                          int nodes_per_band = 512, int tail_depth = 0);

// sup_{|z|<=r} |u(z; dmu_m) - u(z; J')| for each depth, J' the single-point
// torus reference (free-type measure on the band).
std::vector<double> jost_convergence(const JacobiCoeffs& J, const FiniteGapSet& set,
                                     const std::vector<int>& depths, double r,
                                     int grid = 64);

// Blaschke product bound: lhs = max_{|z|<=r} |prod_k B(z,z_k) - 1| on a grid,
// rhs = exp((1+r)/(1-r) * sum_k g(y_k)) - 1.
std::pair<double, double> blaschke_product_bound(const GreenFunction& G,
                                          const std::vector<double>& points, double r,
                                          int grid = 512);

} // namespace szegolab

#endif
