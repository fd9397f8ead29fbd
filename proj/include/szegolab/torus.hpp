#ifndef SZEGOLAB_TORUS_HPP
#define SZEGOLAB_TORUS_HPP

#include <memory>
#include <vector>

#include "szegolab/gapset.hpp"
#include "szegolab/jacobi.hpp"

namespace szegolab {

// One point with sign per gap; (y,+1) and (y,-1) are identified at gap
// endpoints (normalized to +1 there).
struct Divisor {
    struct Point {
        double x = 0.0;
        int eps = +1;
    };
    std::vector<Point> points; // one per gap, in gap order

    // Snaps endpoint-adjacent points, normalizes eps there, checks one point
    // per gap inside its closed gap.
    void normalize(const FiniteGapSet& set, double snap_tol = 1e-9);
};

// Distance in x-units; points with opposite signs are connected through the
// nearer gap endpoint (where the two sheets meet).
double divisor_distance(const Divisor& a, const Divisor& b, const FiniteGapSet& set);

// Diagonal Green's function of the reflectionless matrix with divisor d:
// G(x) = -prod_j (x - x_j) / sqrt(R(x)), normalized by x G(x) -> -1.
Complex diag_green(const Divisor& d, const FiniteGapSet& set, Complex x);

// Im G(t+i0) on a band interior (positive there); rejects band edges.
double boundary_im_green(const Divisor& d, const FiniteGapSet& set, double t);

// A point of the isospectral torus with all derived Herglotz data.
//
// The function H = -1/G has the representation H(x) = x + A + Stieltjes(rho)
// with rho = (a.c. part on E) + sum_j sigma_j delta_{x_j}; the a.c. part
// splits half/half between the two half-line m-functions, poles go to the
// m+ side iff eps = +1. Everything is carried in closed algebraic form:
//   a0^2 m+ = (sqrt R + V) / (2 N),    -1/m- = (sqrt R - V) / (2 N),
// with N = prod (x - x_j) and V a polynomial fixed by V(x_j) = eps_j sqrt
// R(x_j) plus decay at infinity. N1 below is the divisor polynomial of the
// left-shifted point, m- = (sqrt R + V) / (2 a0^2 N1).
struct TorusPoint {
    std::shared_ptr<const GreenFunction> green;
    Divisor divisor;

    Eigen::VectorXd N;  // ascending, monic, deg = ell
    Eigen::VectorXd V;  // deg = ell + 1
    Eigen::VectorXd N1; // shifted divisor polynomial, monic, deg = ell
    double A = 0.0;        // linear-term constant of H
    double a0_sq = 0.0;    // nu+ total mass = (a'_0)^2
    double rho_total = 0.0;// total mass of rho
    std::vector<double> sigma; // H-residues at interior divisor points (gap order; 0 at endpoints)

    DiscretizedMeasure mu_plus;  // spectral measure of J+
    DiscretizedMeasure mu_minus; // spectral measure of J-
    int quad_order = 0;

    const FiniteGapSet& set() const { return green->set; }
};

TorusPoint build_torus_point(const Divisor& d, std::shared_ptr<const GreenFunction> green,
                             int quad_order = 256);

// Closed-form half-line m-functions of the point (off the spectrum).
Complex m_plus_value(const TorusPoint& T, Complex x);
Complex m_minus_value(const TorusPoint& T, Complex x);

// Two-sided coefficient window {a'_n, b'_n}, n in [lo, hi]; right side from
// Lanczos on mu_plus, left side from Lanczos on mu_minus with the index flip
// a'_{-k} = a(J-)_k, b'_{1-k} = b(J-)_k, and a'_0 = sqrt(a0_sq).
JacobiCoeffs torus_coeffs(const TorusPoint& T, long lo, long hi);

// Left shift (coefficient stripping on the torus), its inverse, and the
// parameter reflection a'^r_n = a'_{-n-1}, b'^r_n = b'_{-n}.
TorusPoint torus_shift(const TorusPoint& T);
TorusPoint torus_reflect(const TorusPoint& T);
TorusPoint torus_shift_inverse(const TorusPoint& T);

// |m+(x) G_00(x) - m-(x) G_11(x)| with the m's from measure quadrature and
// G_11 the diagonal Green function of the shifted point.
double identity_m_og_G(const TorusPoint& T, Complex x);

// |a0^2 m+(t+i0) conj(m-(t+i0)) - 1| at a band-interior t, both boundary
// values computed from the discretized measures (principal value + i pi f).
double reflectionless_residual(const TorusPoint& T, double t);

} // namespace szegolab

#endif
