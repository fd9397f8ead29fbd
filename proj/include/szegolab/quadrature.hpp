#ifndef SZEGOLAB_QUADRATURE_HPP
#define SZEGOLAB_QUADRATURE_HPP

#include <Eigen/Core>

namespace szegolab {

// A quadrature rule: sum_i weights[i]*f(nodes[i]) approximates an integral.
struct QuadRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
};

// Gauss-Legendre rule on [-1,1]. Nodes by Newton iteration on P_n; results
// are cached per order, so repeated calls are cheap.
const QuadRule& gauss_legendre(int n);

// Gauss-Legendre rule mapped to [a,b].
QuadRule gauss_legendre_on(int n, double a, double b);

// Midpoint rule in theta on (0,pi): theta_i = (i+1/2)*pi/n, weight pi/n.
// Spectrally accurate for integrands that extend to smooth even 2pi-periodic
// functions of theta, which is what the cos-substitution produces on bands
// and gaps.
QuadRule midpoint_theta(int n);

} // namespace szegolab

#endif
