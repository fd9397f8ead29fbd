#ifndef SZEGOLAB_ALGEBRA_HPP
#define SZEGOLAB_ALGEBRA_HPP

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace szegolab {

using Complex = std::complex<double>;

// Real polynomials are coefficient vectors in ascending order, p[k] = coeff
// of x^k. Kept as free functions over Eigen vectors.
namespace poly {

double eval(const Eigen::VectorXd& p, double x);
Complex eval(const Eigen::VectorXd& p, Complex x);

Eigen::VectorXd derivative(const Eigen::VectorXd& p);
Eigen::VectorXd multiply(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// Monic polynomial with the given roots.
Eigen::VectorXd from_roots(const std::vector<double>& roots);

// Euclidean division p = q*d + r; returns q, writes remainder into r.
Eigen::VectorXd divide(const Eigen::VectorXd& p, const Eigen::VectorXd& d,
                       Eigen::VectorXd& r);

// Strips (near-)zero leading coefficients.
Eigen::VectorXd trim(const Eigen::VectorXd& p, double tol = 0.0);

// All real roots inside [lo,hi], for degree <= 4 needed here; uses closed
// forms for deg <= 2 and bracketed bisection on a sign-change scan otherwise.
std::vector<double> real_roots_in(const Eigen::VectorXd& p, double lo, double hi);

} // namespace poly

// Expansion of a function at infinity, f(x) = x^deg * sum_k c[k] x^{-k}.
// Only the handful of operations the Green/torus algebra needs.
struct TailSeries {
    int deg = 0;
    Eigen::VectorXd c; // c[0] is the leading coefficient

    double coeff_at_power(int p) const; // coefficient of x^p, 0 if out of range
};

// Expansion of a monic polynomial (given ascending coefficients) at infinity,
// truncated to nterms coefficients.
TailSeries tail_of_polynomial(const Eigen::VectorXd& p, int nterms);

// sqrt of a series with c[0] = 1 and even... (deg arbitrary): requires
// deg even after halving, i.e. input deg must be even; c[0] must be 1.
TailSeries tail_sqrt(const TailSeries& s);

TailSeries tail_mul(const TailSeries& a, const TailSeries& b);
TailSeries tail_inv(const TailSeries& s); // requires c[0] != 0

// The polynomial part of a tail series (powers x^deg ... x^0), ascending.
Eigen::VectorXd tail_polynomial_part(const TailSeries& s);

// Brent-style bracketed root finder for a smooth real function with
// f(a)*f(b) <= 0. Tolerance on x.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-14, int maxit = 200);

// Golden-section minimizer on [a,b]; returns argmin.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol, int maxit = 200);

} // namespace szegolab

#endif
