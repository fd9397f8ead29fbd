#ifndef SZEGOLAB_ASYMPTOTICS_HPP
#define SZEGOLAB_ASYMPTOTICS_HPP

#include <vector>

#include "szegolab/jost.hpp"
#include "szegolab/torus.hpp"

namespace szegolab {

// P_n(x,dmu)/P_n(x,dmu') along n for every grid point, with Aitken
// extrapolation and a three-agreement convergence certificate.
struct RatioScan {
    std::vector<Complex> x_grid;
    std::vector<int> n_list;
    // values[i][k] = R_{n_list[k]}(x_grid[i])
    std::vector<std::vector<Complex>> values;
    std::vector<Complex> extrapolated;
    std::vector<bool> certified;
    std::vector<double> rates; // last extrapolation delta
};

RatioScan poly_ratio_scan(const JacobiCoeffs& J, const JacobiCoeffs& Jp,
                          const std::vector<Complex>& x_grid, int N,
                          const FiniteGapSet& set, double tol = 1e-9);

// Extrapolated polynomial ratio limits at x = cm(z) against the Jost ratio
// u(z;dmu)/u(z;dmu'); both routes computed independently. Returns per-point
// deviations.
std::vector<double> ratio_vs_jost(const JacobiCoeffs& J, const DiscretizedMeasure& mu,
                                  const TorusPoint& Tp, const std::vector<double>& z_grid,
                                  int N);

// min/max of e^{-n g(x)} |P_n(x,dmu')| over n in [N/2, N] per grid point.
struct Envelope {
    double min_val = 0.0, max_val = 0.0;
    double ratio() const { return max_val / min_val; }
};
std::vector<Envelope> growth_envelope(const JacobiCoeffs& Jp, const GreenFunction& G,
                                      const std::vector<double>& x_grid, int N);

// Phi_n(z; dmu) = z^n P_n(cm(z),dmu) a_n (1-z^2) / u(z;dmu); checks that the
// limit over n exists and is the same function of z for every measure.
struct CorollaryCheck {
    std::vector<double> z_grid;
    // phi[m][i]: limit for measure m at z_grid[i]
    std::vector<std::vector<Complex>> phi;
    double max_cross_deviation = 0.0;
    bool converged = true;
};
CorollaryCheck corollary_pn_check(const std::vector<DiscretizedMeasure>& measures,
                                  const std::vector<JacobiCoeffs>& coeffs,
                                  const std::vector<double>& z_grid, int N);

// |G_nn(J)/G_nn(J') - 1| for n in n_list at a point x off both spectra; the
// reference diagonal entries come from the torus orbit in closed form.
std::vector<double> green_ratio(const JacobiCoeffs& J, const TorusPoint& T,
                                const std::vector<int>& n_list, Complex x);

// L2 asymptotics on the band (ell = 0): I_ac[n] and I_sing[n] for n in n_list.
struct L2Report {
    std::vector<int> n_list;
    std::vector<double> ac;
    std::vector<double> sing;
};
L2Report l2_asymptotics(const DiscretizedMeasure& mu, const TorusPoint& Tfree,
                        const std::vector<int>& n_list);

} // namespace szegolab

#endif
