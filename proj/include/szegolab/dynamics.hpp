#ifndef SZEGOLAB_DYNAMICS_HPP
#define SZEGOLAB_DYNAMICS_HPP

#include <functional>
#include <memory>
#include <vector>

#include "szegolab/torus.hpp"

namespace szegolab {

// One-sided J with a_n = a'_n + da_n, b_n = b'_n + db_n on top of the torus
// point's right half-line coefficients. The torus table is materialized up
// to n_max once; the perturbation rule is evaluated lazily.
JacobiCoeffs perturb_torus(const TorusPoint& T,
                           const std::function<std::pair<double, double>(long)>& decay,
                           int n_max = 1024);

// Same on top of an already-materialized base sequence (avoids re-running
// Lanczos when many perturbations of one torus point are needed).
JacobiCoeffs perturb_coeffs(const JacobiCoeffs& base,
                            const std::function<std::pair<double, double>(long)>& decay,
                            int n_max);

struct IdentifyOptions {
    int fit_quad = 220;       // nodes/band for misfit builds
    int final_quad = 512;     // nodes/band for the returned point
    int trunc_size = 360;     // truncation for eigenvalue seeding
    int restarts = 3;
    int sweeps = 3;
    double depth_tol = 2e-3;  // allowed divisor drift between depths m and 2m
    unsigned long seed = 20240901UL;
};

struct IdentifyResult {
    TorusPoint point;          // pulled back to depth 0
    Divisor divisor_at_depth;  // best-fit divisor of J|_m
    double misfit = 0.0;       // window misfit at depth m
    double depth_agreement = 0.0; // divisor distance between the m and 2m pullbacks
    std::vector<Divisor> fit_history; // pullback chain, depth m down to 0
};

// Orbit identification: fit the divisor of J|_m over a coefficient
// window of width W, pull it back by m inverse shifts, verify agreement with
// the depth-2m fit. Throws NumericalError("insufficient depth") when the two
// pullbacks disagree by more than depth_tol.
IdentifyResult identify_torus_point(const JacobiCoeffs& J,
                                    std::shared_ptr<const GreenFunction> green,
                                    int depth, int window,
                                    const IdentifyOptions& opts = {});

struct OrbitReport {
    Eigen::VectorXd error_seq;        // e_n = |a_n - a'_n| + |b_n - b'_n|, n = 1..N
    Eigen::VectorXd partial_products; // prod_{k<=n} a_k/a'_k
    Eigen::VectorXd partial_sums;     // sum_{k<=n} (b_k - b'_k)
    double ell2_sum = 0.0;            // sum (a-a')^2 + (b-b')^2 (reported, not asserted)
    Eigen::VectorXd a, b, ap, bp;     // the compared sequences
};

OrbitReport orbit_error(const JacobiCoeffs& J, const TorusPoint& Tp, int N);

struct InterlacingResult {
    bool ok = true;
    int max_between = 0; // worst count of J|_m eigenvalues strictly between
                         // consecutive J eigenvalues within one gap
    std::vector<int> counts_J, counts_Jm; // per gap
};

// Gap eigenvalue interlacing between J and J|_m on large truncations.
InterlacingResult interlacing_check(const JacobiCoeffs& J, int m, const GreenFunction& G,
                                    int trunc_size = 400);

struct EntropyEntry {
    double value = 0.0;
    bool reliable = true; // reconstruction stability flag
};

// S(dmu_d) for d = 0..depths, with each stripped spectral measure
// reconstructed on the equilibrium nodes from the Christoffel function of a
// large polynomial section.
std::vector<EntropyEntry> entropy_along_stripping(const JacobiCoeffs& J, const GreenFunction& G,
                                                  int depths, int cd_degree = 768);

} // namespace szegolab

#endif
