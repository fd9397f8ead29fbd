#ifndef SZEGOLAB_SZEGO_HPP
#define SZEGOLAB_SZEGO_HPP

#include <string>
#include <vector>

#include "szegolab/gapset.hpp"
#include "szegolab/jacobi.hpp"

namespace szegolab {

// A value that may be -infinity (log of a vanishing density). Explicit flag,
// no sentinel arithmetic.
struct LogIntegral {
    bool finite = true;
    double value = 0.0;
};

// int_E log f dmu_E with the equilibrium quadrature of G. Edge behaviour
// |t-e|^{p_e} recorded in the measure is integrated in closed form through
// int log|t-e| dmu_E = log cap(E) for e in E.
LogIntegral szego_integral(const DiscretizedMeasure& mu, const GreenFunction& G);

// u_n = a_1...a_n / cap^n for n = 1..N, computed in log space.
Eigen::VectorXd normalized_leading(const JacobiCoeffs& J, double cap, int N);

// S(dmu) = int log(f_E/f) dmu_E; +infinity flag when the Szego integral
// is -infinity.
struct Entropy {
    bool finite = true;
    double value = 0.0;
};
Entropy relative_entropy(const DiscretizedMeasure& mu, const GreenFunction& G);

struct SzegoReport {
    LogIntegral szego;
    double blaschke = 0.0;
    Eigen::VectorXd normalized_leading;
    Entropy entropy;
    bool essential_support_ok = false;
    bool member = false;
    std::vector<std::string> reasons; // populated when member == false
};

SzegoReport membership(const DiscretizedMeasure& mu, const GreenFunction& G);

} // namespace szegolab

#endif
