#include "szegolab/szego.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace szegolab {

static void require_same_set(const FiniteGapSet& a, const FiniteGapSet& b)
{
    bool same = (a.alpha == b.alpha) && (a.beta == b.beta) && a.gaps.size() == b.gaps.size();
    if (same)
        for (size_t j = 0; j < a.gaps.size(); ++j)
            same = same && a.gaps[j] == b.gaps[j];
    if (!same)
        throw std::invalid_argument("measure and Green function live on different sets");
}

// density at t with the edge factors |t-e|^{p_e} removed
static double smooth_part(const DiscretizedMeasure& mu, double t, double f)
{
    double F = f;
    std::vector<double> edges = mu.set.edges();
    for (size_t e = 0; e < edges.size(); ++e)
        F *= std::pow(std::abs(t - edges[e]), -mu.edge_exponents[e]);
    return F;
}

LogIntegral szego_integral(const DiscretizedMeasure& mu, const GreenFunction& G)
{
    require_same_set(mu.set, G.set);
    double acc = 0.0;
    for (double p : mu.edge_exponents)
        acc += p * std::log(G.capacity);
    for (int k = 0; k < G.set.num_bands(); ++k) {
        const auto& rule = G.band_rules[k];
        for (int i = 0; i < rule.nodes.size(); ++i) {
            double t = rule.nodes[i];
            double f;
            if (mu.density_rule)
                f = mu.density_rule(t);
            else {
                if (mu.bands[k].nodes.size() != rule.nodes.size())
                    throw std::invalid_argument(
                        "szego_integral: measure without density rule must share the "
                        "equilibrium quadrature nodes");
                f = mu.bands[k].f_values[i];
            }
            if (!(f > 0.0))
                return {false, 0.0};
            acc += rule.eq_weights[i] * std::log(smooth_part(mu, t, f));
        }
    }
    return {true, acc};
}

Eigen::VectorXd normalized_leading(const JacobiCoeffs& J, double cap, int N)
{
    if (!(cap > 0.0))
        throw std::invalid_argument("normalized_leading: capacity must be positive");
    Eigen::VectorXd u(N);
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) {
        acc += std::log(J.a(n)) - std::log(cap);
        u[n - 1] = std::exp(acc);
    }
    return u;
}

// int log f_E dmu_E in closed-ish form: the |t-e|^{-1/2} edge factors give
// -(ell+1) log cap and the remaining smooth part is |Q|/pi.
static double equilibrium_log_integral(const GreenFunction& G)
{
    double acc = -(G.set.num_bands()) * std::log(G.capacity);
    for (const auto& rule : G.band_rules)
        for (int i = 0; i < rule.nodes.size(); ++i)
            acc += rule.eq_weights[i] *
                   std::log(std::abs(poly::eval(G.Q, rule.nodes[i])) / std::numbers::pi);
    return acc;
}

Entropy relative_entropy(const DiscretizedMeasure& mu, const GreenFunction& G)
{
    LogIntegral s = szego_integral(mu, G);
    if (!s.finite)
        return {false, 0.0};
    return {true, equilibrium_log_integral(G) - s.value};
}

SzegoReport membership(const DiscretizedMeasure& mu, const GreenFunction& G)
{
    require_same_set(mu.set, G.set);
    SzegoReport rep;
    rep.szego = szego_integral(mu, G);
    std::vector<double> pts;
    for (const auto& [x, w] : mu.point_masses)
        pts.push_back(x);
    rep.blaschke = blaschke_sum(G, pts);
    rep.entropy = relative_entropy(mu, G);

    // essential support surrogate: f > 0 on >= 99% of the nodes of every band
    rep.essential_support_ok = true;
    for (const auto& band : mu.bands) {
        int pos = 0;
        for (int i = 0; i < band.nodes.size(); ++i) {
            double f = mu.density_rule ? mu.density_rule(band.nodes[i]) : band.f_values[i];
            if (f > 0.0)
                ++pos;
        }
        if (pos < 0.99 * band.nodes.size())
            rep.essential_support_ok = false;
    }

    int K = std::min(32, mu.support_size() / 2);
    if (K >= 1) {
        JacobiCoeffs J = stieltjes_coeffs(mu, K);
        rep.normalized_leading = normalized_leading(J, G.capacity, K);
    }

    rep.member = true;
    if (!rep.szego.finite) {
        rep.member = false;
        rep.reasons.push_back("Szego integral is -infinity");
    }
    if (!rep.essential_support_ok) {
        rep.member = false;
        rep.reasons.push_back("density vanishes on part of a band");
    }
    if (!std::isfinite(rep.blaschke)) {
        rep.member = false;
        rep.reasons.push_back("Blaschke sum diverges");
    }
    return rep;
}

} // namespace szegolab
