#include "szegolab/jost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace szegolab {

CoveringL0::CoveringL0(const FiniteGapSet& single_band) : set(single_band)
{
    if (set.num_gaps() != 0)
        throw std::invalid_argument("CoveringL0: covering machinery is implemented for single bands only");
    c = set.center();
    s = set.diameter() / 4.0;
}

Complex CoveringL0::icm(Complex x) const
{
    Complex y = (x - c) / s;
    // roots of z^2 - y z + 1; their product is 1, so take 1/(larger root)
    Complex sq = std::sqrt(y * y - 4.0);
    Complex big = 0.5 * (y + sq);
    if (std::abs(big) < 1.0)
        big = 0.5 * (y - sq);
    return 1.0 / big;
}

double CoveringL0::icm_real(double x) const
{
    if (set.contains(x))
        throw std::invalid_argument("CoveringL0::icm_real: x lies on the band");
    Complex z = icm(Complex(x, 0.0));
    return z.real();
}

double CoveringL0::theta_of(double t) const
{
    return std::acos(std::clamp((t - c) / (2.0 * s), -1.0, 1.0));
}

Complex blaschke_factor(Complex z, double p)
{
    if (p == 0.0)
        throw std::invalid_argument("blaschke_factor: p must be nonzero");
    return (std::abs(p) / p) * (p - z) / (1.0 - p * z);
}

// ---------------------------------------------------------------------------
// JostFunction
// ---------------------------------------------------------------------------

static Complex outer_from(const JostFunction& jf, Complex z)
{
    // (1-z)^{-p_beta} (1+z)^{-p_alpha} * exp(-a0/4 - 1/2 sum a_k z^k)
    Complex acc = -0.25 * jf.fourier[0];
    Complex zk = 1.0;
    for (int k = 1; k < jf.fourier.size(); ++k) {
        zk *= z;
        acc -= 0.5 * jf.fourier[k] * zk;
    }
    return std::pow(1.0 - z, -jf.p_beta) * std::pow(1.0 + z, -jf.p_alpha) * std::exp(acc);
}

Complex JostFunction::eval(Complex z) const
{
    if (std::abs(z) >= 1.0)
        throw std::invalid_argument("JostFunction::eval: z must lie strictly inside the disk");
    Complex u = outer_from(*this, z);
    for (double p : blaschke_points)
        u *= blaschke_factor(z, p);
    return u;
}

Complex JostFunction::boundary(double theta) const
{
    Complex z = std::polar(1.0, theta);
    Complex u = outer_from(*this, z);
    for (double p : blaschke_points)
        u *= blaschke_factor(z, p);
    return u;
}

JostFunction build_jost(const DiscretizedMeasure& mu, int fourier_terms, int theta_samples)
{
    if (!mu.density_rule)
        throw std::invalid_argument("build_jost: measure carries no density rule");
    JostFunction jf{CoveringL0(mu.set), {}, 0.5, 0.5, {}};
    jf.p_alpha = mu.edge_exponents[0];
    jf.p_beta = mu.edge_exponents[1];
    for (const auto& [x, w] : mu.point_masses) {
        double p = jf.cov.icm_real(x);
        jf.blaschke_points.push_back(p);
    }

    // phi_reg(theta) = log(pi f(cm(e^{i theta}))) - 2 p_beta log(2 sin th/2)
    //                - 2 p_alpha log(2 cos th/2); smooth and even
    QuadRule th = midpoint_theta(theta_samples);
    Eigen::ArrayXd phi(theta_samples);
    for (int i = 0; i < theta_samples; ++i) {
        double t = jf.cov.t_of_theta(th.nodes[i]);
        double f = mu.density_rule(t);
        if (!(f > 0.0))
            throw NumericalError("build_jost: density vanishes on the band; Szego integral is -infinity");
        phi[i] = std::log(std::numbers::pi * f) -
                 2.0 * jf.p_beta * std::log(2.0 * std::sin(0.5 * th.nodes[i])) -
                 2.0 * jf.p_alpha * std::log(2.0 * std::cos(0.5 * th.nodes[i]));
    }
    jf.fourier.resize(fourier_terms);
    for (int k = 0; k < fourier_terms; ++k) {
        double acc = 0.0;
        for (int i = 0; i < theta_samples; ++i)
            acc += th.weights[i] * phi[i] * std::cos(k * th.nodes[i]);
        jf.fourier[k] = 2.0 / std::numbers::pi * acc;
    }
    return jf;
}

Complex jost_eval(const DiscretizedMeasure& mu, Complex z)
{
    if (std::abs(z) >= 1.0)
        throw std::invalid_argument("jost_eval: z must lie strictly inside the disk");
    return build_jost(mu).eval(z);
}

Complex jost_solution(const DiscretizedMeasure& mu, const JacobiCoeffs& J, long n, Complex z)
{
    JostFunction jf = build_jost(mu);
    Complex x = jf.cov.cm(z);
    return jf.eval(z) * weyl_solution(J, n, x);
}

// ---------------------------------------------------------------------------
// measure realization from coefficients (single band)
// ---------------------------------------------------------------------------

namespace {

// m(x) by backward continued fraction closed with the free-type tail.
Complex m_cf(const JacobiCoeffs& J, const CoveringL0& cov, Complex x, int depth)
{
    // free-type tail on [alpha,beta]: m'(x) = (1/s) m_free((x-c)/s),
    // m_free(y) = (-y + sqrt(y^2-4))/2 with the branch m ~ -1/y.
    Complex y = (x - cov.c) / cov.s;
    Complex sq = std::sqrt(y * y - 4.0);
    if ((sq / y).real() < 0.0)
        sq = -sq; // branch: sqrt ~ y at infinity
    Complex m = 0.5 * (-y + sq) / cov.s;
    for (int k = depth; k >= 1; --k)
        m = 1.0 / (J.b(k) - x - J.a(k) * J.a(k) * m);
    return m;
}

Complex m_cf_boundary(const JacobiCoeffs& J, const CoveringL0& cov, double t, int depth)
{
    // boundary value from above: sqrt(y^2-4) -> i sqrt(4-y^2)
    double y = (t - cov.c) / cov.s;
    Complex m = Complex(-0.5 * y, 0.5 * std::sqrt(std::max(0.0, 4.0 - y * y))) / cov.s;
    for (int k = depth; k >= 1; --k)
        m = 1.0 / (J.b(k) - t - J.a(k) * J.a(k) * m);
    return m;
}

int auto_tail_depth(const JacobiCoeffs& J, const CoveringL0& cov)
{
    for (int k = 8; k <= 2048; k *= 2) {
        double dev = 0.0;
        for (int i = 0; i < 4; ++i)
            dev = std::max(dev, std::abs(J.a(k + i) - cov.s) + std::abs(J.b(k + i) - cov.c));
        if (dev < 1e-13)
            return k;
    }
    throw NumericalError("measure_from_coeffs_l0: coefficients do not settle to the free-type tail");
}

} // namespace

DiscretizedMeasure measure_from_coeffs_l0(const JacobiCoeffs& J, const FiniteGapSet& set,
                                          int nodes_per_band, int tail_depth)
{
    CoveringL0 cov(set);
    int depth = tail_depth > 0 ? tail_depth : auto_tail_depth(J, cov);

    auto density = [J, cov, depth](double t) {
        return m_cf_boundary(J, cov, t, depth).imag() / std::numbers::pi;
    };

    // point spectrum outside the band: truncation seeds polished on 1/m,
    // weights from w = 1/sum_n P_n(lam)^2
    std::vector<std::pair<double, double>> masses;
    auto add_masses = [&](double lo, double hi) {
        for (double lam : stable_gap_eigs(J, 700, lo, hi, 1e-7)) {
            if (std::min(std::abs(lam - set.alpha), std::abs(lam - set.beta)) <
                1e-9 * set.diameter())
                continue; // below resolvable distance from the band
            double d0 = 1e-5 * set.diameter();
            auto inv_m = [&](double x) { return 1.0 / m_cf(J, cov, Complex(x, 0.0), depth).real(); };
            if (inv_m(lam - d0) * inv_m(lam + d0) < 0.0)
                lam = brent_root(inv_m, lam - d0, lam + d0);
            // w = 1/sum P_n(lam)^2; the forward recurrence eventually excites
            // the growing solution, so stop at the turnaround (the discarded
            // true tail is below the roundoff floor there)
            double acc = 0.0, minp2 = std::numeric_limits<double>::infinity();
            double prev = 0.0, cur = 1.0;
            for (int n = 0; n < 100000; ++n) {
                double p2 = cur * cur;
                if (p2 > 1e6 * minp2)
                    break;
                acc += p2;
                minp2 = std::min(minp2, std::max(p2, 1e-280));
                if (n > 32 && p2 < 1e-28 * acc)
                    break;
                double an = (n == 0) ? 0.0 : J.a(n);
                double next = ((lam - J.b(n + 1)) * cur - an * prev) / J.a(n + 1);
                prev = cur;
                cur = next;
            }
            masses.emplace_back(lam, 1.0 / acc);
        }
    };
    double margin = 40.0 * set.diameter();
    add_masses(set.beta + 1e-13, set.beta + margin);
    add_masses(set.alpha - margin, set.alpha - 1e-13);
    std::sort(masses.begin(), masses.end());

    return discretize_measure(set, nodes_per_band, density, masses, {0.5, 0.5});
}

std::vector<double> jost_convergence(const JacobiCoeffs& J, const FiniteGapSet& set,
                                     const std::vector<int>& depths, double r, int grid)
{
    JostFunction ref = build_jost(chebyshev_second_kind_measure(set, 512));
    std::vector<double> out;
    for (int m : depths) {
        DiscretizedMeasure mum = measure_from_coeffs_l0(strip(J, m), set);
        JostFunction jm = build_jost(mum);
        double worst = 0.0;
        for (int i = 0; i < grid; ++i) {
            Complex z = std::polar(r, 2.0 * std::numbers::pi * i / grid);
            worst = std::max(worst, std::abs(jm.eval(z) - ref.eval(z)));
        }
        out.push_back(worst);
    }
    return out;
}

std::pair<double, double> blaschke_product_bound(const GreenFunction& G,
                                          const std::vector<double>& points, double r,
                                          int grid)
{
    CoveringL0 cov(G.set);
    double gsum = 0.0;
    std::vector<double> zs;
    for (double y : points) {
        gsum += green_value(G, y);
        zs.push_back(cov.icm_real(y));
    }
    double lhs = 0.0;
    for (int i = 0; i < grid; ++i) {
        Complex z = std::polar(r, 2.0 * std::numbers::pi * i / grid);
        Complex prod = 1.0;
        for (double p : zs)
            prod *= blaschke_factor(z, p);
        lhs = std::max(lhs, std::abs(prod - 1.0));
    }
    double rhs = std::exp((1.0 + r) / (1.0 - r) * gsum) - 1.0;
    return {lhs, rhs};
}

} // namespace szegolab
