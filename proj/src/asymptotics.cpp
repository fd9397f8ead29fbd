#include "szegolab/asymptotics.hpp"

#include "szegolab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace szegolab {

namespace {

bool in_convex_hull(const FiniteGapSet& set, Complex x)
{
    return x.imag() == 0.0 && x.real() >= set.alpha && x.real() <= set.beta;
}

// Aitken delta-squared step on the last three entries.
Complex aitken(Complex a, Complex b, Complex c)
{
    Complex d2 = c - 2.0 * b + a;
    if (std::abs(d2) == 0.0)
        return c;
    return c - (c - b) * (c - b) / d2;
}

} // namespace

RatioScan poly_ratio_scan(const JacobiCoeffs& J, const JacobiCoeffs& Jp,
                          const std::vector<Complex>& x_grid, int N,
                          const FiniteGapSet& set, double tol)
{
    RatioScan scan;
    scan.x_grid = x_grid;
    for (int n = 1; n <= N; ++n)
        scan.n_list.push_back(n);
    for (Complex x : x_grid)
        if (in_convex_hull(set, x))
            throw std::invalid_argument("poly_ratio_scan: x inside the convex hull of E");
    J.ensure(1, N);
    Jp.ensure(1, N);
    int G = static_cast<int>(x_grid.size());
    scan.values.resize(G);
    scan.extrapolated.resize(G);
    scan.rates.resize(G);
    std::vector<char> cert_slots(G, 0); // vector<bool> is not slot-addressable
    parallel_for(G, [&](int gi) {
        Complex x = x_grid[gi];
        auto top = orthonormal_sequence_log(J, N, x);
        auto bot = orthonormal_sequence_log(Jp, N, x);
        std::vector<Complex> r(N);
        for (int n = 1; n <= N; ++n)
            r[n - 1] = std::exp(top[n].log_abs - bot[n].log_abs) * top[n].phase / bot[n].phase;
        // Aitken on the tail, certified by three consecutive agreements
        std::vector<Complex> acc;
        bool cert = false;
        Complex lim = r.back();
        double rate = std::abs(r[N - 1] - r[N - 2]);
        for (int n = 2; n < N; ++n) {
            acc.push_back(aitken(r[n - 2], r[n - 1], r[n]));
            size_t m = acc.size();
            if (m >= 3) {
                double d1 = std::abs(acc[m - 1] - acc[m - 2]);
                double d2 = std::abs(acc[m - 2] - acc[m - 3]);
                if (d1 < tol && d2 < tol) {
                    cert = true;
                    lim = acc[m - 1];
                    rate = d1;
                    break;
                }
            }
        }
        if (!cert && !acc.empty())
            lim = acc.back();
        scan.values[gi] = std::move(r);
        scan.extrapolated[gi] = lim;
        cert_slots[gi] = cert ? 1 : 0;
        scan.rates[gi] = rate;
    });
    scan.certified.assign(cert_slots.begin(), cert_slots.end());
    return scan;
}

std::vector<double> ratio_vs_jost(const JacobiCoeffs& J, const DiscretizedMeasure& mu,
                                  const TorusPoint& Tp, const std::vector<double>& z_grid,
                                  int N)
{
    if (Tp.set().num_gaps() != 0)
        throw std::invalid_argument("ratio_vs_jost: single-band sets only");
    CoveringL0 cov(Tp.set());
    JostFunction u_mu = build_jost(mu);
    JostFunction u_ref = build_jost(Tp.mu_plus);
    JacobiCoeffs Jp = stieltjes_coeffs(Tp.mu_plus, N);

    std::vector<Complex> xs;
    for (double z : z_grid)
        xs.push_back(cov.cm(Complex(z, 0.0)));
    RatioScan scan = poly_ratio_scan(J, Jp, xs, N, Tp.set());

    std::vector<double> dev;
    for (size_t i = 0; i < z_grid.size(); ++i) {
        Complex jost_ratio = u_mu.eval(Complex(z_grid[i], 0.0)) / u_ref.eval(Complex(z_grid[i], 0.0));
        dev.push_back(std::abs(scan.extrapolated[i] - jost_ratio));
    }
    return dev;
}

std::vector<Envelope> growth_envelope(const JacobiCoeffs& Jp, const GreenFunction& G,
                                      const std::vector<double>& x_grid, int N)
{
    Jp.ensure(1, N);
    std::vector<Envelope> out(x_grid.size());
    parallel_for(static_cast<int>(x_grid.size()), [&](int i) {
        double x = x_grid[i];
        double g = green_value(G, x);
        auto seq = orthonormal_sequence_log(Jp, N, Complex(x, 0.0));
        Envelope env;
        env.min_val = std::numeric_limits<double>::infinity();
        env.max_val = 0.0;
        for (int n = N / 2; n <= N; ++n) {
            double v = std::exp(seq[n].log_abs - n * g);
            env.min_val = std::min(env.min_val, v);
            env.max_val = std::max(env.max_val, v);
        }
        out[i] = env;
    });
    return out;
}

CorollaryCheck corollary_pn_check(const std::vector<DiscretizedMeasure>& measures,
                                  const std::vector<JacobiCoeffs>& coeffs,
                                  const std::vector<double>& z_grid, int N)
{
    if (measures.size() != coeffs.size() || measures.empty())
        throw std::invalid_argument("corollary_pn_check: need matching measures and coefficients");
    CorollaryCheck chk;
    chk.z_grid = z_grid;
    // Phi_n approaches its limit with a smooth 1/n tail (trace-class
    // coefficient remainders) plus an exponentially small z^{2n} part, so
    // polynomial extrapolation in 1/n at geometric sample degrees converges.
    const int samples = 5;
    std::vector<int> ns;
    for (int j = samples; j >= 1; --j)
        ns.push_back(N - (j - 1) * (N / (2 * samples)));
    for (size_t m = 0; m < measures.size(); ++m) {
        CoveringL0 cov(measures[m].set);
        JostFunction u = build_jost(measures[m]);
        std::vector<Complex> phi_row;
        for (double z : z_grid) {
            if (!(z > 0.0 && z < 1.0))
                throw std::invalid_argument("corollary_pn_check: z grid must lie in (0,1)");
            Complex x = cov.cm(Complex(z, 0.0));
            auto seq = orthonormal_sequence_log(coeffs[m], N, x);
            Complex uz = u.eval(Complex(z, 0.0));
            std::vector<Complex> vals;
            for (int n : ns) {
                Complex pn = std::exp(seq[n].log_abs + n * std::log(z)) * seq[n].phase;
                vals.push_back(pn * coeffs[m].a(n) * (1.0 - z * z) / uz);
            }
            // Neville tableau in the variable 1/n, evaluated at 0
            std::vector<Complex> tab = vals;
            Complex prev_diag = tab.back();
            for (int lvl = 1; lvl < samples; ++lvl) {
                for (int i = 0; i + lvl < samples; ++i) {
                    double xi = 1.0 / ns[i], xj = 1.0 / ns[i + lvl];
                    tab[i] = (xi * tab[i + 1] - xj * tab[i]) / (xi - xj);
                }
                if (lvl == samples - 2)
                    prev_diag = tab[0];
            }
            if (std::abs(tab[0] - prev_diag) > 1e-7)
                chk.converged = false;
            phi_row.push_back(tab[0]);
        }
        chk.phi.push_back(std::move(phi_row));
    }
    for (size_t m = 1; m < chk.phi.size(); ++m)
        for (size_t i = 0; i < z_grid.size(); ++i)
            chk.max_cross_deviation =
                std::max(chk.max_cross_deviation, std::abs(chk.phi[m][i] - chk.phi[0][i]));
    return chk;
}

std::vector<double> green_ratio(const JacobiCoeffs& J, const TorusPoint& T,
                                const std::vector<int>& n_list, Complex x)
{
    // orbit of shifted divisors; G~_nn(J') = G_00 of the n-shifted point
    int n_max = *std::max_element(n_list.begin(), n_list.end());
    std::vector<Divisor> orbit;
    orbit.push_back(T.divisor);
    {
        TorusPoint cur = T;
        for (int k = 1; k <= n_max; ++k) {
            cur = torus_shift(cur);
            orbit.push_back(cur.divisor);
        }
    }
    std::vector<double> out;
    for (int n : n_list) {
        Complex Gn = greens_entry(J, n, n, x); // -<delta_n, (J-x)^{-1} delta_n>
        Complex ref = -diag_green(orbit[n], T.set(), x);
        out.push_back(std::abs(Gn / ref - 1.0));
    }
    return out;
}

L2Report l2_asymptotics(const DiscretizedMeasure& mu, const TorusPoint& Tfree,
                        const std::vector<int>& n_list)
{
    if (mu.set.num_gaps() != 0)
        throw std::invalid_argument("l2_asymptotics: single-band sets only");
    CoveringL0 cov(mu.set);
    JostFunction u_mu = build_jost(mu);
    JostFunction u_ref = build_jost(Tfree.mu_plus);
    double s = cov.s; // a'_n of the free-type point

    L2Report rep;
    rep.n_list = n_list;
    int n_max = *std::max_element(n_list.begin(), n_list.end());
    JacobiCoeffs Jmu = stieltjes_coeffs(mu, n_max + 62);

    const auto& band = mu.bands[0];
    Eigen::Index M = band.nodes.size();
    std::vector<Complex> ub_mu(M), ub_ref(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        ub_mu[i] = u_mu.boundary(band.theta[i]);
        ub_ref[i] = u_ref.boundary(band.theta[i]);
    }
    // P_n values at all nodes
    std::vector<std::vector<double>> P(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        auto seq = orthonormal_sequence_log(Jmu, n_max, Complex(band.nodes[i], 0.0));
        P[i].resize(n_max + 1);
        for (int n = 0; n <= n_max; ++n)
            P[i][n] = (seq[n].value()).real();
    }

    // P_n at the mass points by backward (minimal-solution) recurrence: the
    // forward recurrence at an eigenvalue is exponentially unstable, while
    // P_n is exactly the minimal solution there. Downward step from
    // x P_n = a_{n+1} P_{n+1} + b_{n+1} P_n + a_n P_{n-1}.
    std::vector<std::vector<double>> Pmass;
    for (const auto& [xk, wk] : mu.point_masses) {
        int top = n_max + 60;
        std::vector<double> q(top + 2, 0.0);
        q[top] = 1e-260;
        for (int n = top; n >= 1; --n) {
            q[n - 1] = ((xk - Jmu.b(n + 1)) * q[n] - Jmu.a(n + 1) * q[n + 1]) / Jmu.a(n);
            if (std::abs(q[n - 1]) > 1e260)
                for (int j = n - 1; j < top + 2; ++j)
                    q[j] *= 1e-200;
        }
        std::vector<double> Pn(n_max + 1);
        for (int n = 0; n <= n_max; ++n)
            Pn[n] = q[n] / q[0];
        Pmass.push_back(std::move(Pn));
    }

    for (int n : n_list) {
        double iac = 0.0;
        for (Eigen::Index i = 0; i < M; ++i) {
            // pairing of the lower-boundary Jost value with the upper-boundary
            // Jost solution; fixed against the Chebyshev closed forms
            Complex z = std::polar(1.0, band.theta[i]);
            Complex un1 = std::pow(z, n + 1) * ub_ref[i] / s;
            double model = std::imag(std::conj(ub_mu[i]) * un1);
            double diff = P[i][n] - model;
            iac += band.eff_weights[i] * diff * diff;
        }
        rep.ac.push_back(iac);
        double ising = 0.0;
        for (size_t k = 0; k < mu.point_masses.size(); ++k)
            ising += mu.point_masses[k].second * Pmass[k][n] * Pmass[k][n];
        rep.sing.push_back(ising);
    }
    return rep;
}

} // namespace szegolab
