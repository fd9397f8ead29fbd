#include "szegolab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace szegolab {

JacobiCoeffs perturb_coeffs(const JacobiCoeffs& base,
                            const std::function<std::pair<double, double>(long)>& decay,
                            int n_max)
{
    std::vector<std::pair<double, double>> table;
    table.reserve(n_max);
    for (long n = 1; n <= n_max; ++n) {
        auto [da, db] = decay(n);
        double a = base.a(n) + da;
        double b = base.b(n) + db;
        if (!(a > 0.0))
            throw std::invalid_argument("perturb_torus: perturbation makes a_n nonpositive");
        table.emplace_back(a, b);
    }
    return JacobiCoeffs::from_table(std::move(table));
}

JacobiCoeffs perturb_torus(const TorusPoint& T,
                           const std::function<std::pair<double, double>(long)>& decay,
                           int n_max)
{
    return perturb_coeffs(torus_coeffs(T, 1, n_max), decay, n_max);
}

// ---------------------------------------------------------------------------
// identification
// ---------------------------------------------------------------------------

namespace {

double uniform01(std::mt19937_64& rng)
{
    return (rng() >> 11) * 0x1.0p-53; // portable, unlike std distributions
}

double window_misfit(const JacobiCoeffs& J, long depth, int W, const Divisor& D,
                     std::shared_ptr<const GreenFunction> green, int fit_quad)
{
    TorusPoint T = build_torus_point(D, green, fit_quad);
    JacobiCoeffs C = stieltjes_coeffs(T.mu_plus, W);
    double acc = 0.0;
    for (int n = 1; n <= W; ++n)
        acc += std::abs(J.a(depth + n) - C.a(n)) + std::abs(J.b(depth + n) - C.b(n));
    return acc;
}

struct FitOutcome {
    Divisor divisor;
    double misfit = 0.0;
};

FitOutcome fit_at_depth(const JacobiCoeffs& J, long depth,
                        std::shared_ptr<const GreenFunction> green, int W,
                        const IdentifyOptions& opts, std::mt19937_64& rng)
{
    const FiniteGapSet& set = green->set;
    const int ell = set.num_gaps();
    JacobiCoeffs Jm = strip(J, depth);

    std::vector<Divisor> seeds;
    {
        Divisor d0;
        std::vector<bool> has_eig(ell, false);
        for (int j = 0; j < ell; ++j) {
            double a = set.gaps[j].first, b = set.gaps[j].second;
            auto eigs = stable_gap_eigs(Jm, opts.trunc_size, a, b, 1e-6);
            Divisor::Point p;
            if (!eigs.empty()) {
                p.x = eigs.front();
                p.eps = +1;
                has_eig[j] = true;
            } else {
                p.x = 0.5 * (a + b);
                p.eps = +1;
            }
            d0.points.push_back(p);
        }
        seeds.push_back(d0);
        Divisor d1 = d0;
        for (int j = 0; j < ell; ++j)
            if (!has_eig[j])
                d1.points[j].eps = -1;
        seeds.push_back(d1);
        for (int r = 0; r < opts.restarts; ++r) {
            Divisor dr;
            for (int j = 0; j < ell; ++j) {
                double a = set.gaps[j].first, b = set.gaps[j].second;
                Divisor::Point p;
                p.x = a + (b - a) * uniform01(rng);
                p.eps = (uniform01(rng) < 0.5) ? +1 : -1;
                dr.points.push_back(p);
            }
            seeds.push_back(dr);
        }
    }

    FitOutcome best;
    best.misfit = std::numeric_limits<double>::infinity();
    for (auto& seed : seeds) {
        Divisor cur = seed;
        cur.normalize(set);
        double cur_mis = window_misfit(J, depth, W, cur, green, opts.fit_quad);
        for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
            for (int j = 0; j < ell; ++j) {
                double a = set.gaps[j].first, b = set.gaps[j].second;
                double width = b - a, delta = 1e-7 * width;
                for (int eps : {+1, -1}) {
                    auto probe = [&](double x) {
                        Divisor d = cur;
                        d.points[j].x = x;
                        d.points[j].eps = eps;
                        return window_misfit(J, depth, W, d, green, opts.fit_quad);
                    };
                    double x = golden_min(probe, a + delta, b - delta, 1e-9 * width);
                    for (double cand : {x, a, b}) {
                        double v = probe(cand);
                        if (v < cur_mis) {
                            cur_mis = v;
                            cur.points[j].x = cand;
                            cur.points[j].eps = eps;
                            cur.normalize(set);
                        }
                    }
                }
            }
        }
        if (cur_mis < best.misfit) {
            best.misfit = cur_mis;
            best.divisor = cur;
        }
    }
    return best;
}

Divisor pull_back(const Divisor& D, long depth, std::shared_ptr<const GreenFunction> green,
                  int fit_quad, std::vector<Divisor>* history)
{
    TorusPoint T = build_torus_point(D, green, fit_quad);
    if (history)
        history->push_back(T.divisor);
    for (long k = 0; k < depth; ++k) {
        T = torus_shift_inverse(T);
        if (history)
            history->push_back(T.divisor);
    }
    return T.divisor;
}

} // namespace

IdentifyResult identify_torus_point(const JacobiCoeffs& J,
                                    std::shared_ptr<const GreenFunction> green,
                                    int depth, int window, const IdentifyOptions& opts)
{
    if (depth < 1)
        throw std::invalid_argument("identify_torus_point: depth must be >= 1");
    std::mt19937_64 rng(opts.seed);
    IdentifyResult res;

    FitOutcome fit_m = fit_at_depth(J, depth, green, window, opts, rng);
    res.divisor_at_depth = fit_m.divisor;
    res.misfit = fit_m.misfit;
    Divisor D0 = pull_back(fit_m.divisor, depth, green, opts.fit_quad, &res.fit_history);

    FitOutcome fit_2m = fit_at_depth(J, 2L * depth, green, window, opts, rng);
    Divisor D0b = pull_back(fit_2m.divisor, 2L * depth, green, opts.fit_quad, nullptr);

    res.depth_agreement = divisor_distance(D0, D0b, green->set);
    if (res.depth_agreement > opts.depth_tol)
        throw NumericalError("identify_torus_point: insufficient depth (divisor fits at depths m "
                             "and 2m disagree)");

    res.point = build_torus_point(D0, green, opts.final_quad);
    return res;
}

OrbitReport orbit_error(const JacobiCoeffs& J, const TorusPoint& Tp, int N)
{
    JacobiCoeffs C = torus_coeffs(Tp, 1, N);
    OrbitReport rep;
    rep.error_seq.resize(N);
    rep.partial_products.resize(N);
    rep.partial_sums.resize(N);
    rep.a.resize(N);
    rep.b.resize(N);
    rep.ap.resize(N);
    rep.bp.resize(N);
    double logprod = 0.0, bsum = 0.0, ell2 = 0.0;
    for (int n = 1; n <= N; ++n) {
        double a = J.a(n), b = J.b(n), ap = C.a(n), bp = C.b(n);
        rep.a[n - 1] = a;
        rep.b[n - 1] = b;
        rep.ap[n - 1] = ap;
        rep.bp[n - 1] = bp;
        rep.error_seq[n - 1] = std::abs(a - ap) + std::abs(b - bp);
        logprod += std::log(a / ap);
        bsum += b - bp;
        ell2 += (a - ap) * (a - ap) + (b - bp) * (b - bp);
        rep.partial_products[n - 1] = std::exp(logprod);
        rep.partial_sums[n - 1] = bsum;
    }
    rep.ell2_sum = ell2;
    return rep;
}

InterlacingResult interlacing_check(const JacobiCoeffs& J, int m, const GreenFunction& G,
                                    int trunc_size)
{
    InterlacingResult res;
    JacobiCoeffs Jm = strip(J, m);
    for (int j = 0; j < G.set.num_gaps(); ++j) {
        double a = G.set.gaps[j].first, b = G.set.gaps[j].second;
        auto eJ = stable_gap_eigs(J, trunc_size, a, b, 1e-7);
        auto eJm = stable_gap_eigs(Jm, trunc_size, a, b, 1e-7);
        res.counts_J.push_back(static_cast<int>(eJ.size()));
        res.counts_Jm.push_back(static_cast<int>(eJm.size()));
        for (size_t i = 0; i + 1 < eJ.size(); ++i) {
            int between = 0;
            for (double v : eJm)
                if (v > eJ[i] && v < eJ[i + 1])
                    ++between;
            res.max_between = std::max(res.max_between, between);
        }
    }
    res.ok = (res.max_between <= 1);
    return res;
}

std::vector<EntropyEntry> entropy_along_stripping(const JacobiCoeffs& J, const GreenFunction& G,
                                                  int depths, int cd_degree)
{
    std::vector<EntropyEntry> out;
    const int M0 = cd_degree, M1 = 2 * cd_degree;
    const std::vector<double> edges = G.set.edges();
    for (int d = 0; d <= depths; ++d) {
        JacobiCoeffs Jd = strip(J, d);
        Jd.ensure(1, M1 + 2);
        EntropyEntry entry;
        bool ok = true;

        // Christoffel reconstruction of r(t) = f_d(t)/rho_E(t) at every
        // equilibrium node, averaged over section sizes in (M0, 2M0] to damp
        // the oscillating term; two half-window averages feed the
        // reliability flag
        std::vector<Eigen::ArrayXd> r_lo(G.band_rules.size()), r_hi(G.band_rules.size());
        for (size_t band = 0; band < G.band_rules.size(); ++band) {
            const auto& rule = G.band_rules[band];
            r_lo[band].resize(rule.nodes.size());
            r_hi[band].resize(rule.nodes.size());
            for (int i = 0; i < rule.nodes.size(); ++i) {
                double t = rule.nodes[i];
                double S = 0.0, prev = 0.0, cur = 1.0;
                double avg_lo = 0.0, avg_hi = 0.0;
                for (int k = 0; k < M1; ++k) {
                    S += cur * cur;
                    int M = k + 1;
                    if (M > M0) {
                        if (M <= M0 + (M1 - M0) / 2)
                            avg_lo += (M + 0.5) / S;
                        else
                            avg_hi += (M + 0.5) / S;
                    }
                    double ak = (k == 0) ? 0.0 : Jd.a(k);
                    double next = ((t - Jd.b(k + 1)) * cur - ak * prev) / Jd.a(k + 1);
                    prev = cur;
                    cur = next;
                    if (S > 1e280) {
                        ok = false;
                        break;
                    }
                }
                int half = (M1 - M0) / 2;
                r_lo[band][i] = avg_lo / half;
                r_hi[band][i] = avg_hi / (M1 - M0 - half);
                if (!(r_lo[band][i] > 0.0) || !(r_hi[band][i] > 0.0))
                    ok = false;
            }
        }
        if (!ok) {
            entry.reliable = false;
            out.push_back(entry);
            continue;
        }

        // r(t) ~ C |t-e|^{q_e} near each edge with q in {0,1,2} depending on
        // the density's edge exponent; detect q from two interior nodes, then
        // integrate the log|t-e| parts exactly via int log|t-e| dmu_E = log cap
        std::vector<double> q_edge(edges.size(), 1.0);
        for (size_t band = 0; band < G.band_rules.size(); ++band) {
            const auto& rule = G.band_rules[band];
            int n = static_cast<int>(rule.nodes.size());
            // theta ascends, so t descends: front nodes sit near the upper edge
            auto detect = [&](int ia, int ib, double e) {
                double num = std::log(r_lo[band][ia] / r_lo[band][ib]);
                double den =
                    std::log(std::abs(rule.nodes[ia] - e) / std::abs(rule.nodes[ib] - e));
                return std::clamp(std::round(num / den), 0.0, 2.0);
            };
            double hi_edge = G.set.band_hi(static_cast<int>(band));
            double lo_edge = G.set.band_lo(static_cast<int>(band));
            for (size_t e = 0; e < edges.size(); ++e) {
                if (edges[e] == hi_edge)
                    q_edge[e] = detect(1, 5, hi_edge);
                else if (edges[e] == lo_edge)
                    q_edge[e] = detect(n - 2, n - 6, lo_edge);
            }
        }

        auto assemble = [&](const std::vector<Eigen::ArrayXd>& r) {
            double s = 0.0;
            for (size_t band = 0; band < G.band_rules.size(); ++band) {
                const auto& rule = G.band_rules[band];
                for (int i = 0; i < rule.nodes.size(); ++i) {
                    double smooth = std::log(r[band][i]);
                    for (size_t e = 0; e < edges.size(); ++e)
                        smooth -= q_edge[e] * std::log(std::abs(rule.nodes[i] - edges[e]));
                    s -= rule.eq_weights[i] * smooth;
                }
            }
            for (double q : q_edge)
                s -= q * std::log(G.capacity);
            return s;
        };
        double s_lo = assemble(r_lo);
        double s_hi = assemble(r_hi);
        entry.value = 0.5 * (s_lo + s_hi);
        entry.reliable = std::abs(s_lo - s_hi) < 5e-3;
        out.push_back(entry);
    }
    return out;
}

} // namespace szegolab
