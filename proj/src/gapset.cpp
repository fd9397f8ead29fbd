#include "szegolab/gapset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace szegolab {

FiniteGapSet::FiniteGapSet(double a, double b, std::vector<std::pair<double, double>> g)
    : alpha(a), beta(b), gaps(std::move(g))
{
    std::sort(gaps.begin(), gaps.end());
    validate();
}

double FiniteGapSet::band_lo(int k) const
{
    return (k == 0) ? alpha : gaps[k - 1].second;
}

double FiniteGapSet::band_hi(int k) const
{
    return (k == num_gaps()) ? beta : gaps[k].first;
}

std::vector<double> FiniteGapSet::edges() const
{
    std::vector<double> e;
    e.push_back(alpha);
    for (const auto& g : gaps) {
        e.push_back(g.first);
        e.push_back(g.second);
    }
    e.push_back(beta);
    return e;
}

bool FiniteGapSet::contains(double t) const
{
    if (t < alpha || t > beta)
        return false;
    return !in_open_gap(t);
}

bool FiniteGapSet::in_open_gap(double t) const
{
    return gap_index(t) >= 0;
}

int FiniteGapSet::gap_index(double t) const
{
    for (int j = 0; j < num_gaps(); ++j)
        if (t > gaps[j].first && t < gaps[j].second)
            return j;
    return -1;
}

void FiniteGapSet::validate() const
{
    if (!(alpha < beta))
        throw std::invalid_argument("FiniteGapSet: alpha must be < beta");
    double prev = alpha;
    for (const auto& g : gaps) {
        if (!(g.first < g.second))
            throw std::invalid_argument("FiniteGapSet: empty or reversed gap");
        if (!(g.first > prev))
            throw std::invalid_argument("FiniteGapSet: gaps overlap or touch, or a band degenerates");
        if (!(g.second < beta))
            throw std::invalid_argument("FiniteGapSet: gap reaches beta");
        prev = g.second;
    }
}

// ---------------------------------------------------------------------------
// sqrt(R) branch bookkeeping.
//
// R(x) = prod (x - e_i) over all 2(ell+1) band edges. The branch cut of the
// principal per-factor product is (-inf, beta]; in the open upper half plane
// it coincides with the branch of sqrt(R) that is analytic on C \ E and
// ~ x^{ell+1} at +infinity. Values on (-inf, beta] \ E follow by the upper
// limit: with k = #edges > x, i^k collapses to a real sign since k is even
// off E, and to i*(real) on band interiors where k is odd.
// ---------------------------------------------------------------------------

static int edges_above(const FiniteGapSet& set, double x)
{
    int k = 0;
    for (double e : set.edges())
        if (e > x)
            ++k;
    return k;
}

Complex sqrt_R(const FiniteGapSet& set, Complex x)
{
    if (x.imag() < 0.0)
        return std::conj(sqrt_R(set, std::conj(x)));
    if (x.imag() == 0.0)
        return Complex(sqrt_R_real(set, x.real()), 0.0);
    Complex p = 1.0;
    for (double e : set.edges())
        p *= std::sqrt(x - e);
    return p;
}

double sqrt_R_real(const FiniteGapSet& set, double x)
{
    double m = 1.0;
    for (double e : set.edges()) {
        if (x == e)
            return 0.0;
        m *= std::abs(x - e);
    }
    m = std::sqrt(m);
    int k = edges_above(set, x);
    if (k % 2 != 0)
        throw std::invalid_argument("sqrt_R_real: point lies inside a band");
    return ((k / 2) % 2 == 0) ? m : -m;
}

double sqrt_R_band_imag(const FiniteGapSet& set, double t)
{
    double m = 1.0;
    for (double e : set.edges())
        m *= std::abs(t - e);
    m = std::sqrt(m);
    int k = edges_above(set, t);
    if (k % 2 == 0)
        throw std::invalid_argument("sqrt_R_band_imag: point is not in a band interior");
    return (((k - 1) / 2) % 2 == 0) ? m : -m;
}

// |R(t)| with the two factors belonging to [lo,hi] removed; smooth and
// positive on the closed interval.
static double rest_abs(const FiniteGapSet& set, double t, double lo, double hi)
{
    double m = 1.0;
    for (double e : set.edges()) {
        if (e == lo || e == hi)
            continue;
        m *= std::abs(t - e);
    }
    return m;
}

// ---------------------------------------------------------------------------
// build_green
// ---------------------------------------------------------------------------

static Eigen::VectorXd solve_Q(const FiniteGapSet& set, int order)
{
    const int ell = set.num_gaps();
    const double c = set.center();
    // centered monomial basis: Q(t) = (t-c)^ell + sum_k q[k] (t-c)^k
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ell, ell);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ell);
    QuadRule th = midpoint_theta(order);
    for (int j = 0; j < ell; ++j) {
        double a = set.gaps[j].first, b = set.gaps[j].second;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < th.nodes.size(); ++i) {
            double t = mid + half * std::cos(th.nodes[i]);
            double w = th.weights[i] / std::sqrt(rest_abs(set, t, a, b));
            double u = t - c;
            double up = 1.0;
            for (int k = 0; k < ell; ++k) {
                M(j, k) += w * up;
                up *= u;
            }
            rhs[j] -= w * up; // up == (t-c)^ell now
        }
    }
    Eigen::VectorXd q = ell > 0 ? M.fullPivLu().solve(rhs).eval() : Eigen::VectorXd();
    // expand back to ascending coefficients in x
    Eigen::VectorXd Q = Eigen::VectorXd::Zero(ell + 1);
    Eigen::VectorXd shift(2);
    shift << -c, 1.0; // (x - c)
    Eigen::VectorXd pw = Eigen::VectorXd::Ones(1);
    for (int k = 0; k <= ell; ++k) {
        double coef = (k == ell) ? 1.0 : q[k];
        for (Eigen::Index i = 0; i < pw.size(); ++i)
            Q[i] += coef * pw[i];
        if (k < ell)
            pw = poly::multiply(pw, shift);
    }
    return Q;
}

// integral of Q/sqrt(R) along the real segment from a band edge e to x with
// the substitution t = e + u^2 (x - e). The vanishing factor sqrt(t - e) is
// u*sqrt(x-e) exactly, so it is cancelled analytically instead of being
// recomputed from t (which loses half the digits near the edge).
static double edge_path_integral(const FiniteGapSet& set, const Eigen::VectorXd& Q,
                                 double e, double x, int order)
{
    const QuadRule& gl = gauss_legendre(order);
    // sign of sqrt(R) along the (edge-free) path interior
    double sgn = (sqrt_R_real(set, e + 0.5 * (x - e)) >= 0.0) ? 1.0 : -1.0;
    double pref = 2.0 * ((x >= e) ? 1.0 : -1.0) * std::sqrt(std::abs(x - e)) / sgn;
    double acc = 0.0;
    for (int i = 0; i < gl.nodes.size(); ++i) {
        double u = 0.5 * (gl.nodes[i] + 1.0);
        double w = 0.5 * gl.weights[i];
        double t = e + u * u * (x - e);
        double rest = 1.0;
        for (double ej : set.edges())
            if (ej != e)
                rest *= std::abs(t - ej);
        acc += w * pref * poly::eval(Q, t) / std::sqrt(rest);
    }
    return acc;
}

static Complex edge_path_integral_complex(const FiniteGapSet& set, const Eigen::VectorXd& Q,
                                          double e, Complex x, int order)
{
    const QuadRule& gl = gauss_legendre(order);
    Complex pref = 2.0 * std::sqrt(x - e);
    Complex acc = 0.0;
    for (int i = 0; i < gl.nodes.size(); ++i) {
        double u = 0.5 * (gl.nodes[i] + 1.0);
        double w = 0.5 * gl.weights[i];
        Complex t = e + u * u * (x - e);
        Complex rest = 1.0;
        for (double ej : set.edges())
            if (ej != e)
                rest *= std::sqrt(t - ej);
        acc += w * pref * poly::eval(Q, t) / rest;
    }
    return acc;
}

static double capacity_from_Q(const FiniteGapSet& set, const Eigen::VectorXd& Q, int order)
{
    const double c = set.center();
    const double X = set.beta + 2.5 * set.diameter();
    double gX = edge_path_integral(set, Q, set.beta, X, 2 * order);
    // tail: int_X^inf (Q/sqrt(R) - 1/(t-c)) dt via t = c + (X-c)/s
    const QuadRule& gl = gauss_legendre(2 * order);
    double tail = 0.0;
    for (int i = 0; i < gl.nodes.size(); ++i) {
        double s = 0.5 * (gl.nodes[i] + 1.0);
        double w = 0.5 * gl.weights[i];
        double t = c + (X - c) / s;
        double f = poly::eval(Q, t) / sqrt_R_real(set, t) - 1.0 / (t - c);
        tail += w * f * (X - c) / (s * s);
    }
    return std::exp(std::log(X - c) - gX - tail);
}

GreenFunction build_green(const FiniteGapSet& set, int quad_order)
{
    set.validate();
    if (quad_order < 16)
        throw std::invalid_argument("build_green: quad_order must be >= 16");
    GreenFunction G;
    G.set = set;
    G.quad_order = quad_order;
    G.Q = solve_Q(set, 4 * quad_order);
    if (!G.Q.allFinite())
        throw std::runtime_error("build_green: singular gap system (internal error)");

    const int ell = set.num_gaps();
    for (int j = 0; j < ell; ++j) {
        auto roots = poly::real_roots_in(G.Q, set.gaps[j].first, set.gaps[j].second);
        if (roots.size() != 1)
            throw std::runtime_error("build_green: expected one critical point per gap (internal error)");
        G.q_roots.push_back(roots[0]);
    }

    QuadRule th = midpoint_theta(quad_order);
    for (int k = 0; k < set.num_bands(); ++k) {
        double a = set.band_lo(k), b = set.band_hi(k);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        GreenFunction::BandRule rule;
        rule.theta = th.nodes;
        rule.nodes.resize(th.nodes.size());
        rule.eq_weights.resize(th.nodes.size());
        for (int i = 0; i < th.nodes.size(); ++i) {
            double t = mid + half * std::cos(th.nodes[i]);
            rule.nodes[i] = t;
            rule.eq_weights[i] = th.weights[i] * std::abs(poly::eval(G.Q, t)) /
                                 (std::numbers::pi * std::sqrt(rest_abs(set, t, a, b)));
        }
        rule.mass = rule.eq_weights.sum();
        G.band_rules.push_back(std::move(rule));
    }

    G.capacity = capacity_from_Q(set, G.Q, quad_order);
    return G;
}

// ---------------------------------------------------------------------------
// green_value
// ---------------------------------------------------------------------------

static double green_far_field(const GreenFunction& G, Complex x)
{
    double acc = 0.0;
    for (const auto& rule : G.band_rules)
        for (int i = 0; i < rule.nodes.size(); ++i)
            acc += rule.eq_weights[i] * std::log(std::abs(x - rule.nodes[i]));
    return acc - std::log(G.capacity);
}

double green_value(const GreenFunction& G, double x)
{
    return green_value(G, Complex(x, 0.0));
}

double green_value(const GreenFunction& G, Complex x)
{
    if (std::isnan(x.real()) || std::isnan(x.imag()))
        throw std::invalid_argument("green_value: NaN input");
    const FiniteGapSet& set = G.set;
    if (x.imag() == 0.0 && set.contains(x.real()))
        return 0.0;
    if (x.imag() < 0.0)
        x = std::conj(x);

    if (std::abs(x - Complex(set.center(), 0.0)) > 3.0 * set.diameter())
        return green_far_field(G, x);

    const int order = std::max(64, 2 * G.quad_order);
    if (x.imag() == 0.0) {
        double t = x.real();
        int j = set.gap_index(t);
        double e;
        if (j >= 0) {
            double a = set.gaps[j].first, b = set.gaps[j].second;
            e = (t - a < b - t) ? a : b;
        } else {
            e = (t > set.beta) ? set.beta : set.alpha;
        }
        double v = std::abs(edge_path_integral(set, G.Q, e, t, order));
        return v;
    }
    // straight segment from the nearest band edge; the open path stays in the
    // upper half plane where the principal-product branch of sqrt(R) is valid
    double best = std::numeric_limits<double>::infinity();
    double e = set.beta;
    for (double cand : set.edges()) {
        double d = std::abs(x - Complex(cand, 0.0));
        if (d < best) {
            best = d;
            e = cand;
        }
    }
    return std::abs(edge_path_integral_complex(set, G.Q, e, x, order).real());
}

// ---------------------------------------------------------------------------

double equilibrium_mass(const GreenFunction& G, int band_index)
{
    if (band_index < 0 || band_index >= G.set.num_bands())
        throw std::out_of_range("equilibrium_mass: band index");
    return G.band_rules[band_index].mass;
}

double equilibrium_mass(const GreenFunction& G, double lo, double hi)
{
    if (!(lo <= hi))
        throw std::invalid_argument("equilibrium_mass: empty interval");
    double total = 0.0;
    for (int k = 0; k < G.set.num_bands(); ++k) {
        double a = G.set.band_lo(k), b = G.set.band_hi(k);
        double l = std::max(a, lo), h = std::min(b, hi);
        if (l >= h)
            continue;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        // t decreases in theta: t = h corresponds to the smaller angle
        double th_lo = std::acos(std::clamp((h - mid) / half, -1.0, 1.0));
        double th_hi = std::acos(std::clamp((l - mid) / half, -1.0, 1.0));
        int n = std::max(32, G.quad_order);
        for (int i = 0; i < n; ++i) {
            double th = th_lo + (th_hi - th_lo) * (i + 0.5) / n;
            double t = mid + half * std::cos(th);
            total += (th_hi - th_lo) / n * std::abs(poly::eval(G.Q, t)) /
                     (std::numbers::pi * std::sqrt(rest_abs(G.set, t, a, b)));
        }
    }
    return total;
}

double pw_sum(const GreenFunction& G)
{
    double s = 0.0;
    for (double c : G.q_roots)
        s += green_value(G, c);
    return s;
}

double blaschke_sum(const GreenFunction& G, const std::vector<double>& points)
{
    double s = 0.0;
    for (double x : points) {
        if (G.set.contains(x))
            throw std::invalid_argument("blaschke_sum: point lies inside E");
        s += green_value(G, x);
    }
    return s;
}

} // namespace szegolab
