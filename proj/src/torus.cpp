#include "szegolab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace szegolab {

void Divisor::normalize(const FiniteGapSet& set, double snap_tol)
{
    if (points.size() != static_cast<size_t>(set.num_gaps()))
        throw std::invalid_argument("Divisor: need exactly one point per gap");
    std::sort(points.begin(), points.end(),
              [](const Point& p, const Point& q) { return p.x < q.x; });
    for (int j = 0; j < set.num_gaps(); ++j) {
        auto& p = points[j];
        double a = set.gaps[j].first, b = set.gaps[j].second;
        double scale = std::max(1.0, b - a);
        if (p.x < a - 1e-9 * scale || p.x > b + 1e-9 * scale)
            throw std::invalid_argument("Divisor: point outside its closed gap");
        p.x = std::clamp(p.x, a, b);
        if (p.x - a <= snap_tol * scale) {
            p.x = a;
            p.eps = +1;
        } else if (b - p.x <= snap_tol * scale) {
            p.x = b;
            p.eps = +1;
        }
        if (p.eps != 1 && p.eps != -1)
            throw std::invalid_argument("Divisor: eps must be +1 or -1");
    }
}

double divisor_distance(const Divisor& a, const Divisor& b, const FiniteGapSet& set)
{
    if (a.points.size() != b.points.size())
        throw std::invalid_argument("divisor_distance: mismatched sizes");
    double d = 0.0;
    for (int j = 0; j < set.num_gaps(); ++j) {
        const auto& p = a.points[j];
        const auto& q = b.points[j];
        double lo = set.gaps[j].first, hi = set.gaps[j].second;
        double dj;
        bool p_edge = (p.x == lo || p.x == hi);
        bool q_edge = (q.x == lo || q.x == hi);
        if (p.eps == q.eps || p_edge || q_edge)
            dj = std::abs(p.x - q.x);
        else
            dj = std::min(std::abs(p.x - lo) + std::abs(q.x - lo),
                          std::abs(p.x - hi) + std::abs(q.x - hi));
        d = std::max(d, dj);
    }
    return d;
}

Complex diag_green(const Divisor& d, const FiniteGapSet& set, Complex x)
{
    Complex num = 1.0;
    for (const auto& p : d.points)
        num *= (x - p.x);
    return -num / sqrt_R(set, x);
}

double boundary_im_green(const Divisor& d, const FiniteGapSet& set, double t)
{
    for (double e : set.edges())
        if (t == e)
            throw std::invalid_argument("boundary_im_green: density is singular at band edges");
    double num = 1.0;
    for (const auto& p : d.points)
        num *= std::abs(t - p.x);
    double r = 1.0;
    for (double e : set.edges())
        r *= std::abs(t - e);
    return num / std::sqrt(r);
}

// ---------------------------------------------------------------------------
// build_torus_point
// ---------------------------------------------------------------------------

namespace {

// coefficient of x^power in a(x)*b(x), using only stored series terms
double tail_product_coeff(const TailSeries& a, const TailSeries& b, int power)
{
    double acc = 0.0;
    for (int k = 0; k < a.c.size(); ++k) {
        int p = a.deg - k;
        acc += a.c[k] * b.coeff_at_power(power - p);
    }
    return acc;
}

// Lagrange interpolant of degree <= n-1 through (xs, ys).
Eigen::VectorXd lagrange_poly(const std::vector<double>& xs, const std::vector<double>& ys)
{
    size_t n = xs.size();
    if (n == 0)
        return Eigen::VectorXd::Zero(1);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (size_t i = 0; i < n; ++i) {
        Eigen::VectorXd term(1);
        term[0] = 1.0;
        double denom = 1.0;
        for (size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            Eigen::VectorXd lin(2);
            lin << -xs[j], 1.0;
            term = poly::multiply(term, lin);
            denom *= (xs[i] - xs[j]);
        }
        acc.head(term.size()) += (ys[i] / denom) * term;
    }
    return acc;
}

} // namespace

TorusPoint build_torus_point(const Divisor& d_in, std::shared_ptr<const GreenFunction> green,
                             int quad_order)
{
    const FiniteGapSet& set = green->set;
    TorusPoint T;
    T.green = green;
    T.divisor = d_in;
    T.divisor.normalize(set);
    T.quad_order = quad_order;
    const int ell = set.num_gaps();

    std::vector<double> roots;
    for (const auto& p : T.divisor.points)
        roots.push_back(p.x);
    T.N = poly::from_roots(roots);

    // sqrt(R) expansion at infinity and its polynomial part P
    std::vector<double> edges = set.edges();
    Eigen::VectorXd R = poly::from_roots(edges);
    const int nterms = ell + 5;
    TailSeries sR = tail_sqrt(tail_of_polynomial(R, nterms));
    Eigen::VectorXd P = tail_polynomial_part(sR);

    // W interpolates eps_j sqrt(R)(x_j) + P(x_j) at divisor points
    std::vector<double> ys;
    for (const auto& p : T.divisor.points) {
        double sr = sqrt_R_real(set, p.x); // 0 at endpoints
        ys.push_back(p.eps * sr + poly::eval(P, p.x));
    }
    Eigen::VectorXd W = lagrange_poly(roots, ys);

    // V = -P + W
    Eigen::VectorXd V = -P;
    V.head(W.size()) += W;
    T.V = V;

    // series of H = sqrt(R)/N and of a0^2 m+ = (sqrt(R) + V)/(2N)
    TailSeries Ns = tail_of_polynomial(T.N, nterms);
    TailSeries Ninv = tail_inv(Ns);
    TailSeries H = tail_mul(sR, Ninv);
    T.A = H.coeff_at_power(0);
    T.rho_total = -H.coeff_at_power(-1);

    {
        // num = sqrt(R) + V as a single truncated series
        TailSeries num = sR;
        TailSeries Vt = tail_of_polynomial(V, nterms);
        for (int k = 0; k < num.c.size(); ++k) {
            int p = num.deg - k;
            num.c[k] += Vt.coeff_at_power(p);
        }
        T.a0_sq = -0.5 * tail_product_coeff(num, Ninv, -1);
    }
    if (!(T.a0_sq > 0.0))
        throw std::runtime_error("build_torus_point: nonpositive a0^2 (internal error)");

    // sigma_j = -sqrt(R)(x_j)/N'(x_j) at interior points
    Eigen::VectorXd Nd = poly::derivative(T.N);
    T.sigma.assign(ell, 0.0);
    for (int j = 0; j < ell; ++j) {
        const auto& p = T.divisor.points[j];
        if (p.x == set.gaps[j].first || p.x == set.gaps[j].second)
            continue;
        double s = -sqrt_R_real(set, p.x) / poly::eval(Nd, p.x);
        if (!(s > 0.0))
            throw std::runtime_error("build_torus_point: nonpositive Herglotz residue (internal error)");
        T.sigma[j] = s;
    }

    // N1 = (V^2 - R) / (4 a0^2 N), exactly divisible
    {
        Eigen::VectorXd V2 = poly::multiply(V, V);
        Eigen::VectorXd num = Eigen::VectorXd::Zero(std::max(V2.size(), R.size()));
        num.head(V2.size()) += V2;
        num.head(R.size()) -= R;
        num /= 4.0 * T.a0_sq;
        Eigen::VectorXd rem;
        Eigen::VectorXd N1 = poly::divide(num, T.N, rem);
        double rscale = rem.cwiseAbs().maxCoeff();
        if (rscale > 1e-8 * std::max(1.0, num.cwiseAbs().maxCoeff()))
            throw std::runtime_error("build_torus_point: shift polynomial division failed (internal error)");
        N1.conservativeResize(ell + 1);
        T.N1 = N1;
    }

    // measures
    const double a0sq = T.a0_sq;
    Eigen::VectorXd Npoly = T.N, Vpoly = T.V;
    FiniteGapSet setc = set;
    auto fplus = [setc, Npoly, a0sq](double t) {
        double shat = sqrt_R_band_imag(setc, t);
        return shat / (2.0 * std::numbers::pi * a0sq * poly::eval(Npoly, t));
    };
    auto fminus = [setc, Npoly, Vpoly](double t) {
        double shat = sqrt_R_band_imag(setc, t);
        double v = poly::eval(Vpoly, t);
        return 2.0 * poly::eval(Npoly, t) * shat / (std::numbers::pi * (v * v + shat * shat));
    };

    // m- poles live at the zeros of N1 (the shifted divisor); a zero at a
    // band edge turns the f- edge exponent negative exactly as a divisor
    // point at an edge does for f+
    std::vector<double> exp_plus, exp_minus;
    for (int k = 0; k < set.num_bands(); ++k) {
        for (double e : {set.band_lo(k), set.band_hi(k)}) {
            bool div_at_e = false;
            for (const auto& p : T.divisor.points)
                if (p.x == e)
                    div_at_e = true;
            exp_plus.push_back(div_at_e ? -0.5 : 0.5);
            double n1_at_e = poly::eval(T.N1, e);
            double scale = std::max(1.0, std::abs(e));
            exp_minus.push_back(std::abs(n1_at_e) < 1e-9 * scale ? -0.5 : 0.5);
        }
    }

    std::vector<std::pair<double, double>> masses_plus;
    for (int j = 0; j < ell; ++j)
        if (T.divisor.points[j].eps == +1 && T.sigma[j] > 0.0)
            masses_plus.emplace_back(T.divisor.points[j].x, T.sigma[j] / a0sq);
    T.mu_plus = discretize_measure(set, quad_order, fplus, masses_plus, exp_plus);

    // poles of m- sit at the N1 roots where sqrt(R)+V vanishes
    std::vector<std::pair<double, double>> masses_minus;
    {
        Eigen::VectorXd N1d = poly::derivative(T.N1);
        for (int j = 0; j < ell; ++j) {
            double a = set.gaps[j].first, b = set.gaps[j].second;
            double margin = 1e-9 * std::max(1.0, b - a);
            auto rts = poly::real_roots_in(T.N1, a - margin, b + margin);
            for (double y : rts) {
                y = std::clamp(y, a, b);
                if (y == a || y == b)
                    continue;
                double hplus = sqrt_R_real(setc, y) + poly::eval(Vpoly, y);
                double hminus = sqrt_R_real(setc, y) - poly::eval(Vpoly, y);
                if (std::abs(hminus) < std::abs(hplus)) {
                    double w = -hplus / (2.0 * a0sq * poly::eval(N1d, y));
                    if (!(w > 0.0))
                        throw std::runtime_error("build_torus_point: nonpositive J- mass (internal error)");
                    masses_minus.emplace_back(y, w);
                }
            }
        }
    }
    T.mu_minus = discretize_measure(set, quad_order, fminus, masses_minus, exp_minus);

    return T;
}

Complex m_plus_value(const TorusPoint& T, Complex x)
{
    return (sqrt_R(T.set(), x) + poly::eval(T.V, x)) / (2.0 * T.a0_sq * poly::eval(T.N, x));
}

Complex m_minus_value(const TorusPoint& T, Complex x)
{
    return (sqrt_R(T.set(), x) + poly::eval(T.V, x)) / (2.0 * T.a0_sq * poly::eval(T.N1, x));
}

JacobiCoeffs torus_coeffs(const TorusPoint& T, long lo, long hi)
{
    if (lo > hi)
        throw std::invalid_argument("torus_coeffs: empty window");
    long wlo = std::min<long>(lo, 0);
    long whi = std::max<long>(hi, 1);
    JacobiCoeffs right = stieltjes_coeffs(T.mu_plus, static_cast<int>(whi));
    JacobiCoeffs left = stieltjes_coeffs(T.mu_minus, static_cast<int>(1 - wlo));
    std::vector<std::pair<double, double>> table;
    for (long n = wlo; n <= whi; ++n) {
        double a, b;
        if (n >= 1) {
            a = right.a(n);
            b = right.b(n);
        } else if (n == 0) {
            a = std::sqrt(T.a0_sq);
            b = left.b(1);
        } else {
            a = left.a(-n);
            b = left.b(1 - n);
        }
        table.emplace_back(a, b);
    }
    return JacobiCoeffs::from_table_two_sided(wlo, std::move(table));
}

TorusPoint torus_shift(const TorusPoint& T)
{
    const FiniteGapSet& set = T.set();
    Divisor d1;
    for (int j = 0; j < set.num_gaps(); ++j) {
        double a = set.gaps[j].first, b = set.gaps[j].second;
        double margin = 1e-7 * std::max(1.0, b - a);
        auto rts = poly::real_roots_in(T.N1, a - margin, b + margin);
        if (rts.size() != 1)
            throw NumericalError("torus_shift: expected one shifted divisor point per gap");
        double y = std::clamp(rts[0], a, b);
        Divisor::Point p;
        p.x = y;
        double hplus = sqrt_R_real(set, y) + poly::eval(T.V, y);
        double hminus = sqrt_R_real(set, y) - poly::eval(T.V, y);
        p.eps = (std::abs(hplus) <= std::abs(hminus)) ? +1 : -1;
        d1.points.push_back(p);
    }
    return build_torus_point(d1, T.green, T.quad_order);
}

TorusPoint torus_reflect(const TorusPoint& T)
{
    Divisor dr = T.divisor;
    for (auto& p : dr.points)
        p.eps = -p.eps;
    return build_torus_point(dr, T.green, T.quad_order);
}

TorusPoint torus_shift_inverse(const TorusPoint& T)
{
    return torus_reflect(torus_shift(torus_reflect(T)));
}

double identity_m_og_G(const TorusPoint& T, Complex x)
{
    Complex mp = m_function(T.mu_plus, x);
    Complex mm = m_function(T.mu_minus, x);
    Complex g00 = diag_green(T.divisor, T.set(), x);
    TorusPoint T1 = torus_shift(T);
    Complex g11 = diag_green(T1.divisor, T.set(), x);
    return std::abs(mp * g00 - mm * g11);
}

double reflectionless_residual(const TorusPoint& T, double t)
{
    Complex mp = m_boundary(T.mu_plus, t);
    Complex mm = m_boundary(T.mu_minus, t);
    return std::abs(T.a0_sq * mp * std::conj(mm) - 1.0);
}

} // namespace szegolab
