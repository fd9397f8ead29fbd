#include "szegolab/algebra.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace szegolab {
namespace poly {

double eval(const Eigen::VectorXd& p, double x)
{
    double v = 0.0;
    for (Eigen::Index k = p.size() - 1; k >= 0; --k)
        v = v * x + p[k];
    return v;
}

Complex eval(const Eigen::VectorXd& p, Complex x)
{
    Complex v = 0.0;
    for (Eigen::Index k = p.size() - 1; k >= 0; --k)
        v = v * x + p[k];
    return v;
}

Eigen::VectorXd derivative(const Eigen::VectorXd& p)
{
    if (p.size() <= 1)
        return Eigen::VectorXd::Zero(1);
    Eigen::VectorXd d(p.size() - 1);
    for (Eigen::Index k = 1; k < p.size(); ++k)
        d[k - 1] = k * p[k];
    return d;
}

Eigen::VectorXd multiply(const Eigen::VectorXd& p, const Eigen::VectorXd& q)
{
    Eigen::VectorXd r = Eigen::VectorXd::Zero(p.size() + q.size() - 1);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        for (Eigen::Index j = 0; j < q.size(); ++j)
            r[i + j] += p[i] * q[j];
    return r;
}

Eigen::VectorXd from_roots(const std::vector<double>& roots)
{
    Eigen::VectorXd p(1);
    p[0] = 1.0;
    for (double r : roots) {
        Eigen::VectorXd lin(2);
        lin[0] = -r;
        lin[1] = 1.0;
        p = multiply(p, lin);
    }
    return p;
}

Eigen::VectorXd divide(const Eigen::VectorXd& p, const Eigen::VectorXd& d,
                       Eigen::VectorXd& r)
{
    Eigen::VectorXd dd = trim(d);
    if (dd.size() == 0 || dd[dd.size() - 1] == 0.0)
        throw std::invalid_argument("poly::divide: zero divisor");
    r = p;
    Eigen::Index nd = dd.size() - 1;
    if (p.size() <= nd) {
        Eigen::VectorXd q = Eigen::VectorXd::Zero(1);
        return q;
    }
    Eigen::VectorXd q = Eigen::VectorXd::Zero(p.size() - nd);
    for (Eigen::Index k = p.size() - 1; k >= nd; --k) {
        double f = r[k] / dd[nd];
        q[k - nd] = f;
        for (Eigen::Index j = 0; j <= nd; ++j)
            r[k - nd + j] -= f * dd[j];
    }
    r.conservativeResize(std::max<Eigen::Index>(nd, 1));
    return q;
}

Eigen::VectorXd trim(const Eigen::VectorXd& p, double tol)
{
    Eigen::Index n = p.size();
    while (n > 1 && std::abs(p[n - 1]) <= tol)
        --n;
    return p.head(n);
}

std::vector<double> real_roots_in(const Eigen::VectorXd& p_in, double lo, double hi)
{
    Eigen::VectorXd p = trim(p_in, 0.0);
    std::vector<double> out;
    Eigen::Index deg = p.size() - 1;
    if (deg == 0)
        return out;
    if (deg == 1) {
        double r = -p[0] / p[1];
        if (r >= lo && r <= hi)
            out.push_back(r);
        return out;
    }
    if (deg == 2) {
        double a = p[2], b = p[1], c = p[0];
        double disc = b * b - 4 * a * c;
        if (disc < 0)
            return out;
        double sq = std::sqrt(disc);
        // numerically stable quadratic roots
        double q = -0.5 * (b + (b >= 0 ? sq : -sq));
        double r1 = q / a;
        double r2 = (q != 0.0) ? c / q : r1;
        for (double r : {std::min(r1, r2), std::max(r1, r2)})
            if (r >= lo && r <= hi)
                out.push_back(r);
        return out;
    }
    // scan + bisection; fine for the low degrees that occur here
    const int grid = 2048;
    double prev_x = lo, prev_f = eval(p, lo);
    for (int i = 1; i <= grid; ++i) {
        double x = lo + (hi - lo) * i / grid;
        double f = eval(p, x);
        if (prev_f == 0.0)
            out.push_back(prev_x);
        else if (prev_f * f < 0.0)
            out.push_back(brent_root([&](double t) { return eval(p, t); }, prev_x, x));
        prev_x = x;
        prev_f = f;
    }
    if (prev_f == 0.0)
        out.push_back(prev_x);
    return out;
}

} // namespace poly

double TailSeries::coeff_at_power(int p) const
{
    int k = deg - p;
    if (k < 0 || k >= c.size())
        return 0.0;
    return c[k];
}

TailSeries tail_of_polynomial(const Eigen::VectorXd& p_in, int nterms)
{
    Eigen::VectorXd p = poly::trim(p_in, 0.0);
    TailSeries s;
    s.deg = static_cast<int>(p.size()) - 1;
    s.c = Eigen::VectorXd::Zero(nterms);
    for (int k = 0; k < nterms && k <= s.deg; ++k)
        s.c[k] = p[s.deg - k];
    return s;
}

TailSeries tail_sqrt(const TailSeries& s)
{
    if (s.deg % 2 != 0)
        throw std::invalid_argument("tail_sqrt: degree must be even");
    if (std::abs(s.c[0] - 1.0) > 1e-14)
        throw std::invalid_argument("tail_sqrt: series must be monic");
    TailSeries r;
    r.deg = s.deg / 2;
    int n = static_cast<int>(s.c.size());
    r.c = Eigen::VectorXd::Zero(n);
    r.c[0] = 1.0;
    for (int k = 1; k < n; ++k) {
        double acc = s.c[k];
        for (int j = 1; j < k; ++j)
            acc -= r.c[j] * r.c[k - j];
        r.c[k] = 0.5 * acc;
    }
    return r;
}

TailSeries tail_mul(const TailSeries& a, const TailSeries& b)
{
    TailSeries r;
    r.deg = a.deg + b.deg;
    int n = static_cast<int>(std::min(a.c.size(), b.c.size()));
    r.c = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n && j < b.c.size(); ++j)
            if (i < a.c.size())
                r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

TailSeries tail_inv(const TailSeries& s)
{
    if (s.c[0] == 0.0)
        throw std::invalid_argument("tail_inv: leading coefficient is zero");
    TailSeries r;
    r.deg = -s.deg;
    int n = static_cast<int>(s.c.size());
    r.c = Eigen::VectorXd::Zero(n);
    r.c[0] = 1.0 / s.c[0];
    for (int k = 1; k < n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j)
            acc += s.c[j] * r.c[k - j];
        r.c[k] = -acc / s.c[0];
    }
    return r;
}

Eigen::VectorXd tail_polynomial_part(const TailSeries& s)
{
    if (s.deg < 0)
        return Eigen::VectorXd::Zero(1);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(s.deg + 1);
    for (int k = 0; k <= s.deg && k < s.c.size(); ++k)
        p[s.deg - k] = s.c[k];
    return p;
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol, int maxit)
{
    double fa = f(a), fb = f(b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (fa * fb > 0.0)
        throw std::invalid_argument("brent_root: endpoints do not bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < maxit; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0)
            return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = m; e = m;
        } else {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                double r = fb / fc;
                double t = fa / fc;
                p = s * (2.0 * m * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0)
                q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = m; e = m;
            }
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a; fc = fa; e = b - a; d = e;
        }
    }
    return b;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol, int maxit)
{
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < maxit && (b - a) > xtol; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return (f1 < f2) ? x1 : x2;
}

} // namespace szegolab
