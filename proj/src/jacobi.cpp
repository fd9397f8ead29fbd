#include "szegolab/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace szegolab {

// ---------------------------------------------------------------------------
// JacobiCoeffs
// ---------------------------------------------------------------------------

JacobiCoeffs JacobiCoeffs::from_rule(Side side, Rule rule)
{
    JacobiCoeffs J;
    J.side_ = side;
    J.rule_ = std::move(rule);
    return J;
}

JacobiCoeffs JacobiCoeffs::from_table(std::vector<std::pair<double, double>> table)
{
    JacobiCoeffs J;
    J.side_ = Side::OneSided;
    J.fwd_ = std::move(table);
    for (const auto& [a, b] : J.fwd_) {
        J.bound_a_ = std::max(J.bound_a_, std::abs(a));
        J.bound_b_ = std::max(J.bound_b_, std::abs(b));
    }
    return J;
}

JacobiCoeffs JacobiCoeffs::from_table_two_sided(long lo, std::vector<std::pair<double, double>> table)
{
    JacobiCoeffs J;
    J.side_ = Side::TwoSided;
    long n = lo;
    for (auto& e : table) {
        if (n >= 1)
            J.fwd_.push_back(e);
        else
            J.bwd_.resize(std::max<size_t>(J.bwd_.size(), static_cast<size_t>(-n) + 1)),
            J.bwd_[static_cast<size_t>(-n)] = e;
        J.bound_a_ = std::max(J.bound_a_, std::abs(e.first));
        J.bound_b_ = std::max(J.bound_b_, std::abs(e.second));
        ++n;
    }
    // two-sided tables must cover a contiguous range including 0 and 1
    if (lo > 0)
        throw std::invalid_argument("from_table_two_sided: table must start at n <= 0");
    return J;
}

JacobiCoeffs JacobiCoeffs::free_matrix()
{
    return from_rule(Side::OneSided, [](long) { return std::make_pair(1.0, 0.0); });
}

const std::pair<double, double>& JacobiCoeffs::entry(long n) const
{
    if (side_ == Side::OneSided && n < 1)
        throw std::out_of_range("JacobiCoeffs: one-sided index must be >= 1");
    auto& vec = (n >= 1) ? fwd_ : bwd_;
    size_t idx = (n >= 1) ? static_cast<size_t>(n - 1) : static_cast<size_t>(-n);
    if (idx >= vec.size()) {
        if (!rule_)
            throw std::out_of_range("JacobiCoeffs: index beyond materialized table");
        size_t old = vec.size();
        vec.resize(idx + 1);
        for (size_t i = old; i <= idx; ++i) {
            long k = (n >= 1) ? static_cast<long>(i + 1) : -static_cast<long>(i);
            vec[i] = rule_(k);
            if (!(vec[i].first > 0.0))
                throw std::invalid_argument("JacobiCoeffs: rule produced a_n <= 0");
            bound_a_ = std::max(bound_a_, std::abs(vec[i].first));
            bound_b_ = std::max(bound_b_, std::abs(vec[i].second));
        }
    }
    return vec[idx];
}

double JacobiCoeffs::a(long n) const { return entry(n).first; }
double JacobiCoeffs::b(long n) const { return entry(n).second; }

void JacobiCoeffs::ensure(long lo, long hi) const
{
    if (side_ == Side::OneSided)
        lo = std::max(lo, 1L);
    entry(hi);
    if (lo < 1 && side_ == Side::TwoSided)
        entry(lo);
}

JacobiCoeffs strip(const JacobiCoeffs& J, long m)
{
    if (J.side() != JacobiCoeffs::Side::OneSided)
        throw std::invalid_argument("strip: one-sided matrices only");
    if (m < 0)
        throw std::invalid_argument("strip: m must be >= 0");
    auto base = std::make_shared<JacobiCoeffs>(J);
    return JacobiCoeffs::from_rule(JacobiCoeffs::Side::OneSided,
        [base, m](long n) { return std::make_pair(base->a(n + m), base->b(n + m)); });
}

// ---------------------------------------------------------------------------
// DiscretizedMeasure
// ---------------------------------------------------------------------------

double DiscretizedMeasure::total_mass() const
{
    double s = 0.0;
    for (const auto& band : bands)
        s += band.eff_weights.sum();
    for (const auto& [x, w] : point_masses)
        s += w;
    return s;
}

int DiscretizedMeasure::support_size() const
{
    int n = static_cast<int>(point_masses.size());
    for (const auto& band : bands)
        n += static_cast<int>(band.nodes.size());
    return n;
}

double DiscretizedMeasure::node_spacing_near(double t) const
{
    // spacing of the node pair nearest to t
    double best_dist = std::numeric_limits<double>::infinity();
    double spacing = 0.0;
    for (const auto& band : bands) {
        for (int i = 0; i + 1 < band.nodes.size(); ++i) {
            double mid = 0.5 * (band.nodes[i] + band.nodes[i + 1]);
            double d = std::abs(mid - t);
            if (d < best_dist) {
                best_dist = d;
                spacing = std::abs(band.nodes[i] - band.nodes[i + 1]);
            }
        }
    }
    return spacing;
}

double DiscretizedMeasure::dist_to_support(double x) const
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& band : bands)
        for (int i = 0; i < band.nodes.size(); ++i)
            best = std::min(best, std::abs(x - band.nodes[i]));
    for (const auto& [xk, w] : point_masses)
        best = std::min(best, std::abs(x - xk));
    return best;
}

DiscretizedMeasure discretize_measure(const FiniteGapSet& set, int nodes_per_band,
                                      const std::function<double(double)>& density,
                                      std::vector<std::pair<double, double>> masses,
                                      std::vector<double> exponents)
{
    set.validate();
    if (nodes_per_band < 8)
        throw std::invalid_argument("discretize_measure: need at least 8 nodes per band");
    DiscretizedMeasure mu;
    mu.set = set;
    mu.density_rule = density;
    if (!exponents.empty() && exponents.size() != static_cast<size_t>(2 * set.num_bands()))
        throw std::invalid_argument("discretize_measure: wrong number of edge exponents");
    QuadRule th = midpoint_theta(nodes_per_band);
    for (int k = 0; k < set.num_bands(); ++k) {
        double a = set.band_lo(k), b = set.band_hi(k);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double pa = exponents.empty() ? 0.5 : exponents[2 * k];
        double pb = exponents.empty() ? 0.5 : exponents[2 * k + 1];
        DiscretizedMeasure::Band band;
        band.nodes.resize(nodes_per_band);
        band.theta.resize(nodes_per_band);
        band.geom_weights.resize(nodes_per_band);
        band.f_values.resize(nodes_per_band);
        if (pa == 0.0 && pb == 0.0) {
            band.family = DiscretizedMeasure::NodeFamily::GaussLegendre;
            QuadRule gl = gauss_legendre_on(nodes_per_band, a, b);
            for (int i = 0; i < nodes_per_band; ++i) {
                // keep nodes ascending in theta (descending in t) like the trig family
                band.nodes[i] = gl.nodes[nodes_per_band - 1 - i];
                band.geom_weights[i] = gl.weights[nodes_per_band - 1 - i];
                band.theta[i] = std::acos(std::clamp((band.nodes[i] - mid) / half, -1.0, 1.0));
            }
        } else {
            band.family = DiscretizedMeasure::NodeFamily::ThetaMidpoint;
            band.theta = th.nodes;
            for (int i = 0; i < nodes_per_band; ++i) {
                band.nodes[i] = mid + half * std::cos(th.nodes[i]);
                band.geom_weights[i] = th.weights[i] * half * std::sin(th.nodes[i]);
            }
        }
        for (int i = 0; i < nodes_per_band; ++i) {
            band.f_values[i] = density ? density(band.nodes[i]) : 0.0;
            if (band.f_values[i] < 0.0)
                throw std::invalid_argument("discretize_measure: negative density");
        }
        band.eff_weights = band.geom_weights * band.f_values;
        mu.bands.push_back(std::move(band));
    }
    for (const auto& [x, w] : masses) {
        if (set.contains(x))
            throw std::invalid_argument("discretize_measure: point mass inside E");
        if (!(w > 0.0))
            throw std::invalid_argument("discretize_measure: point mass weight must be > 0");
    }
    mu.point_masses = std::move(masses);
    if (exponents.empty())
        mu.edge_exponents.assign(2 * set.num_bands(), 0.5);
    else {
        if (exponents.size() != static_cast<size_t>(2 * set.num_bands()))
            throw std::invalid_argument("discretize_measure: wrong number of edge exponents");
        mu.edge_exponents = std::move(exponents);
    }
    return mu;
}

static void require_single_band(const FiniteGapSet& set, const char* who)
{
    if (set.num_gaps() != 0)
        throw std::invalid_argument(std::string(who) + ": single-band set required");
}

DiscretizedMeasure chebyshev_second_kind_measure(const FiniteGapSet& set, int nodes)
{
    require_single_band(set, "chebyshev_second_kind_measure");
    double c = set.center(), s = set.diameter() / 4.0;
    double al = set.alpha, be = set.beta;
    auto f = [c, s, al, be](double t) {
        return std::sqrt(std::max(0.0, (be - t) * (t - al))) / (2.0 * std::numbers::pi * s * s);
    };
    return discretize_measure(set, nodes, f, {}, {0.5, 0.5});
}

DiscretizedMeasure chebyshev_first_kind_measure(const FiniteGapSet& set, int nodes)
{
    require_single_band(set, "chebyshev_first_kind_measure");
    double al = set.alpha, be = set.beta;
    auto f = [al, be](double t) {
        return 1.0 / (std::numbers::pi * std::sqrt(std::max(1e-300, (be - t) * (t - al))));
    };
    return discretize_measure(set, nodes, f, {}, {-0.5, -0.5});
}

DiscretizedMeasure uniform_measure(const FiniteGapSet& set, int nodes)
{
    require_single_band(set, "uniform_measure");
    double len = set.diameter();
    return discretize_measure(set, nodes, [len](double) { return 1.0 / len; }, {}, {0.0, 0.0});
}

DiscretizedMeasure with_point_mass(const DiscretizedMeasure& mu, double x, double w)
{
    if (mu.set.contains(x))
        throw std::invalid_argument("with_point_mass: point inside E");
    DiscretizedMeasure out = mu;
    double scale = 1.0 / (mu.total_mass() + w);
    for (auto& band : out.bands) {
        band.f_values *= scale;
        band.eff_weights *= scale;
    }
    for (auto& pm : out.point_masses)
        pm.second *= scale;
    out.point_masses.emplace_back(x, w * scale);
    if (out.density_rule) {
        auto base = mu.density_rule;
        out.density_rule = [base, scale](double t) { return scale * base(t); };
    }
    std::sort(out.point_masses.begin(), out.point_masses.end());
    return out;
}

// ---------------------------------------------------------------------------
// orthonormal polynomials
// ---------------------------------------------------------------------------

Complex orthonormal_eval(const JacobiCoeffs& J, int n, Complex x)
{
    Complex prev = 0.0, cur = 1.0;
    for (int k = 0; k < n; ++k) {
        double ak = (k == 0) ? 0.0 : J.a(k);
        Complex next = ((x - J.b(k + 1)) * cur - ak * prev) / J.a(k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<ScaledValue> orthonormal_sequence_log(const JacobiCoeffs& J, int n, Complex x)
{
    std::vector<ScaledValue> out;
    out.reserve(n + 1);
    Complex prev = 0.0, cur = 1.0;
    double logscale = 0.0;
    auto push = [&](Complex v) {
        double m = std::abs(v);
        ScaledValue sv;
        if (m == 0.0) {
            sv.log_abs = -std::numeric_limits<double>::infinity();
            sv.phase = 1.0;
        } else {
            sv.log_abs = logscale + std::log(m);
            sv.phase = v / m;
        }
        out.push_back(sv);
    };
    push(cur);
    for (int k = 0; k < n; ++k) {
        double ak = (k == 0) ? 0.0 : J.a(k);
        Complex next = ((x - J.b(k + 1)) * cur - ak * prev) / J.a(k + 1);
        prev = cur;
        cur = next;
        double m = std::max(std::abs(cur), std::abs(prev));
        if (m > 1e120) {
            prev /= m;
            cur /= m;
            logscale += std::log(m);
        }
        push(cur);
    }
    return out;
}

ScaledValue orthonormal_eval_log(const JacobiCoeffs& J, int n, Complex x)
{
    return orthonormal_sequence_log(J, n, x).back();
}

// ---------------------------------------------------------------------------
// Lanczos with full reorthogonalization
// ---------------------------------------------------------------------------

JacobiCoeffs stieltjes_coeffs(const DiscretizedMeasure& mu, int N)
{
    int M = mu.support_size();
    if (N > M / 2)
        throw std::invalid_argument(
            "stieltjes_coeffs: N exceeds half the support size; increase quad_order");

    Eigen::VectorXd t(M), w(M);
    int idx = 0;
    for (const auto& band : mu.bands)
        for (int i = 0; i < band.nodes.size(); ++i, ++idx) {
            t[idx] = band.nodes[i];
            w[idx] = band.eff_weights[i];
        }
    for (const auto& [x, mass] : mu.point_masses) {
        t[idx] = x;
        w[idx] = mass;
        ++idx;
    }

    auto dot = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return (u.array() * v.array() * w.array()).sum();
    };

    Eigen::MatrixXd basis(M, N + 1);
    Eigen::VectorXd q = Eigen::VectorXd::Ones(M);
    double n0 = std::sqrt(dot(q, q));
    if (!(n0 > 0))
        throw std::invalid_argument("stieltjes_coeffs: zero measure");
    q /= n0;
    basis.col(0) = q;

    std::vector<std::pair<double, double>> table;
    table.reserve(N);
    Eigen::VectorXd qprev = Eigen::VectorXd::Zero(M);
    double aprev = 0.0;
    for (int k = 1; k <= N; ++k) {
        Eigen::VectorXd u = t.array() * q.array();
        double bk = dot(u, q);
        u -= bk * q;
        if (k > 1)
            u -= aprev * qprev;
        // two reorthogonalization passes against everything computed so far
        for (int pass = 0; pass < 2; ++pass) {
            Eigen::VectorXd coefs = basis.leftCols(k).transpose() * (u.array() * w.array()).matrix();
            u -= basis.leftCols(k) * coefs;
        }
        double ak = std::sqrt(dot(u, u));
        if (!(ak > 1e-14 * (1.0 + std::abs(bk))))
            throw NumericalError("stieltjes_coeffs: measure support exhausted (a_k ~ 0); increase quad_order");
        qprev = q;
        q = u / ak;
        basis.col(k) = q;
        aprev = ak;
        table.emplace_back(ak, bk);
    }
    return JacobiCoeffs::from_table(std::move(table));
}

// ---------------------------------------------------------------------------
// m-function
// ---------------------------------------------------------------------------

Complex m_function(const DiscretizedMeasure& mu, Complex x, bool* accuracy_warning)
{
    if (x.imag() == 0.0 && mu.dist_to_support(x.real()) == 0.0)
        throw std::invalid_argument("m_function: evaluation point hits the support");
    if (accuracy_warning) {
        double dist = std::hypot(x.imag(), mu.dist_to_support(x.real()));
        *accuracy_warning = dist < mu.node_spacing_near(x.real());
    }
    Complex acc = 0.0;
    for (const auto& band : mu.bands)
        for (int i = 0; i < band.nodes.size(); ++i)
            acc += band.eff_weights[i] / (band.nodes[i] - x);
    for (const auto& [xk, wk] : mu.point_masses)
        acc += wk / (xk - x);
    return acc;
}

Complex m_boundary(const DiscretizedMeasure& mu, double t)
{
    if (!mu.density_rule)
        throw std::invalid_argument("m_boundary: measure carries no density rule");
    int band_of_t = -1;
    for (int k = 0; k < mu.set.num_bands(); ++k)
        if (t > mu.set.band_lo(k) && t < mu.set.band_hi(k))
            band_of_t = k;
    if (band_of_t < 0)
        throw std::invalid_argument("m_boundary: t must lie in a band interior");

    double ft = mu.density_rule(t);
    double pv = 0.0;
    for (int k = 0; k < mu.set.num_bands(); ++k) {
        const auto& band = mu.bands[k];
        if (k == band_of_t) {
            double a = mu.set.band_lo(k), b = mu.set.band_hi(k);
            if (band.family == DiscretizedMeasure::NodeFamily::ThetaMidpoint) {
                // subtract the Chebyshev bump S(t') = w(t')/w(t), which keeps
                // the trig integrand analytic; PV int S/(t'-t) dt' = pi(c-t)/w(t)
                double w_t = std::sqrt((b - t) * (t - a));
                double c = 0.5 * (a + b);
                for (int i = 0; i < band.nodes.size(); ++i) {
                    double tp = band.nodes[i];
                    double S = std::sqrt((b - tp) * (tp - a)) / w_t;
                    pv += band.geom_weights[i] * (band.f_values[i] - ft * S) / (tp - t);
                }
                pv += ft * std::numbers::pi * (c - t) / w_t;
            } else {
                for (int i = 0; i < band.nodes.size(); ++i)
                    pv += band.geom_weights[i] * (band.f_values[i] - ft) / (band.nodes[i] - t);
                pv += ft * std::log((b - t) / (t - a));
            }
        } else {
            for (int i = 0; i < band.nodes.size(); ++i)
                pv += band.eff_weights[i] / (band.nodes[i] - t);
        }
    }
    for (const auto& [xk, wk] : mu.point_masses)
        pv += wk / (xk - t);
    return Complex(pv, std::numbers::pi * ft);
}

// ---------------------------------------------------------------------------
// truncations and resolvents
// ---------------------------------------------------------------------------

static void truncation_range(const JacobiCoeffs& J, int N, long& lo, long& hi)
{
    if (J.side() == JacobiCoeffs::Side::OneSided) {
        lo = 1;
        hi = N;
    } else {
        lo = -(N / 2);
        hi = lo + N - 1;
    }
}

std::vector<double> truncation_eigs(const JacobiCoeffs& J, int N,
                                    double window_lo, double window_hi)
{
    if (N < 2)
        throw std::invalid_argument("truncation_eigs: N must be >= 2");
    long lo, hi;
    truncation_range(J, N, lo, hi);
    Eigen::VectorXd diag(N), sub(N - 1);
    for (long n = lo; n <= hi; ++n) {
        diag[n - lo] = J.b(n);
        if (n < hi)
            sub[n - lo] = J.a(n);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<double> out;
    for (int i = 0; i < N; ++i) {
        double v = es.eigenvalues()[i];
        if (v > window_lo && v < window_hi)
            out.push_back(v);
    }
    return out;
}

std::vector<double> stable_gap_eigs(const JacobiCoeffs& J, int N,
                                    double window_lo, double window_hi, double tol)
{
    auto e1 = truncation_eigs(J, N, window_lo, window_hi);
    auto e2 = truncation_eigs(J, N + 7, window_lo, window_hi);
    std::vector<double> out;
    for (double v : e1) {
        for (double u : e2)
            if (std::abs(u - v) < tol) {
                out.push_back(0.5 * (u + v));
                break;
            }
    }
    return out;
}

// Tridiagonal solve with partial pivoting; lower[i] couples row i to i-1,
// upper[i] couples to i+1. Pivoting introduces one extra superdiagonal.
static Eigen::VectorXcd tridiag_solve(Eigen::VectorXcd lower, Eigen::VectorXcd diag,
                                      Eigen::VectorXcd upper, Eigen::VectorXcd rhs)
{
    const Eigen::Index n = diag.size();
    Eigen::VectorXcd fill = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (std::abs(diag[i]) < std::abs(lower[i + 1])) {
            std::swap(diag[i], lower[i + 1]);
            Complex tmp = upper[i];
            upper[i] = diag[i + 1];
            diag[i + 1] = tmp;
            tmp = fill[i];
            fill[i] = upper[i + 1];
            upper[i + 1] = tmp;
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (diag[i] == Complex(0.0, 0.0))
            throw NumericalError("tridiag_solve: zero pivot");
        Complex m = lower[i + 1] / diag[i];
        diag[i + 1] -= m * upper[i];
        upper[i + 1] -= m * fill[i];
        rhs[i + 1] -= m * rhs[i];
    }
    Eigen::VectorXcd y(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        Complex acc = rhs[i];
        if (i + 1 < n)
            acc -= upper[i] * y[i + 1];
        if (i + 2 < n)
            acc -= fill[i] * y[i + 2];
        y[i] = acc / diag[i];
    }
    return y;
}

Complex greens_entry(const JacobiCoeffs& J, long n, long m, Complex x)
{
    const bool one_sided = (J.side() == JacobiCoeffs::Side::OneSided);
    if (one_sided && (n < 1 || m < 1))
        throw std::invalid_argument("greens_entry: one-sided indices start at 1");
    long reach = std::max(std::abs(n), std::abs(m));
    int M = static_cast<int>(std::max<long>(256, 4 * reach));
    Complex prev = 0.0;
    for (int iter = 0; iter < 12; ++iter) {
        long lo = one_sided ? 1 : -M;
        long hi = one_sided ? M : M;
        Eigen::Index len = hi - lo + 1;
        Eigen::VectorXcd lower(len), diag(len), upper(len), rhs = Eigen::VectorXcd::Zero(len);
        for (long k = lo; k <= hi; ++k) {
            Eigen::Index i = k - lo;
            diag[i] = J.b(k) - x;
            lower[i] = (k > lo) ? Complex(J.a(k - 1)) : Complex(0.0);
            upper[i] = (k < hi) ? Complex(J.a(k)) : Complex(0.0);
        }
        rhs[m - lo] = 1.0;
        Eigen::VectorXcd y = tridiag_solve(lower, diag, upper, rhs);
        Complex G = -y[n - lo];
        if (iter > 0 && std::abs(G - prev) < 1e-12 * std::max(1.0, std::abs(G)))
            return G;
        prev = G;
        M *= 2;
        if (M > (1 << 18))
            throw NumericalError("greens_entry: truncation tail did not stabilize; "
                                 "x may be too close to the spectrum");
    }
    return prev;
}

Complex weyl_solution(const JacobiCoeffs& J, long n, Complex x)
{
    if (J.side() != JacobiCoeffs::Side::OneSided)
        throw std::invalid_argument("weyl_solution: one-sided matrices only");
    if (n < 1)
        throw std::invalid_argument("weyl_solution: n must be >= 1");
    return greens_entry(J, n, 1, x);
}

} // namespace szegolab
