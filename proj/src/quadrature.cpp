#include "szegolab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace szegolab {

static QuadRule make_gauss_legendre(int n)
{
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Newton iteration from the Chebyshev-based initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p1 = 0.0; // P_n'(x) placeholder
        for (int it = 0; it < 100; ++it) {
            // evaluate P_n and P_n' at x by recurrence
            double p0 = 1.0, p = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2 * k - 1) * x * p - (k - 1) * p0) / k;
                p0 = p;
                p = pk;
            }
            p1 = n * (x * p - p0) / (x * x - 1.0);
            double dx = p / p1;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * p1 * p1);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

const QuadRule& gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

QuadRule gauss_legendre_on(int n, double a, double b)
{
    const QuadRule& base = gauss_legendre(n);
    QuadRule r;
    r.nodes = 0.5 * (a + b) + 0.5 * (b - a) * base.nodes;
    r.weights = 0.5 * (b - a) * base.weights;
    return r;
}

QuadRule midpoint_theta(int n)
{
    if (n < 1)
        throw std::invalid_argument("midpoint_theta: order must be >= 1");
    QuadRule r;
    r.nodes.resize(n);
    r.weights.setConstant(n, std::numbers::pi / n);
    for (int i = 0; i < n; ++i)
        r.nodes[i] = (i + 0.5) * std::numbers::pi / n;
    return r;
}

} // namespace szegolab
