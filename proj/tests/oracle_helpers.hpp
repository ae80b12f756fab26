#ifndef FDR_TESTS_ORACLE_HELPERS_HPP
#define FDR_TESTS_ORACLE_HELPERS_HPP

// Independent numerical oracles used by the test suites. Nothing here may
// call into the code paths under test: quadrature, finite differences and
// closed-form reference statistics only.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// adaptive Simpson on [a,b]
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 24);
}

// int_0^inf f, truncated where the integrand is declared negligible
inline double integrate_halfline(const std::function<double(double)>& f, double y_max,
                                 double tol = 1e-12) {
    return integrate(f, 0.0, y_max, tol);
}

// central finite difference
inline double fd_derivative(const std::function<double(double)>& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;     // unbiased sample variance
    double se_mean = 0.0; // standard error of the mean
    size_t n = 0;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar mv;
    mv.n = xs.size();
    if (xs.empty()) return mv;
    double s = 0.0;
    for (double x : xs) s += x;
    mv.mean = s / static_cast<double>(xs.size());
    double q = 0.0;
    for (double x : xs) q += (x - mv.mean) * (x - mv.mean);
    mv.var = xs.size() > 1 ? q / static_cast<double>(xs.size() - 1) : 0.0;
    mv.se_mean = std::sqrt(mv.var / static_cast<double>(xs.size()));
    return mv;
}

// Ornstein-Uhlenbeck dX = (b - a X) dt + s dW closed forms
inline double ou_mean(double x0, double a, double b, double s, double t) {
    (void)s;
    if (a == 0.0) return x0 + b * t;
    const double m_inf = b / a;
    return m_inf + (x0 - m_inf) * std::exp(-a * t);
}

inline double ou_var(double a, double s, double t) {
    if (a == 0.0) return s * s * t;
    return s * s / (2.0 * a) * (1.0 - std::exp(-2.0 * a * t));
}

}  // namespace oracle

#endif  // FDR_TESTS_ORACLE_HELPERS_HPP
