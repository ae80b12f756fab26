#ifndef FDR_QEXP_HPP
#define FDR_QEXP_HPP

#include <vector>

#include <Eigen/Dense>

#include "fdr/errors.hpp"

namespace fdr {

/// One polynomial-times-exponential term:  (c0 + c1 y + ... + cm y^m) e^{-rate y}.
struct QETerm {
    double rate = 0.0;           ///< decay rate a > 0
    std::vector<double> coeffs;  ///< c0..cm, nonzero leading coefficient in canonical form
};

/**
 * Quasi-exponential curve
 *
 *     h(y) = constant + sum_k p_k(y) e^{-a_k y}
 *
 * with real pairwise-distinct rates a_k > 0. The class is closed under
 * differentiation and affine combination, which is what the realization
 * machinery relies on. Values are immutable after construction.
 */
class QuasiExponential {
public:
    QuasiExponential() = default;

    /// Canonicalizes on construction: merges equal rates, strips zero
    /// polynomials and trailing zero coefficients (tolerance 1e-12).
    QuasiExponential(double constant, std::vector<QETerm> terms);

    static QuasiExponential constant_fn(double c);
    /// scale * e^{-a y}
    static QuasiExponential exponential(double a, double scale = 1.0);
    /// scale * y^k e^{-a y}
    static QuasiExponential monomial_exp(double a, int k, double scale = 1.0);

    double constant() const { return constant_; }
    const std::vector<QETerm>& terms() const { return terms_; }

    /// Point evaluation h(y).
    double operator()(double y) const;

    /// Exact derivative h'. Constant part of the result is always zero.
    QuasiExponential derivative() const;

    /// h(. + s), expanded back into canonical form (s >= 0 keeps rates).
    QuasiExponential shifted(double s) const;

    QuasiExponential scaled(double c) const;

    bool is_zero() const { return constant_ == 0.0 && terms_.empty(); }
    int max_degree() const;

    /// All decay rates satisfy a > alpha/2, i.e. h lies in the state space.
    bool in_h_alpha(double alpha) const;

    friend QuasiExponential operator+(const QuasiExponential& a, const QuasiExponential& b);
    friend QuasiExponential operator-(const QuasiExponential& a, const QuasiExponential& b);
    friend QuasiExponential operator*(double c, const QuasiExponential& h);

private:
    double constant_ = 0.0;
    std::vector<QETerm> terms_;  // sorted by rate, canonical

    void canonicalize();
};

/// Point evaluation (free-function spelling of operator()).
double evaluate(const QuasiExponential& h, double y);

/// Exact derivative in canonical form.
QuasiExponential differentiate(const QuasiExponential& h);

/**
 * Norm (|h(0)|^2 + int_0^inf e^{alpha y} |h'(y)|^2 dy)^{1/2}, evaluated in
 * closed form via int_0^inf y^k e^{-b y} dy = k!/b^{k+1}.
 *
 * Throws MembershipError when some rate a <= alpha/2 (divergent integral).
 */
double h_alpha_norm(const QuasiExponential& h, double alpha);

/**
 * Basis of the smallest derivative-closed space containing the spanning
 * functions. The first origin_count entries are the inputs themselves;
 * the rest complete the closure. matA stores the derivative action
 * column-wise:  v_k' = sum_j basis[j] * matA(j, k).
 */
struct ClosureBasis {
    std::vector<QuasiExponential> basis;
    Eigen::MatrixXd matA;
    int origin_count = 0;

    int dim() const { return static_cast<int>(basis.size()); }
};

/**
 * Computes the derivative closure of linearly independent spanning
 * functions, all members of the alpha-space.
 *
 * Throws DependenceError when the inputs are linearly dependent and
 * MembershipError when one of them is outside the space.
 */
ClosureBasis closure(const std::vector<QuasiExponential>& spanning, double alpha);

/// Max over a y-grid of |v_k'(y) - sum_j v_j(y) matA(j,k)|, all k.
double closure_residual(const ClosureBasis& cb, const std::vector<double>& y_grid);

}  // namespace fdr

#endif  // FDR_QEXP_HPP
