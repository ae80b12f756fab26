#ifndef FDR_REALIZATION_HPP
#define FDR_REALIZATION_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fdr/qexp.hpp"
#include "fdr/volatility.hpp"

namespace fdr {

/**
 * Finite-dimensional realization of the curve dynamics
 *
 *     f_t(y) = h0(y + t0 + t) + sum_i Z^i_t v_i(y),
 *
 * where v_1..v_d is the derivative closure of the volatility span and Z
 * solves dZ = beta(t,Z) dt + kappa(t,Z) dW under the market measure.
 * Instances are immutable and safe to share across threads.
 */
class Realization {
public:
    Realization(ClosureBasis basis, QuasiExponential h0, double t0, Eigen::VectorXd psi,
                VolatilitySpec spec, double alpha);

    int dim() const { return basis_.dim(); }                       // d
    int noise_dim() const { return static_cast<int>(psi_.size()); } // n
    int span_count() const { return basis_.origin_count; }          // p

    const ClosureBasis& basis() const { return basis_; }
    const Eigen::MatrixXd& matA() const { return basis_.matA; }
    const QuasiExponential& h0() const { return h0_; }
    double t0() const { return t0_; }
    const Eigen::VectorXd& psi() const { return psi_; }
    const VolatilitySpec& spec() const { return spec_; }
    double alpha() const { return alpha_; }

    /// theta(t)(y) = h0(y + t0 + t)
    double theta_at(double t, double y) const { return h0_(y + t0_ + t); }
    /// d/dy theta(t)(y)
    double theta_deriv_at(double t, double y) const { return h0_deriv_(y + t0_ + t); }

    /// Basis values v_1..v_d at y.
    Eigen::VectorXd basis_at(double y) const;
    /// Basis derivatives v_1'..v_d' at y.
    Eigen::VectorXd basis_deriv_at(double y) const;

    /// Curve value f(y) for coordinates z at time t.
    double curve_at(double t, double y, const Eigen::VectorXd& z) const;

    /// Diffusion coefficient (d x n). Rows beyond the span count are zero.
    Eigen::MatrixXd kappa(double t, const Eigen::VectorXd& z) const;

    /// Market-measure drift beta(t,z) = kappa(t,z) psi + A z.
    Eigen::VectorXd beta(double t, const Eigen::VectorXd& z) const;

    /// Risk-neutral drift beta - kappa psi (= A z for built realizations).
    Eigen::VectorXd beta_q(double t, const Eigen::VectorXd& z) const;

    /// Coefficient maps are state/time-constant and the drift affine, so
    /// the coordinate process is an exact Gaussian OU process.
    bool gaussian_constant() const { return spec_.all_constant(); }

private:
    ClosureBasis basis_;
    QuasiExponential h0_;
    QuasiExponential h0_deriv_;
    double t0_;
    Eigen::VectorXd psi_;
    VolatilitySpec spec_;
    double alpha_;
    std::vector<QuasiExponential> basis_derivs_;
    // cached v_k(y*) per point-shape functional, curve evaluation in z
    // then needs only the shifted initial curve
    std::vector<std::vector<Eigen::VectorXd>> point_basis_vals_;  // [i][j] -> d-vector
};

/**
 * Builds the realization for a validated spec: closure of the span,
 * kappa from the functionals (zero rows beyond the span) and the affine
 * drift correction from the derivative matrix.
 */
Realization build_realization(const VolatilitySpec& spec, const Eigen::VectorXd& psi,
                              const QuasiExponential& h0, double t0, double alpha);

/// Externally supplied coefficient maps for invariance checking.
struct CoefficientField {
    std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> kappa;
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> beta;
};

struct InvarianceGrid {
    std::vector<double> ts;
    std::vector<Eigen::VectorXd> zs;
    std::vector<double> ys;

    /// 10 x 10 x 50 default lattice over t in [0,2], z in [-scale,scale]^d,
    /// y in [0,10].
    static InvarianceGrid standard(int d, double z_scale = 1.0);
};

struct InvarianceReport {
    double drift_residual = 0.0;      ///< consistency of the drift projection
    double sigma_span_residual = 0.0; ///< volatility confined to the span
    double ode_residual = 0.0;        ///< basis derivative equations
    double max_residual() const;
};

/// Residuals of the invariance characterization for the built coefficients.
InvarianceReport check_invariance(const Realization& r, const InvarianceGrid& grid);

/// Same, with kappa/beta supplied directly (the realization provides the
/// basis, the parametrization and the volatility).
InvarianceReport check_invariance(const Realization& r, const CoefficientField& field,
                                  const InvarianceGrid& grid);

/// Finite covariance spectrum, nonincreasing and nonnegative.
struct CovSpectrum {
    std::vector<double> eigenvalues;
};

/// Smallest n with sum_{i>n} lambda_i <= eps * sum_i lambda_i.
int truncate_spectrum(const CovSpectrum& spectrum, double eps);

}  // namespace fdr

#endif  // FDR_REALIZATION_HPP
