#ifndef FDR_VOLATILITY_HPP
#define FDR_VOLATILITY_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdr/functional.hpp"
#include "fdr/qexp.hpp"

namespace fdr {

/**
 * Factorized volatility: the j-th noise column acts on the curve as
 *
 *     sigma_j(h) = sum_{i=1..p} spanning[i] * phi[i][j](h).
 *
 * phi is a p x n array of bounded Lipschitz functionals.
 */
struct VolatilitySpec {
    std::vector<QuasiExponential> spanning;      // v_1..v_p
    std::vector<std::vector<Functional>> phi;    // p rows, n columns

    int p() const { return static_cast<int>(spanning.size()); }
    int n() const { return phi.empty() ? 0 : static_cast<int>(phi.front().size()); }

    /// All functional values at a curve, as a p x n matrix.
    template <class CurveAt>
    Eigen::MatrixXd phi_at(CurveAt&& curve_at) const {
        Eigen::MatrixXd m(p(), n());
        for (int i = 0; i < p(); ++i)
            for (int j = 0; j < n(); ++j) m(i, j) = phi[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(curve_at);
        return m;
    }

    /// Point value sigma_j(h)(y) for a curve callable.
    template <class CurveAt>
    double sigma_at(int j, double y, CurveAt&& curve_at) const {
        double acc = 0.0;
        for (int i = 0; i < p(); ++i)
            acc += spanning[static_cast<size_t>(i)](y) *
                   phi[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(curve_at);
        return acc;
    }

    /// True when every functional is a constant (the coefficient maps are
    /// then state-independent and the coordinate process is Gaussian).
    bool all_constant() const {
        for (const auto& row : phi)
            for (const auto& f : row)
                if (!f.is_constant()) return false;
        return true;
    }
};

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;   ///< worst observed ratio or residual
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;
    bool all_pass = true;

    const CheckResult* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
};

/**
 * Validates a volatility specification: spanning functions in the space
 * and linearly independent, declared bounds M and Lipschitz constants L
 * honored on probe inputs. Decay-at-infinity of the noise image is
 * reported as a warning, not a failure.
 *
 * With throw_on_fail, raises SpecError naming the first violated check.
 */
ValidationReport validate_spec(const VolatilitySpec& spec, double alpha,
                               bool throw_on_fail = true);

}  // namespace fdr

#endif  // FDR_VOLATILITY_HPP
