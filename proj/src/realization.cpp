#include "fdr/realization.hpp"

#include <cmath>

#include "fdr/errors.hpp"

namespace fdr {

Realization::Realization(ClosureBasis basis, QuasiExponential h0, double t0,
                         Eigen::VectorXd psi, VolatilitySpec spec, double alpha)
    : basis_(std::move(basis)),
      h0_(std::move(h0)),
      h0_deriv_(h0_.derivative()),
      t0_(t0),
      psi_(std::move(psi)),
      spec_(std::move(spec)),
      alpha_(alpha) {
    basis_derivs_.reserve(static_cast<size_t>(basis_.dim()));
    for (const auto& v : basis_.basis) basis_derivs_.push_back(v.derivative());
    point_basis_vals_.resize(static_cast<size_t>(spec_.p()));
    for (int i = 0; i < spec_.p(); ++i) {
        point_basis_vals_[static_cast<size_t>(i)].resize(static_cast<size_t>(spec_.n()));
        for (int j = 0; j < spec_.n(); ++j) {
            const auto& f = spec_.phi[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (f.kind == Functional::Kind::PointShape)
                point_basis_vals_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    basis_at(f.maturity);
        }
    }
}

Eigen::VectorXd Realization::basis_at(double y) const {
    Eigen::VectorXd v(dim());
    for (int k = 0; k < dim(); ++k) v(k) = basis_.basis[static_cast<size_t>(k)](y);
    return v;
}

Eigen::VectorXd Realization::basis_deriv_at(double y) const {
    Eigen::VectorXd v(dim());
    for (int k = 0; k < dim(); ++k) v(k) = basis_derivs_[static_cast<size_t>(k)](y);
    return v;
}

double Realization::curve_at(double t, double y, const Eigen::VectorXd& z) const {
    double acc = theta_at(t, y);
    for (int k = 0; k < dim(); ++k) acc += z(k) * basis_.basis[static_cast<size_t>(k)](y);
    return acc;
}

Eigen::MatrixXd Realization::kappa(double t, const Eigen::VectorXd& z) const {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dim(), noise_dim());
    for (int i = 0; i < spec_.p(); ++i) {
        for (int j = 0; j < spec_.n(); ++j) {
            const auto& f = spec_.phi[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (f.is_constant()) {
                k(i, j) = f.value;
            } else {
                double arg = theta_at(t, f.maturity);
                const auto& bv = point_basis_vals_[static_cast<size_t>(i)][static_cast<size_t>(j)];
                arg += bv.dot(z);
                k(i, j) = f.shape(arg);
            }
        }
    }
    return k;
}

Eigen::VectorXd Realization::beta(double t, const Eigen::VectorXd& z) const {
    return kappa(t, z) * psi_ + basis_.matA * z;
}

Eigen::VectorXd Realization::beta_q(double t, const Eigen::VectorXd& z) const {
    (void)t;
    return basis_.matA * z;
}

Realization build_realization(const VolatilitySpec& spec, const Eigen::VectorXd& psi,
                              const QuasiExponential& h0, double t0, double alpha) {
    validate_spec(spec, alpha, true);
    if (static_cast<int>(psi.size()) != spec.n())
        throw SpecError("build_realization: psi length " + std::to_string(psi.size()) +
                        " != noise dimension " + std::to_string(spec.n()));
    if (!h0.in_h_alpha(alpha))
        throw MembershipError("build_realization: initial curve outside the alpha-space");
    if (t0 < 0.0) throw SpecError("build_realization: t0 must be nonnegative");
    ClosureBasis cb = closure(spec.spanning, alpha);
    return Realization(std::move(cb), h0, t0, psi, spec, alpha);
}

InvarianceGrid InvarianceGrid::standard(int d, double z_scale) {
    InvarianceGrid g;
    for (int i = 0; i < 10; ++i) g.ts.push_back(2.0 * i / 9.0);
    static const int primes[] = {3, 7, 11, 13, 17, 19};
    for (int k = 0; k < 10; ++k) {
        Eigen::VectorXd z(d);
        for (int m = 0; m < d; ++m) {
            const int cell = (k * primes[m % 6] + m) % 10;
            z(m) = z_scale * (2.0 * cell / 9.0 - 1.0);
        }
        g.zs.push_back(z);
    }
    for (int i = 0; i < 50; ++i) g.ys.push_back(10.0 * i / 49.0);
    return g;
}

double InvarianceReport::max_residual() const {
    return std::max(drift_residual, std::max(sigma_span_residual, ode_residual));
}

namespace {

InvarianceReport check_invariance_impl(const Realization& r, const InvarianceGrid& grid,
                                       const CoefficientField& field) {
    InvarianceReport rep;
    const int d = r.dim();
    const int n = r.noise_dim();
    const int p = r.span_count();
    const Eigen::VectorXd& psi = r.psi();
    const double fd_step = 1e-5;

    // basis and basis-derivative values over the y grid
    Eigen::MatrixXd V(static_cast<Eigen::Index>(grid.ys.size()), d);
    Eigen::MatrixXd Vp(static_cast<Eigen::Index>(grid.ys.size()), d);
    for (size_t iy = 0; iy < grid.ys.size(); ++iy) {
        V.row(static_cast<Eigen::Index>(iy)) = r.basis_at(grid.ys[iy]).transpose();
        Vp.row(static_cast<Eigen::Index>(iy)) = r.basis_deriv_at(grid.ys[iy]).transpose();
    }

    const Eigen::VectorXd z0 = Eigen::VectorXd::Zero(d);
    for (double t : grid.ts) {
        // (i) drift consistency: the transport part cancels identically, so
        // the residual compares the risk premium against the projected drift
        // at z = 0.
        const Eigen::MatrixXd phi0 =
            r.spec().phi_at([&](double y) { return r.theta_at(t, y); });
        const Eigen::VectorXd w = phi0 * psi;  // p weights
        const Eigen::VectorXd b0 = field.beta(t, z0);
        for (size_t iy = 0; iy < grid.ys.size(); ++iy) {
            double lhs = 0.0;
            for (int i = 0; i < p; ++i) lhs += V(static_cast<Eigen::Index>(iy), i) * w(i);
            double rhs = 0.0;
            for (int i = 0; i < d; ++i) rhs += V(static_cast<Eigen::Index>(iy), i) * b0(i);
            // the built drift at z=0 also contains A*0 = 0
            rep.drift_residual = std::max(rep.drift_residual, std::abs(lhs - rhs));
        }

        for (const auto& z : grid.zs) {
            Eigen::VectorXd zz = z;
            if (zz.size() != d) continue;
            // (ii) volatility confined to the span
            const Eigen::MatrixXd k = field.kappa(t, zz);
            const Eigen::MatrixXd phi =
                r.spec().phi_at([&](double y) { return r.curve_at(t, y, zz); });
            for (int j = 0; j < n; ++j) {
                for (size_t iy = 0; iy < grid.ys.size(); ++iy) {
                    double sig = 0.0;
                    for (int i = 0; i < p; ++i)
                        sig += V(static_cast<Eigen::Index>(iy), i) * phi(i, j);
                    double span = 0.0;
                    for (int i = 0; i < d; ++i)
                        span += V(static_cast<Eigen::Index>(iy), i) * k(i, j);
                    rep.sigma_span_residual =
                        std::max(rep.sigma_span_residual, std::abs(sig - span));
                }
            }
            // (iii) basis ODEs with central finite differences in z
            for (int kdir = 0; kdir < d; ++kdir) {
                Eigen::VectorXd zp = zz, zm = zz;
                zp(kdir) += fd_step;
                zm(kdir) -= fd_step;
                const Eigen::VectorXd gp = field.beta(t, zp) - field.kappa(t, zp) * psi;
                const Eigen::VectorXd gm = field.beta(t, zm) - field.kappa(t, zm) * psi;
                const Eigen::VectorXd g = (gp - gm) / (2.0 * fd_step);
                for (size_t iy = 0; iy < grid.ys.size(); ++iy) {
                    double rhs = 0.0;
                    for (int i = 0; i < d; ++i) rhs += V(static_cast<Eigen::Index>(iy), i) * g(i);
                    rep.ode_residual = std::max(
                        rep.ode_residual,
                        std::abs(Vp(static_cast<Eigen::Index>(iy), kdir) - rhs));
                }
            }
        }
    }
    return rep;
}

}  // namespace

InvarianceReport check_invariance(const Realization& r, const InvarianceGrid& grid) {
    CoefficientField field;
    field.kappa = [&r](double t, const Eigen::VectorXd& z) { return r.kappa(t, z); };
    field.beta = [&r](double t, const Eigen::VectorXd& z) { return r.beta(t, z); };
    return check_invariance_impl(r, grid, field);
}

InvarianceReport check_invariance(const Realization& r, const CoefficientField& field,
                                  const InvarianceGrid& grid) {
    return check_invariance_impl(r, grid, field);
}

int truncate_spectrum(const CovSpectrum& spectrum, double eps) {
    const auto& lam = spectrum.eigenvalues;
    double total = 0.0;
    for (size_t i = 0; i < lam.size(); ++i) {
        if (lam[i] < 0.0) throw SpecError("truncate_spectrum: negative eigenvalue");
        if (i > 0 && lam[i] > lam[i - 1] + 1e-15)
            throw SpecError("truncate_spectrum: eigenvalues not nonincreasing");
        total += lam[i];
    }
    if (!(total > 0.0)) throw SpecError("truncate_spectrum: zero trace");
    double tail = total;
    for (size_t n = 1; n <= lam.size(); ++n) {
        tail -= lam[n - 1];
        if (tail <= eps * total) return static_cast<int>(n);
    }
    return static_cast<int>(lam.size());
}

}  // namespace fdr
