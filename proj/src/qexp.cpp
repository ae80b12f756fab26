#include "fdr/qexp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace fdr {

namespace {

constexpr double kCoeffTol = 1e-12;
constexpr double kRateTol = 1e-12;
constexpr double kRankTol = 1e-9;

double poly_eval(const std::vector<double>& c, double y) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + *it;
    return acc;
}

// factorials up to the largest degree product we ever need
double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

QuasiExponential::QuasiExponential(double constant, std::vector<QETerm> terms)
    : constant_(constant), terms_(std::move(terms)) {
    canonicalize();
}

QuasiExponential QuasiExponential::constant_fn(double c) { return QuasiExponential(c, {}); }

QuasiExponential QuasiExponential::exponential(double a, double scale) {
    return QuasiExponential(0.0, {QETerm{a, {scale}}});
}

QuasiExponential QuasiExponential::monomial_exp(double a, int k, double scale) {
    std::vector<double> c(static_cast<size_t>(k) + 1, 0.0);
    c.back() = scale;
    return QuasiExponential(0.0, {QETerm{a, std::move(c)}});
}

void QuasiExponential::canonicalize() {
    // merge terms with equal rates
    std::sort(terms_.begin(), terms_.end(),
              [](const QETerm& a, const QETerm& b) { return a.rate < b.rate; });
    std::vector<QETerm> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && std::abs(merged.back().rate - t.rate) <=
                                   kRateTol * std::max(1.0, std::abs(t.rate))) {
            auto& dst = merged.back().coeffs;
            if (t.coeffs.size() > dst.size()) dst.resize(t.coeffs.size(), 0.0);
            for (size_t k = 0; k < t.coeffs.size(); ++k) dst[k] += t.coeffs[k];
        } else {
            merged.push_back(std::move(t));
        }
    }
    // strip trailing (near-)zero coefficients, drop empty polynomials
    terms_.clear();
    for (auto& t : merged) {
        double scale = 1.0;
        for (double c : t.coeffs) scale = std::max(scale, std::abs(c));
        while (!t.coeffs.empty() && std::abs(t.coeffs.back()) <= kCoeffTol * scale)
            t.coeffs.pop_back();
        bool all_zero = true;
        for (double c : t.coeffs)
            if (std::abs(c) > kCoeffTol * scale) all_zero = false;
        if (!t.coeffs.empty() && !all_zero) terms_.push_back(std::move(t));
    }
}

double QuasiExponential::operator()(double y) const {
    double acc = constant_;
    for (const auto& t : terms_) acc += poly_eval(t.coeffs, y) * std::exp(-t.rate * y);
    return acc;
}

QuasiExponential QuasiExponential::derivative() const {
    std::vector<QETerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        // d/dy [p(y) e^{-a y}] = (p'(y) - a p(y)) e^{-a y}
        std::vector<double> c(t.coeffs.size(), 0.0);
        for (size_t k = 0; k < t.coeffs.size(); ++k) {
            c[k] -= t.rate * t.coeffs[k];
            if (k + 1 < t.coeffs.size()) c[k] += static_cast<double>(k + 1) * t.coeffs[k + 1];
        }
        out.push_back(QETerm{t.rate, std::move(c)});
    }
    return QuasiExponential(0.0, std::move(out));
}

QuasiExponential QuasiExponential::shifted(double s) const {
    if (s == 0.0) return *this;
    std::vector<QETerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        // p(y+s) e^{-a(y+s)} : expand p(y+s) binomially, fold e^{-a s} in
        const double damp = std::exp(-t.rate * s);
        std::vector<double> c(t.coeffs.size(), 0.0);
        for (size_t m = 0; m < t.coeffs.size(); ++m) {
            double binom = 1.0;  // C(m, k) s^{m-k}, walked over k
            // build s-powers from the top: C(m,k) s^{m-k}
            for (size_t k = 0; k <= m; ++k) {
                // C(m,k)
                double comb = 1.0;
                for (size_t j = 0; j < k; ++j)
                    comb = comb * static_cast<double>(m - j) / static_cast<double>(j + 1);
                c[k] += t.coeffs[m] * comb * std::pow(s, static_cast<double>(m - k)) * damp;
            }
            (void)binom;
        }
        out.push_back(QETerm{t.rate, std::move(c)});
    }
    return QuasiExponential(constant_, std::move(out));
}

QuasiExponential QuasiExponential::scaled(double c) const {
    std::vector<QETerm> out = terms_;
    for (auto& t : out)
        for (auto& x : t.coeffs) x *= c;
    return QuasiExponential(constant_ * c, std::move(out));
}

int QuasiExponential::max_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max<int>(d, static_cast<int>(t.coeffs.size()) - 1);
    return d;
}

bool QuasiExponential::in_h_alpha(double alpha) const {
    for (const auto& t : terms_)
        if (!(t.rate > alpha / 2.0)) return false;
    return true;
}

QuasiExponential operator+(const QuasiExponential& a, const QuasiExponential& b) {
    std::vector<QETerm> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return QuasiExponential(a.constant_ + b.constant_, std::move(terms));
}

QuasiExponential operator-(const QuasiExponential& a, const QuasiExponential& b) {
    return a + b.scaled(-1.0);
}

QuasiExponential operator*(double c, const QuasiExponential& h) { return h.scaled(c); }

double evaluate(const QuasiExponential& h, double y) { return h(y); }

QuasiExponential differentiate(const QuasiExponential& h) { return h.derivative(); }

double h_alpha_norm(const QuasiExponential& h, double alpha) {
    for (const auto& t : h.terms()) {
        if (!(t.rate > alpha / 2.0))
            throw MembershipError("h_alpha_norm: rate " + std::to_string(t.rate) +
                                  " <= alpha/2, curve lies outside the space");
    }
    const QuasiExponential hp = h.derivative();
    double integral = 0.0;
    for (const auto& tm : hp.terms()) {
        for (const auto& tl : hp.terms()) {
            const double b = tm.rate + tl.rate - alpha;
            // convolution of the two polynomials, integrated term by term
            for (size_t i = 0; i < tm.coeffs.size(); ++i) {
                for (size_t j = 0; j < tl.coeffs.size(); ++j) {
                    const int k = static_cast<int>(i + j);
                    integral += tm.coeffs[i] * tl.coeffs[j] * factorial(k) /
                                std::pow(b, static_cast<double>(k + 1));
                }
            }
        }
    }
    const double h0 = h(0.0);
    return std::sqrt(h0 * h0 + integral);
}

// ---------------------------------------------------------------------------
// Derivative closure via exact coefficient elimination.
//
// Every quasi-exponential lives in the finite feature space spanned by the
// constant and the monomials y^k e^{-a y} over the rates present. Closure
// reduces each derivative against the current basis in those coordinates;
// a nonzero residue, normalized to unit pivot, becomes a new basis element.
// ---------------------------------------------------------------------------

namespace {

struct FeatureKey {
    int rate_id;  // -1 for the constant feature
    int power;
    bool operator<(const FeatureKey& o) const {
        if (rate_id != o.rate_id) return rate_id < o.rate_id;
        return power < o.power;
    }
};

class FeatureSpace {
public:
    int rate_id(double rate) {
        for (size_t i = 0; i < rates_.size(); ++i)
            if (std::abs(rates_[i] - rate) <= kRateTol * std::max(1.0, std::abs(rate)))
                return static_cast<int>(i);
        rates_.push_back(rate);
        return static_cast<int>(rates_.size()) - 1;
    }

    int index(const FeatureKey& k) {
        auto it = index_.find(k);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(index_.size());
        index_.emplace(k, id);
        keys_.push_back(k);
        return id;
    }

    int size() const { return static_cast<int>(keys_.size()); }

    std::map<int, double> coords(const QuasiExponential& h) {
        std::map<int, double> c;
        if (h.constant() != 0.0) c[index({-1, 0})] = h.constant();
        for (const auto& t : h.terms()) {
            const int rid = rate_id(t.rate);
            for (size_t k = 0; k < t.coeffs.size(); ++k)
                if (t.coeffs[k] != 0.0) c[index({rid, static_cast<int>(k)})] = t.coeffs[k];
        }
        return c;
    }

    QuasiExponential reconstruct(const std::map<int, double>& c) const {
        double constant = 0.0;
        std::map<int, std::vector<double>> polys;
        for (const auto& [fi, v] : c) {
            const FeatureKey& k = keys_[static_cast<size_t>(fi)];
            if (k.rate_id < 0) {
                constant += v;
            } else {
                auto& p = polys[k.rate_id];
                if (static_cast<int>(p.size()) <= k.power) p.resize(k.power + 1, 0.0);
                p[k.power] += v;
            }
        }
        std::vector<QETerm> terms;
        for (auto& [rid, p] : polys) terms.push_back(QETerm{rates_[rid], std::move(p)});
        return QuasiExponential(constant, std::move(terms));
    }

private:
    std::vector<double> rates_;
    std::map<FeatureKey, int> index_;
    std::vector<FeatureKey> keys_;
};

double coord_scale(const std::map<int, double>& c) {
    double s = 0.0;
    for (const auto& [k, v] : c) s = std::max(s, std::abs(v));
    return s;
}

// Reduce `c` against pivoted rows (pivot feature -> row coords with that
// pivot normalized to 1). Returns the residue.
std::map<int, double> reduce(std::map<int, double> c,
                             const std::vector<std::pair<int, std::map<int, double>>>& rows) {
    for (const auto& [pivot, row] : rows) {
        auto it = c.find(pivot);
        if (it == c.end() || it->second == 0.0) continue;
        const double f = it->second;
        for (const auto& [k, v] : row) {
            c[k] -= f * v;
        }
        c.erase(pivot);  // eliminated exactly
    }
    // drop numerically-zero leftovers
    for (auto it = c.begin(); it != c.end();) {
        if (std::abs(it->second) <= 1e-13)
            it = c.erase(it);
        else
            ++it;
    }
    return c;
}

// grid-sampled Gram cross-check of linear independence (design tolerance 1e-9)
bool grid_independent(const std::vector<QuasiExponential>& fns) {
    std::vector<double> ys;
    for (double y = 0.0; y <= 10.0 + 1e-9; y += 0.25) ys.push_back(y);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(ys.size()),
                      static_cast<Eigen::Index>(fns.size()));
    for (size_t i = 0; i < ys.size(); ++i)
        for (size_t j = 0; j < fns.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fns[j](ys[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(kRankTol);
    return qr.rank() == static_cast<Eigen::Index>(fns.size());
}

}  // namespace

ClosureBasis closure(const std::vector<QuasiExponential>& spanning, double alpha) {
    if (spanning.empty()) throw DependenceError("closure: empty spanning set");
    for (const auto& v : spanning) {
        if (!v.in_h_alpha(alpha))
            throw MembershipError("closure: spanning function outside the alpha-space");
        if (v.is_zero()) throw DependenceError("closure: zero spanning function");
    }

    FeatureSpace fs;
    std::vector<QuasiExponential> basis;
    // rows of the elimination state: (pivot feature, coords normalized to unit pivot)
    std::vector<std::pair<int, std::map<int, double>>> rows;

    auto add_element = [&](const QuasiExponential& h, bool must_be_new) -> bool {
        auto c = fs.coords(h);
        const double scale = std::max(coord_scale(fs.coords(h)), 1.0);
        auto residue = reduce(std::move(c), rows);
        if (coord_scale(residue) <= kRankTol * scale) {
            if (must_be_new)
                throw DependenceError("closure: spanning functions are linearly dependent");
            return false;
        }
        // pivot = residual feature of largest magnitude; normalize it to 1
        int pivot = -1;
        double best = 0.0;
        for (const auto& [k, v] : residue)
            if (std::abs(v) > best) {
                best = std::abs(v);
                pivot = k;
            }
        const double pv = residue[pivot];
        for (auto& [k, v] : residue) v /= pv;
        basis.push_back(fs.reconstruct(residue).scaled(1.0));
        rows.emplace_back(pivot, residue);
        return true;
    };

    // the user-supplied functions enter verbatim; only the elimination state
    // keeps the normalized residues
    for (const auto& v : spanning) {
        auto c = fs.coords(v);
        const double scale = std::max(coord_scale(c), 1.0);
        auto residue = reduce(c, rows);
        if (coord_scale(residue) <= kRankTol * scale)
            throw DependenceError("closure: spanning functions are linearly dependent");
        int pivot = -1;
        double best = 0.0;
        for (const auto& [k, v2] : residue)
            if (std::abs(v2) > best) {
                best = std::abs(v2);
                pivot = k;
            }
        const double pv = residue[pivot];
        for (auto& [k, v2] : residue) v2 /= pv;
        basis.push_back(v);
        rows.emplace_back(pivot, residue);
    }
    if (!grid_independent(spanning))
        throw DependenceError("closure: grid Gram test reports rank deficiency");

    // breadth-first closure under differentiation
    for (size_t head = 0; head < basis.size(); ++head) {
        add_element(basis[head].derivative(), false);
        if (basis.size() > 256) throw DependenceError("closure: runaway dimension");
    }

    const int d = static_cast<int>(basis.size());

    // derivative matrix: solve coords(basis) * col_k = coords(basis[k]')
    std::vector<std::map<int, double>> bcoords(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) bcoords[static_cast<size_t>(j)] = fs.coords(basis[static_cast<size_t>(j)]);
    const int nf = fs.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nf, d);
    for (int j = 0; j < d; ++j)
        for (const auto& [k, v] : bcoords[static_cast<size_t>(j)]) m(k, j) = v;

    Eigen::MatrixXd matA(d, d);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m.transpose() * m);
    for (int k = 0; k < d; ++k) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
        for (const auto& [fi, v] : fs.coords(basis[static_cast<size_t>(k)].derivative()))
            rhs(fi) = v;
        matA.col(k) = lu.solve(m.transpose() * rhs);
        // snap exact zeros produced by the normal equations
        for (int j = 0; j < d; ++j)
            if (std::abs(matA(j, k)) < 1e-13) matA(j, k) = 0.0;
    }

    ClosureBasis cb;
    cb.basis = std::move(basis);
    cb.matA = std::move(matA);
    cb.origin_count = static_cast<int>(spanning.size());
    return cb;
}

double closure_residual(const ClosureBasis& cb, const std::vector<double>& y_grid) {
    const int d = cb.dim();
    std::vector<QuasiExponential> derivs;
    derivs.reserve(static_cast<size_t>(d));
    for (const auto& v : cb.basis) derivs.push_back(v.derivative());
    double worst = 0.0;
    for (double y : y_grid) {
        for (int k = 0; k < d; ++k) {
            double lhs = derivs[static_cast<size_t>(k)](y);
            double rhs = 0.0;
            for (int j = 0; j < d; ++j) rhs += cb.basis[static_cast<size_t>(j)](y) * cb.matA(j, k);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

}  // namespace fdr
