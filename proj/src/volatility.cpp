#include "fdr/volatility.hpp"

#include <cmath>
#include <random>

#include "fdr/errors.hpp"

namespace fdr {

namespace {

// deterministic probe curves: combinations over the span plus off-span
// exponential terms, swept over several magnitudes
std::vector<QuasiExponential> probe_curves(const VolatilitySpec& spec, double alpha,
                                           std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<QuasiExponential> probes;
    for (double scale : {0.5, 1.0, 10.0, 100.0, 1000.0}) {
        for (int rep = 0; rep < 4; ++rep) {
            QuasiExponential h = QuasiExponential::constant_fn(scale * unif(rng));
            for (const auto& v : spec.spanning) h = h + (scale * unif(rng)) * v;
            h = h + QuasiExponential::exponential(alpha / 2.0 + 0.3 + std::abs(unif(rng)),
                                                  scale * unif(rng));
            h = h + QuasiExponential::monomial_exp(alpha / 2.0 + 0.8, 1, scale * unif(rng));
            probes.push_back(h);
        }
    }
    return probes;
}

}  // namespace

ValidationReport validate_spec(const VolatilitySpec& spec, double alpha, bool throw_on_fail) {
    ValidationReport rep;
    auto push = [&](CheckResult c) {
        rep.all_pass = rep.all_pass && c.pass;
        rep.checks.push_back(std::move(c));
    };

    // shape of the functional array
    {
        CheckResult c{"shape", true, 0.0, ""};
        if (spec.spanning.empty()) {
            c.pass = false;
            c.detail = "empty spanning set";
        } else if (spec.phi.size() != spec.spanning.size()) {
            c.pass = false;
            c.detail = "phi rows != spanning count";
        } else {
            for (const auto& row : spec.phi)
                if (static_cast<int>(row.size()) != spec.n()) {
                    c.pass = false;
                    c.detail = "ragged phi rows";
                }
            if (spec.n() == 0) {
                c.pass = false;
                c.detail = "no noise columns";
            }
        }
        push(std::move(c));
    }
    if (!rep.all_pass) {
        if (throw_on_fail) throw SpecError("validate_spec: shape: " + rep.checks.back().detail);
        return rep;
    }

    // membership of the spanning functions
    {
        CheckResult c{"membership", true, 0.0, ""};
        for (size_t i = 0; i < spec.spanning.size(); ++i) {
            for (const auto& t : spec.spanning[i].terms()) {
                const double margin = t.rate - alpha / 2.0;
                c.worst = std::min(c.worst == 0.0 ? margin : c.worst, margin);
                if (!(margin > 0.0)) {
                    c.pass = false;
                    c.detail = "spanning[" + std::to_string(i) + "] rate " +
                               std::to_string(t.rate) + " <= alpha/2";
                }
            }
        }
        push(std::move(c));
    }

    // linear independence (exact coefficient rank + grid Gram inside closure)
    if (rep.all_pass) {
        CheckResult c{"independence", true, 0.0, ""};
        try {
            (void)closure(spec.spanning, alpha);
        } catch (const DependenceError& e) {
            c.pass = false;
            c.detail = e.what();
        }
        push(std::move(c));
    }

    // probe the declared bounds and Lipschitz constants
    if (rep.all_pass) {
        std::mt19937_64 rng(0x5eedf00dULL);
        auto probes = probe_curves(spec, alpha, rng);

        CheckResult cb{"bound", true, 0.0, ""};
        CheckResult cl{"lipschitz", true, 0.0, ""};
        for (int i = 0; i < spec.p(); ++i) {
            for (int j = 0; j < spec.n(); ++j) {
                const auto& f = spec.phi[static_cast<size_t>(i)][static_cast<size_t>(j)];
                for (const auto& h : probes) {
                    const double value = std::abs(f.eval([&](double y) { return h(y); }));
                    const double ratio = f.bound > 0.0 ? value / f.bound
                                                       : (value > 0.0 ? 1e30 : 0.0);
                    if (ratio > cb.worst) cb.worst = ratio;
                    if (ratio > 1.0 + 1e-9) {
                        cb.pass = false;
                        if (cb.detail.empty())
                            cb.detail = "phi[" + std::to_string(i) + "][" + std::to_string(j) +
                                        "] exceeds declared M";
                    }
                }
                if (f.is_constant()) continue;
                for (size_t a = 0; a + 1 < probes.size(); a += 2) {
                    const auto& h1 = probes[a];
                    for (const QuasiExponential& h2 :
                         {probes[a + 1], h1 + QuasiExponential::exponential(alpha + 0.5, 1e-4)}) {
                        const double dn = h_alpha_norm(h1 - h2, alpha);
                        if (dn <= 0.0) continue;
                        const double dv = std::abs(f.eval([&](double y) { return h1(y); }) -
                                                   f.eval([&](double y) { return h2(y); }));
                        const double ratio = f.lipschitz > 0.0 ? dv / (f.lipschitz * dn)
                                                               : (dv > 0.0 ? 1e30 : 0.0);
                        if (ratio > cl.worst) cl.worst = ratio;
                        if (ratio > 1.0 + 1e-9) {
                            cl.pass = false;
                            if (cl.detail.empty())
                                cl.detail = "phi[" + std::to_string(i) + "][" +
                                            std::to_string(j) + "] exceeds declared L";
                        }
                    }
                }
            }
        }
        push(std::move(cb));
        push(std::move(cl));
    }

    // decay of the noise image at infinity: reported, never fatal
    for (int i = 0; i < spec.p(); ++i) {
        bool row_active = false;
        for (int j = 0; j < spec.n(); ++j)
            if (!spec.phi[static_cast<size_t>(i)][static_cast<size_t>(j)].is_zero())
                row_active = true;
        if (row_active && spec.spanning[static_cast<size_t>(i)].constant() != 0.0)
            rep.warnings.push_back("spanning[" + std::to_string(i) +
                                   "] does not vanish at infinity; the noise image "
                                   "leaves the decaying subspace");
    }

    if (!rep.all_pass && throw_on_fail) {
        const CheckResult* f = rep.first_failure();
        throw SpecError("validate_spec: " + f->name +
                        (f->detail.empty() ? "" : (": " + f->detail)));
    }
    return rep;
}

}  // namespace fdr
