#ifndef FDR_FUNCTIONAL_HPP
#define FDR_FUNCTIONAL_HPP

#include <algorithm>
#include <cmath>
#include <string>

namespace fdr {

/// Bounded Lipschitz scalar maps applied to a single point value of the
/// curve. The catalog is fixed; parameters select the member.
enum class ShapeKind { IdentityClip, Logistic, AffineClip };

struct Shape {
    ShapeKind kind = ShapeKind::IdentityClip;
    // IdentityClip: clamp(u, -p1, p1)
    // Logistic:     p1 * tanh(p2 * (u - p3))
    // AffineClip:   clamp(p1 * u + p2, -p3, p3)
    double p1 = 1.0, p2 = 0.0, p3 = 0.0;

    double operator()(double u) const {
        switch (kind) {
            case ShapeKind::IdentityClip:
                return std::clamp(u, -p1, p1);
            case ShapeKind::Logistic:
                return p1 * std::tanh(p2 * (u - p3));
            case ShapeKind::AffineClip:
                return std::clamp(p1 * u + p2, -p3, p3);
        }
        return 0.0;
    }

    /// Lipschitz constant of the scalar map itself.
    double scalar_lipschitz() const {
        switch (kind) {
            case ShapeKind::IdentityClip:
                return 1.0;
            case ShapeKind::Logistic:
                return std::abs(p1 * p2);
            case ShapeKind::AffineClip:
                return std::abs(p1);
        }
        return 0.0;
    }

    /// Uniform bound of the scalar map.
    double scalar_bound() const {
        switch (kind) {
            case ShapeKind::IdentityClip:
                return std::abs(p1);
            case ShapeKind::Logistic:
                return std::abs(p1);
            case ShapeKind::AffineClip:
                return std::abs(p3);
        }
        return 0.0;
    }
};

/**
 * Scalar functional of the curve. Either a constant, or a bounded
 * Lipschitz shape of one point evaluation h(maturity). Evaluation
 * depends on the curve only through that point value, which keeps the
 * coefficient maps closed-form functions of the coordinates.
 */
struct Functional {
    enum class Kind { Constant, PointShape };

    Kind kind = Kind::Constant;
    double value = 0.0;    ///< Constant payload
    double maturity = 0.0; ///< PointShape evaluation point y*
    Shape shape;           ///< PointShape map
    double bound = 0.0;    ///< declared M
    double lipschitz = 0.0;///< declared L (w.r.t. the curve norm)

    static Functional constant(double v) {
        Functional f;
        f.kind = Kind::Constant;
        f.value = v;
        f.bound = std::abs(v);
        f.lipschitz = 0.0;
        return f;
    }

    static Functional point_shape(double y_star, Shape s, double declared_M,
                                  double declared_L) {
        Functional f;
        f.kind = Kind::PointShape;
        f.maturity = y_star;
        f.shape = s;
        f.bound = declared_M;
        f.lipschitz = declared_L;
        return f;
    }

    bool is_constant() const { return kind == Kind::Constant; }
    bool is_zero() const { return kind == Kind::Constant && value == 0.0; }

    /// Evaluate on a curve given as a callable y -> h(y).
    template <class CurveAt>
    double eval(CurveAt&& curve_at) const {
        if (kind == Kind::Constant) return value;
        return shape(curve_at(maturity));
    }

    /// Evaluate directly from the point value h(maturity).
    double eval_at_point(double curve_value) const {
        if (kind == Kind::Constant) return value;
        return shape(curve_value);
    }
};

/// Operator norm of the point evaluation delta_y on the curve space.
inline double point_eval_norm(double y, double alpha) {
    return std::sqrt(1.0 + (1.0 - std::exp(-alpha * y)) / alpha);
}

}  // namespace fdr

#endif  // FDR_FUNCTIONAL_HPP
