#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"

namespace ldrisk {

/// Horizon-indexed loss exponent w_n. All supported kinds scale a base
/// shape: w_n(x) = n * w(x) with
///   linear_scaled     w(x) = x
///   power_scaled      w(x) = sgn(x)|x|^p,            p > 0
///   transform_scaled  w(x) = v^{-1}(x)  for an increasing bijection v
///   custom_table      w(x) a nondecreasing step table (left-continuous)
/// w is nondecreasing with w(0) = 0 and may take the value +inf; the
/// generalized inverse w^{-1}(y) = sup{x : w(x) <= y} uses sup(empty) = -inf.
class LossExponent {
public:
    enum class Kind { linear_scaled, power_scaled, transform_scaled, custom_table };

    static LossExponent linear();
    static LossExponent power(double p);
    /// v and its inverse as callables; validated on a probe grid (v(0)=0,
    /// strictly increasing, v(v_inverse(t)) = t) and rejected with
    /// NotABijection otherwise.
    static LossExponent transform(std::function<double(double)> v,
                                  std::function<double(double)> v_inverse,
                                  std::string name = "transform");
    /// Signed power transform v(y) = sgn(y)|y|^q.
    static LossExponent transform_power(double q);
    /// Step table: w(x) = ws[i] on (xs[i-1], xs[i]], w = ws[0] below xs[0],
    /// w = upper above xs.back(). xs strictly increasing, ws nondecreasing,
    /// upper >= ws.back() (may be +inf). Requires w(0) = 0.
    static LossExponent table(std::vector<double> xs, std::vector<double> ws, double upper);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double exponent() const { return p_; }

    /// Base shape w(x); +inf allowed.
    double base(double x) const;
    /// Generalized inverse of the base shape.
    double base_inverse(double y) const;

    /// w_n(x) = n * w(x) for horizon n > 0.
    double at(double x, double n) const;
    /// w_n^{-1}(y) = w^{-1}(y / n).
    double inverse_at(double y, double n) const;

    /// True for the closed-form kinds whose shift property
    /// limsup w_n^{-1}(a + a_n) = limsup w_n^{-1}(a_n) holds by
    /// construction; custom tables are accepted but uncertified.
    bool shift_condition_certified() const { return kind_ != Kind::custom_table; }

private:
    LossExponent() = default;

    Kind kind_ = Kind::linear_scaled;
    std::string name_ = "linear_scaled";
    double p_ = 1.0;
    std::function<double(double)> fwd_;      // v
    std::function<double(double)> inv_;      // v^{-1}
    std::vector<double> xs_, ws_;
    double upper_ = 0.0;
};

/// sup{x : w(x) <= y} for a nondecreasing w given as a step table with the
/// LossExponent::table conventions.
double generalized_inverse_table(const std::vector<double>& xs, const std::vector<double>& ws,
                                 double upper, double y);

/// Finite-support law of a real random variable, weights kept in log space
/// so extreme tails stay representable.
struct DiscreteLogLaw {
    std::vector<double> outcomes;
    std::vector<double> log_weights;  // log probabilities, -inf allowed

    double min_outcome() const;
    double max_outcome() const;
    /// log sum of weights (0 for a full probability law).
    double log_total() const;
};

struct ShortfallOptions {
    double tol = 1e-10;   // absolute tolerance on the optimal shift m
    int max_iter = 200;
};

/// Shortfall risk of Z: inf{m : E[exp(w_n(Z - m))] <= 1}, computed by
/// bisection with the expectation evaluated in log-sum-exp form. Constant
/// laws short-circuit to the closed form c - w_n^{-1}(0). Throws NoBracket
/// when w never rises above 0, i.e. the loss constraint cannot bind.
double shortfall_risk(const DiscreteLogLaw& z, const LossExponent& loss, double horizon,
                      const ShortfallOptions& opts = {});

/// log E[exp(w_n(Z - m))]; exposed for diagnostics and tests.
double log_shortfall_constraint(const DiscreteLogLaw& z, const LossExponent& loss, double horizon,
                                double m);

}  // namespace ldrisk
