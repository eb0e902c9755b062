#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ldrisk/loss.hpp"
#include "ldrisk/state_space.hpp"

namespace ldrisk {

/// Monetary risk measure on a finite space. Kinds:
///   atomic          phi(f) = max_x { f(x) - gamma(x) },  gamma >= 0, min gamma = 0
///   entropic        phi(f) = (1/n) log sum_x exp(n f(x)) P(x)
///   shortfall       phi(f) = inf{m : E[exp(w_n(f(X) - m))] <= 1}
///   robust_entropic max over a finite family of laws of the entropic value
///   custom          user-supplied evaluator (normalization checked once)
/// All evaluation happens in log-sum-exp form where exponentials appear.
class RiskMeasure {
public:
    enum class Kind { atomic, entropic, shortfall, robust_entropic, custom };

    /// gamma is shifted at construction so its minimum is exactly 0; values
    /// may be +inf but not all of them.
    static RiskMeasure atomic(FiniteMetricSpace space, std::vector<double> gamma);
    static RiskMeasure entropic(FiniteMetricSpace space, ProbabilityVector law, int horizon);
    static RiskMeasure shortfall(FiniteMetricSpace space, ProbabilityVector law, LossExponent loss,
                                 int horizon);
    static RiskMeasure robust_entropic(FiniteMetricSpace space, std::vector<ProbabilityVector> laws,
                                       int horizon);
    static RiskMeasure custom(FiniteMetricSpace space,
                              std::function<double(const BoundedFunction&)> evaluator,
                              std::string name = "custom");

    double evaluate(const BoundedFunction& f) const;
    double operator()(const BoundedFunction& f) const { return evaluate(f); }

    Kind kind() const { return kind_; }
    const std::string& kind_name() const { return name_; }
    const FiniteMetricSpace& space() const { return space_; }
    int horizon() const;
    const std::vector<double>& atom_penalties() const;

    /// Position is acceptable when phi(f) <= tol.
    bool accepts(const BoundedFunction& f, double tol = 0.0) const {
        return evaluate(f) <= tol;
    }

    /// Numerical slack appropriate for the kind: exact max arithmetic for
    /// atomic measures (1e-12), root-finding / log-sum-exp noise otherwise
    /// (1e-9).
    double default_tolerance() const { return kind_ == Kind::atomic ? 1e-12 : 1e-9; }

private:
    RiskMeasure(FiniteMetricSpace space) : space_(std::move(space)) {}

    Kind kind_ = Kind::custom;
    std::string name_;
    FiniteMetricSpace space_;
    std::vector<double> gamma_;
    std::vector<ProbabilityVector> laws_;
    std::vector<std::vector<double>> log_laws_;
    LossExponent loss_ = LossExponent::linear();
    int horizon_ = 0;
    std::function<double(const BoundedFunction&)> eval_;
};

/// Outcome of a randomized property check. `worst_gap` is the largest
/// violation seen (0 when every trial satisfied the property exactly);
/// pass means worst_gap <= tolerance.
struct CheckReport {
    std::string check;
    std::string detail;  // which clause produced the worst gap
    long trials = 0;
    double tolerance = 0.0;
    double worst_gap = 0.0;
    bool pass = true;
    std::vector<double> witness_f;
    std::vector<double> witness_g;
    double witness_scalar = 0.0;
};

/// Uniform values in [-bound, bound] at every point.
BoundedFunction random_function(int size, std::mt19937_64& rng, double bound = 5.0);

/// Checks normalization phi(0) = 0, translation phi(f + c) = phi(f) + c and
/// monotonicity f <= g => phi(f) <= phi(g) on random inputs. tol < 0 picks
/// the measure's default tolerance.
CheckReport check_monetary_axioms(const RiskMeasure& phi, int trials, std::uint64_t seed = 1,
                                  double bound = 5.0, double tol = -1.0);

/// Checks phi(f \/ g) = phi(f) \/ phi(g) on random pairs and closure of the
/// acceptance set under pointwise maxima. Reports the worst one-sided excess
/// phi(f \/ g) - phi(f) \/ phi(g); the reverse inequality follows from
/// monotonicity.
CheckReport check_max_stability(const RiskMeasure& phi, int trials, std::uint64_t seed = 1,
                                double bound = 5.0, double tol = -1.0);

/// Checks phi(lambda f + (1-lambda) g) <= lambda phi(f) + (1-lambda) phi(g)
/// on random pairs, including the endpoints lambda in {0, 1}.
CheckReport check_convexity(const RiskMeasure& phi, int trials, std::uint64_t seed = 1,
                            double bound = 5.0, double tol = -1.0);

}  // namespace ldrisk
