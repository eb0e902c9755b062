#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldrisk/families.hpp"
#include "ldrisk/maxitive.hpp"
#include "ldrisk/risk_measure.hpp"
#include "ldrisk/state_space.hpp"

namespace ldrisk {

/// Candidate rate function: values in [0, +inf] indexed by point.
struct RateFunction {
    std::vector<double> values;

    double at(int i) const { return values[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
    /// min over a subset, +inf on the empty set (inf over nothing).
    double min_over(const Subset& a) const;
};

/// Minimal rate from vanishing balls: I(x) = -J_{B(x, delta*)} with delta*
/// half the minimum positive distance, so the ball is the singleton {x} and
/// the delta -> 0 limit is attained. Throws NoConvergence if a singleton
/// concentration fails to stabilize.
RateFunction rate_from_balls(const RiskMeasure& phi, const RSchedule& schedule = {},
                             double tol = 1e-10);

/// Convex-duality style rate: I(x) = sup over the corpus of f(x) - phi(f).
/// Exact when the corpus contains the two-level functions c 1_{x} + r 1_{x^c}
/// with r far below the working range; always a lower bound for I_min.
RateFunction rate_from_duality(const RiskMeasure& phi, const std::vector<BoundedFunction>& corpus);

/// Corpus builder: all c 1_{x} + r 1_{x^c} over points and grids, plus the
/// constants (including 0).
std::vector<BoundedFunction> two_level_corpus(const FiniteMetricSpace& space,
                                              const std::vector<double>& c_grid,
                                              const std::vector<double>& r_grid);

struct LdpVerdict {
    bool holds = true;
    long subsets_checked = 0;
    double tolerance = 0.0;
    /// Largest excess of -min_{int A} I over J_A (lower bound violation).
    double worst_lower_excess = 0.0;
    /// Largest excess of J_A over -min_{cl A} I (upper bound violation).
    double worst_upper_excess = 0.0;
    std::uint64_t witness_lower = 0, witness_upper = 0;
};

/// Exhaustive sandwich check -inf_{int A} I <= J_A <= -inf_{cl A} I over
/// all 2^K subsets (K <= 15).
LdpVerdict ldp_check(const ConcentrationTable& table, const RateFunction& rate,
                     const FiniteMetricSpace& space, double tol = 1e-10);

struct LpVerdict {
    bool holds = true;
    long trials = 0;
    double tolerance = 0.0;
    double worst_gap = 0.0;  // sup over sampled f of |phi(f) - sup_x{f - I}|
    std::vector<double> witness_f;
};

/// sup_x { f(x) - I(x) }.
double lp_value(const BoundedFunction& f, const RateFunction& rate);
/// Signed Laplace-principle defect phi(f) - lp_value(f, I).
double lp_gap(const RiskMeasure& phi, const RateFunction& rate, const BoundedFunction& f);

/// Equality phi(f) = sup_x{f(x) - I(x)} on random functions.
LpVerdict lp_check(const RiskMeasure& phi, const RateFunction& rate, int trials,
                   std::uint64_t seed = 1, double tol = 1e-10, double bound = 5.0);

struct EquivalenceReport {
    RateFunction rate;
    LdpVerdict ldp;
    LpVerdict lp;
    double perturbation = 0.1;
    int perturbations_tested = 0;
    bool uniqueness_ok = true;  // every admissible perturbation breaks a bound
    bool holds = false;
};

struct EquivalenceOptions {
    int lp_trials = 200;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    double perturbation = 0.1;
    double bound = 5.0;
};

/// For a max-stable measure (gate: penalty extraction must succeed, else
/// NotMaxStable propagates): extracts I_min from vanishing balls, checks
/// the exhaustive LDP and the LP against it, then verifies rate uniqueness
/// by perturbing I_min at each point by +eps (and -eps where I_min > eps)
/// and requiring the perturbed candidate to break an LDP bound.
EquivalenceReport varadhan_bryc_equivalence(const RiskMeasure& phi,
                                            const EquivalenceOptions& opts = {});

enum class TightnessEvidence { condition_a, condition_b, neither };

struct TightnessReport {
    std::vector<int> horizons;
    /// -J estimate of the complement of each candidate set (limsup proxy).
    std::vector<double> neg_j_complement;
    /// Ball-rate estimates at every point of the space.
    std::vector<double> rate;
    TightnessEvidence evidence = TightnessEvidence::neither;
    double i_infinity = 0.0;  // candidate limit level used for condition (B)
    double eps = 0.0;
    /// Everything here is evidence along a finite horizon grid, never a
    /// certificate for the limit statements.
    std::string note = "finite-horizon evidence";
};

struct TightnessOptions {
    double eps = 1e-2;
    double growth_threshold = 5.0;
    int tail_window = 4;
};

/// Finite-horizon surrogate for the two exponential-tightness conditions
/// along a nested family of candidate compacts:
///   (A) -J_{K^c} grows in K without an apparent bound,
///   (B) -J_{K^c} levels off at a finite I(inf) while the ball rate stays
///       <= I(inf) + eps outside the candidates.
TightnessReport tightness_check(const DistributionSequence& family,
                                const std::vector<Subset>& nested_candidates,
                                const std::vector<int>& horizons,
                                const TightnessOptions& opts = {});

struct SandwichReport {
    long subsets_checked = 0;
    double tolerance = 0.0;
    bool sandwich_holds = true;   // -min_int I <= J_lo <= J_up <= -min_cl I
    double worst_sandwich_gap = 0.0;
    bool lp_upper_ok = true, lp_lower_ok = true;
    double worst_agreement_gap = 0.0;  // sup |phi_up(f) - phi_lo(f)|
    bool lp_side_holds = true;         // both LPs hold and the pair agrees
    /// The two sides of the equivalence came out the same way.
    bool consistent = true;
};

/// Two-sided large-deviation sandwich for an ordered pair phi_lo <= phi_up
/// (violations of the order raise OrderViolation) against the equivalent
/// Laplace-principle statement for both measures.
SandwichReport pair_sandwich_check(const RiskMeasure& phi_up, const RiskMeasure& phi_lo,
                                   const RateFunction& rate, const std::vector<Subset>& subsets,
                                   int trials = 200, std::uint64_t seed = 1, double tol = 1e-9);

/// All 2^K subsets of a ground set (K <= 15).
std::vector<Subset> all_subsets(int k);

struct LocalReport {
    CheckReport stability;           // max-stability restricted to the class
    std::vector<double> rate_on_k;   // I_K at the points of K (by member order)
    double j_complement = 0.0;       // J_{K^c}
    double worst_representation_gap = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

/// Max-stability and the two-term representation
///   phi(f 1_K + r 1_{K^c}) = sup_{x in K}{f(x) - I_K(x)} v (r + J_{K^c})
/// restricted to the class {f 1_K + r 1_{K^c}}, with I_K recovered from a
/// two-level corpus on K.
LocalReport local_max_stability_report(const RiskMeasure& phi, const Subset& k_set, int trials,
                                       std::uint64_t seed = 1, double bound = 5.0,
                                       double tol = -1.0);

}  // namespace ldrisk
