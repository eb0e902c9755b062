#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ldrisk/risk_measure.hpp"
#include "ldrisk/state_space.hpp"

namespace ldrisk {

/// Max-stable penalty on a finite space: mu(A) = max_{x in A} atom(x),
/// mu(empty) = -inf. Atoms live in [-inf, 0] with max atom = 0 (so the full
/// space carries no penalty); construction rejects anything else.
class MaxStablePenalty {
public:
    explicit MaxStablePenalty(std::vector<double> atoms, double tol = 1e-9);

    int size() const { return static_cast<int>(atoms_.size()); }
    double atom(int i) const { return atoms_[static_cast<size_t>(i)]; }
    const std::vector<double>& atoms() const { return atoms_; }

    double of(const Subset& a) const;

private:
    std::vector<double> atoms_;
};

/// Maxitive integral sup_r { r + mu({f > r}) }. On a finite space this
/// collapses to the closed form max_x { f(x) + atom(x) }; the level-set
/// route below evaluates the sup exactly over the jump locations of f.
/// The two routes are cross-checked on every call.
double maxitive_integral(const BoundedFunction& f, const MaxStablePenalty& mu);

/// Level-set evaluation of sup_r { r + J({f > r}) } for an arbitrary
/// monotone set function J. Exact: the sup is attained in the limit r -> v
/// from below (giving v + J({f >= v})) or at r = v (giving v + J({f > v}))
/// for v among the values of f.
double maxitive_integral_levels(const BoundedFunction& f,
                                const std::function<double(const Subset&)>& set_value);

/// Divergent level schedule r_k = -base^k used for the inf over r in the
/// concentration function.
struct RSchedule {
    double base = 2.0;
    int steps = 41;  // k = 0..40
    double at(int k) const;
};

struct ConcentrationResult {
    double value = 0.0;
    bool converged = false;
    int evaluations = 0;
};

/// Concentration J_A = inf_r phi(r 1_{A^c}), taken along the schedule until
/// two consecutive values agree within tol. Atomic measures short-circuit
/// to the exact value -min_{x in A} gamma(x). A tail that keeps translating
/// by exactly the schedule step is the signature of J_A = -inf and is
/// reported as such (converged, value -inf). Otherwise an unstabilized
/// schedule yields converged = false with the last value.
ConcentrationResult concentration(const RiskMeasure& phi, const Subset& a,
                                  const RSchedule& schedule = {}, double tol = 1e-10);

/// J_A for every subset, materialized as a dense table for ground sets of
/// at most `materialize_limit` points and computed on demand above that.
class ConcentrationTable {
public:
    static ConcentrationTable from_risk(const RiskMeasure& phi, const RSchedule& schedule = {},
                                        double tol = 1e-10, int materialize_limit = 15);
    static ConcentrationTable from_penalty(const MaxStablePenalty& mu);

    double at(const Subset& a) const;
    double at_bits(std::uint64_t bits) const;
    int ground_size() const { return n_; }
    bool materialized() const { return !dense_.empty(); }
    /// False when some materialized entry came from an unstabilized schedule.
    bool fully_converged() const { return all_converged_; }

private:
    ConcentrationTable() = default;

    int n_ = 0;
    std::vector<double> dense_;  // indexed by subset mask when materialized
    std::function<ConcentrationResult(const Subset&)> lazy_;
    bool all_converged_ = true;
};

/// Extracts the penalty of a max-stable measure from singleton
/// concentrations and verifies it: max atom = 0 within tol and agreement of
/// set-level concentrations with the atom maximum (exhaustive for small
/// spaces, sampled otherwise). Throws NotMaxStable when either fails.
/// tol < 0 picks the measure's default tolerance.
MaxStablePenalty penalty_from_risk(const RiskMeasure& phi, double tol = -1.0,
                                   std::uint64_t seed = 1);

/// The max-stable measure induced by a penalty through the maxitive
/// integral; the round trip penalty_from_risk(risk_from_penalty(mu))
/// reproduces mu exactly, including -inf atoms.
RiskMeasure risk_from_penalty(FiniteMetricSpace space, MaxStablePenalty mu);

struct RepresentationReport {
    long trials = 0;
    double tolerance = 0.0;
    double worst_gap = 0.0;  // sup over sampled f of |phi(f) - integral|
    bool pass = true;
    std::vector<double> witness_f;
};

/// Compares phi(f) against the maxitive integral of f with respect to
/// phi's own concentration function on random functions. For max-stable
/// measures the gap vanishes; otherwise the report carries the observed
/// representation defect (no exception).
RepresentationReport representation_check(const RiskMeasure& phi, int trials,
                                          std::uint64_t seed = 1, double tol = -1.0,
                                          double bound = 5.0);

struct PenaltyMaxStabilityReport {
    bool exhaustive = false;
    long pairs_checked = 0;
    double tolerance = 0.0;
    double worst_gap = 0.0;
    std::uint64_t witness_a = 0, witness_b = 0;
    bool pass = true;
};

/// Verifies J(A u B) = J(A) v J(B) over subset pairs: exhaustively when
/// 4^K stays tractable (K <= max_exhaustive_k), on seeded samples above.
PenaltyMaxStabilityReport check_penalty_maxstability(const ConcentrationTable& table,
                                                     int max_exhaustive_k = 13,
                                                     long samples = 20000,
                                                     std::uint64_t seed = 1, double tol = 1e-9);

}  // namespace ldrisk
