#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ldrisk/state_space.hpp"

namespace ldrisk {

/// Law of one member X_n of a sequence, kept in log space so weights like
/// e^{-nm} stay representable far past double underflow. `mass_defect` is
/// the probability lost to truncation of the ambient space (0 for exact
/// laws); `std_err` is populated only by Monte Carlo generators.
struct LogLaw {
    std::vector<double> log_weights;
    double mass_defect = 0.0;
    std::vector<double> std_err;

    double log_mass(const Subset& a) const;
};

/// A sequence of laws (X_n) on a fixed finite metric space; the generator
/// is pure in n, so laws can be recomputed or cached freely.
class DistributionSequence {
public:
    DistributionSequence(FiniteMetricSpace space, std::function<LogLaw(int)> generator,
                         std::string name);

    const FiniteMetricSpace& space() const { return space_; }
    const std::string& name() const { return name_; }

    /// Law of X_n; horizons start at 1. Throws HorizonMissing otherwise.
    LogLaw law(int n) const;
    /// log P(X_n in A).
    double log_prob(int n, const Subset& a) const;

private:
    FiniteMetricSpace space_;
    std::function<LogLaw(int)> generator_;
    std::string name_;
};

/// Exploratory Monte Carlo family: laws are empirical frequencies of
/// `samples` draws with per-point standard errors reported in the LogLaw.
/// Not suitable where exactness is asserted.
DistributionSequence monte_carlo_family(FiniteMetricSpace space,
                                        std::function<int(int, std::mt19937_64&)> sampler,
                                        long samples, std::uint64_t seed, std::string name);

/// A quantity evaluated along a finite horizon grid together with
/// limsup/liminf proxies: the running max/min over the tail of the grid.
/// `flagged[i]` marks horizons whose value is untrustworthy (truncated mass
/// could move it beyond tolerance).
struct HorizonEstimate {
    std::vector<int> horizons;
    std::vector<double> values;
    std::vector<char> flagged;
    int tail_window = 4;

    /// limsup proxy: max of the last tail_window values.
    double upper() const;
    /// liminf proxy: min of the last tail_window values.
    double lower() const;
    /// Suffix envelopes aligned with `values` (upper_envelope[i] is the max
    /// of values[i..end]); these are the CSV columns.
    std::vector<double> upper_envelope() const;
    std::vector<double> lower_envelope() const;
    bool any_flagged_in_window() const;
};

/// Default horizon grid 2^k, k = k_min..k_max.
std::vector<int> default_horizons(int k_min = 3, int k_max = 12);

enum class EnvelopeSide { upper, lower };

struct AsymptoticOptions {
    int tail_window = 4;
    double truncation_tol = 1e-9;
};

/// Entropy functional (1/n) log E[exp(n f(X_n))] along the horizon grid.
/// Horizons where the reported mass defect could shift the value by more
/// than truncation_tol are flagged (truncation dominates), not dropped:
/// for upper envelopes a truncated value only ever underestimates.
HorizonEstimate asymptotic_entropy(const DistributionSequence& family, const BoundedFunction& f,
                                   const std::vector<int>& horizons,
                                   const AsymptoticOptions& opts = {});

/// Pointwise max of the entropy functional over finitely many families
/// sharing one space.
HorizonEstimate robust_asymptotic_entropy(const std::vector<DistributionSequence>& families,
                                          const BoundedFunction& f,
                                          const std::vector<int>& horizons,
                                          const AsymptoticOptions& opts = {});

/// Family on {1, ..., m_max} c N (metric |i - j|) with
///   P(X_n = m) = e^{-nm} for m != n,
///   P(X_n = n) = 1 - e^{-n}/(1 - e^{-n}) + e^{-n^2}.
/// The geometric-series identity sum_{m != n} e^{-nm} =
/// e^{-n}/(1-e^{-n}) - e^{-n^2} makes each law sum to 1 before truncation;
/// construction validates this by direct summation on small horizons and
/// each law reports its truncated mass.
DistributionSequence counterexample_naturals(int m_max = 64);

/// Deterministic family X_n = q_n for a fixed enumeration of rationals in
/// [-10, 10], truncated to q_count points and cycled so every enumerated
/// point recurs infinitely often. Laws are exact point masses.
DistributionSequence counterexample_rationals(int q_count = 256);

/// The enumeration backing counterexample_rationals.
std::vector<double> rational_enumeration(int q_count);

}  // namespace ldrisk
