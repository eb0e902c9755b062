#pragma once

#include <cstdint>
#include <vector>

#include "ldrisk/families.hpp"
#include "ldrisk/large_deviations.hpp"
#include "ldrisk/loss.hpp"
#include "ldrisk/risk_measure.hpp"
#include "ldrisk/state_space.hpp"

namespace ldrisk {

/// Per-horizon shortfall risk of f(X_n) under the scaled loss l_n = exp(w_n).
/// Horizons where the reported mass defect moves the value by more than
/// truncation_tol are flagged. `shift_certified` is false for custom loss
/// tables (their scaling limit lacks the closed-form shift property).
struct ShortfallAsymptotics {
    HorizonEstimate estimate;
    bool shift_certified = true;
};

ShortfallAsymptotics asymptotic_shortfall(const DistributionSequence& family,
                                          const BoundedFunction& f, const LossExponent& loss,
                                          const std::vector<int>& horizons,
                                          const AsymptoticOptions& opts = {});

/// The inverse-loss concentration diagnostics w_n^{-1}(-log P(X_n in B))
/// along the horizon grid. Zero-probability horizons produce +inf
/// sentinels and are flagged rather than thrown; the upper concentration
/// is -lower() of the result, the ball-rate estimate is +lower().
HorizonEstimate wrate_set(const DistributionSequence& family, const Subset& b,
                          const LossExponent& loss, const std::vector<int>& horizons,
                          const AsymptoticOptions& opts = {});

/// Same formula evaluated on the punctured-ball-free ball B_{delta*}(x)
/// with delta* = half the minimal positive distance.
HorizonEstimate wrate_point(const DistributionSequence& family, int x, const LossExponent& loss,
                            const std::vector<int>& horizons,
                            const AsymptoticOptions& opts = {});

/// Rate-function estimate at every point: the liminf proxy of wrate_point.
RateFunction wrate_rate(const DistributionSequence& family, const LossExponent& loss,
                        const std::vector<int>& horizons, const AsymptoticOptions& opts = {});

/// The upper asymptotic shortfall packaged as a risk measure (custom kind):
/// f -> limsup proxy of the per-horizon shortfall. Lets the generic
/// concentration / inf_r machinery consume it, giving a second, independent
/// route to the same concentration numbers as wrate_set.
RiskMeasure upper_asymptotic_shortfall_measure(DistributionSequence family, LossExponent loss,
                                               std::vector<int> horizons,
                                               AsymptoticOptions opts = {});

/// Two-point fixture with P_n(x2) = e^{-c n} exactly (closed-form log
/// weights, zero defect); the inverse-loss concentration of {x2} is
/// -w^{-1}(c) for every scaled kind.
DistributionSequence two_point_family(double c);

struct TransformedLdpOptions {
    std::vector<int> horizons = default_horizons(3, 12);
    int lp_trials = 50;
    std::uint64_t seed = 7;
    double bound = 2.0;  // sup-norm of random test functions
    int tail_window = 4;
    double truncation_tol = 1e-9;
};

/// Report of the rate-transformation demo. Route A estimates the linear
/// (entropic) rate from ball probabilities and applies v = base_inverse of
/// the supplied loss afterwards; route B applies the inverse loss per
/// horizon before taking envelopes. Both target v(I(x)); `max_rate_gap` is
/// their worst disagreement. The dual side compares the limsup shortfall
/// envelope of random f against max_x { f(x) - v(I_A(x)) }.
struct TransformedLdpReport {
    std::vector<double> rate_linear;       // route A before the transform
    std::vector<double> rate_transformed;  // v applied to route A
    std::vector<double> rate_direct;       // route B
    double max_rate_gap = 0.0;
    int lp_trials = 0;
    double worst_lp_gap = 0.0;
    std::vector<double> witness_f;
    bool flagged = false;  // any envelope window touched a flagged horizon
};

TransformedLdpReport transformed_ldp_demo(const DistributionSequence& family,
                                          const LossExponent& transform_loss,
                                          const TransformedLdpOptions& opts = {});

}  // namespace ldrisk
