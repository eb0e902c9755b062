#include "ldrisk/shortfall.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"

namespace ldrisk {

ShortfallAsymptotics asymptotic_shortfall(const DistributionSequence& family,
                                          const BoundedFunction& f, const LossExponent& loss,
                                          const std::vector<int>& horizons,
                                          const AsymptoticOptions& opts) {
    if (f.size() != family.space().size())
        throw Error(Errc::invalid_argument, "function does not live on the family's space");
    ShortfallAsymptotics out;
    out.shift_certified = loss.shift_condition_certified();
    out.estimate.tail_window = opts.tail_window;
    const std::vector<double> outcomes(f.values().begin(), f.values().end());
    for (int n : horizons) {
        LogLaw law = family.law(n);
        DiscreteLogLaw push{outcomes, law.log_weights};
        double value = shortfall_risk(push, loss, n);
        bool flag = false;
        if (law.mass_defect > 0.0) {
            // upper variant: park the truncated mass at the worst outcome
            DiscreteLogLaw hi = push;
            hi.outcomes.push_back(*std::max_element(outcomes.begin(), outcomes.end()));
            hi.log_weights.push_back(std::log(law.mass_defect));
            flag = shortfall_risk(hi, loss, n) - value > opts.truncation_tol;
        }
        out.estimate.horizons.push_back(n);
        out.estimate.values.push_back(value);
        out.estimate.flagged.push_back(flag ? 1 : 0);
    }
    return out;
}

HorizonEstimate wrate_set(const DistributionSequence& family, const Subset& b,
                          const LossExponent& loss, const std::vector<int>& horizons,
                          const AsymptoticOptions& opts) {
    if (b.ground_size() != family.space().size())
        throw Error(Errc::invalid_argument, "subset does not live on the family's space");
    HorizonEstimate est;
    est.tail_window = opts.tail_window;
    for (int n : horizons) {
        LogLaw law = family.law(n);
        double logp = law.log_mass(b);
        double value = loss.inverse_at(logp == neg_inf ? pos_inf : -logp, n);
        bool flag = logp == neg_inf;
        if (!flag && law.mass_defect > 0.0) {
            // the truncated mass could belong to b; check whether that matters
            double logp_hi = log_add_exp(logp, std::log(law.mass_defect));
            flag = abs_gap(value, loss.inverse_at(-logp_hi, n)) > opts.truncation_tol;
        }
        est.horizons.push_back(n);
        est.values.push_back(value);
        est.flagged.push_back(flag ? 1 : 0);
    }
    return est;
}

HorizonEstimate wrate_point(const DistributionSequence& family, int x, const LossExponent& loss,
                            const std::vector<int>& horizons, const AsymptoticOptions& opts) {
    const auto& space = family.space();
    double dmin = space.min_positive_distance();
    double delta = std::isinf(dmin) ? 1.0 : dmin / 2.0;
    return wrate_set(family, ball(space, x, delta), loss, horizons, opts);
}

RateFunction wrate_rate(const DistributionSequence& family, const LossExponent& loss,
                        const std::vector<int>& horizons, const AsymptoticOptions& opts) {
    RateFunction rate;
    for (int x = 0; x < family.space().size(); ++x)
        rate.values.push_back(wrate_point(family, x, loss, horizons, opts).lower());
    return rate;
}

RiskMeasure upper_asymptotic_shortfall_measure(DistributionSequence family, LossExponent loss,
                                               std::vector<int> horizons,
                                               AsymptoticOptions opts) {
    FiniteMetricSpace space = family.space();
    auto evaluate = [family = std::move(family), loss = std::move(loss),
                     horizons = std::move(horizons), opts](const BoundedFunction& f) {
        return asymptotic_shortfall(family, f, loss, horizons, opts).estimate.upper();
    };
    return RiskMeasure::custom(std::move(space), std::move(evaluate),
                               "upper_asymptotic_shortfall");
}

DistributionSequence two_point_family(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw Error(Errc::invalid_argument, "two-point decay rate must be positive");
    auto generator = [c](int n) {
        LogLaw law;
        law.log_weights = {std::log1p(-std::exp(-c * n)), -c * n};
        return law;
    };
    return DistributionSequence(FiniteMetricSpace::discrete(2), generator, "two_point");
}

TransformedLdpReport transformed_ldp_demo(const DistributionSequence& family,
                                          const LossExponent& transform_loss,
                                          const TransformedLdpOptions& opts) {
    const int k = family.space().size();
    const AsymptoticOptions aopts{opts.tail_window, opts.truncation_tol};
    const LossExponent linear = LossExponent::linear();

    TransformedLdpReport report;
    bool flagged = false;
    for (int x = 0; x < k; ++x) {
        HorizonEstimate lin = wrate_point(family, x, linear, opts.horizons, aopts);
        HorizonEstimate dir = wrate_point(family, x, transform_loss, opts.horizons, aopts);
        flagged = flagged || lin.any_flagged_in_window() || dir.any_flagged_in_window();
        double i_lin = lin.lower();
        double via_transform = transform_loss.base_inverse(i_lin);
        double direct = dir.lower();
        report.rate_linear.push_back(i_lin);
        report.rate_transformed.push_back(via_transform);
        report.rate_direct.push_back(direct);
        report.max_rate_gap = std::max(report.max_rate_gap, abs_gap(via_transform, direct));
    }

    std::mt19937_64 rng(opts.seed);
    for (int t = 0; t < opts.lp_trials; ++t) {
        BoundedFunction f = random_function(k, rng, opts.bound);
        auto sa = asymptotic_shortfall(family, f, transform_loss, opts.horizons, aopts);
        flagged = flagged || sa.estimate.any_flagged_in_window();
        double envelope = sa.estimate.upper();
        double lp = neg_inf;
        for (int x = 0; x < k; ++x)
            lp = std::max(lp, add_penalty(f[x], -report.rate_transformed[static_cast<size_t>(x)]));
        double gap = abs_gap(envelope, lp);
        if (t == 0 || gap > report.worst_lp_gap) {
            report.worst_lp_gap = gap;
            report.witness_f.assign(f.values().begin(), f.values().end());
        }
    }
    report.lp_trials = opts.lp_trials;
    report.flagged = flagged;
    return report;
}

}  // namespace ldrisk
