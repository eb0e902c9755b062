#include "ldrisk/large_deviations.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ldrisk/extended.hpp"

namespace ldrisk {

namespace {

/// Excess of lhs over rhs, infinity-aware: 0 unless lhs > rhs, +inf when
/// the comparison is decided by an infinity.
double violation_excess(double lhs, double rhs) {
    if (!(lhs > rhs)) return 0.0;
    if (std::isinf(lhs) || std::isinf(rhs)) return pos_inf;
    return lhs - rhs;
}

}  // namespace

double RateFunction::min_over(const Subset& a) const {
    double m = pos_inf;
    for (int i : a.members()) m = std::min(m, values[static_cast<size_t>(i)]);
    return m;
}

RateFunction rate_from_balls(const RiskMeasure& phi, const RSchedule& schedule, double tol) {
    const FiniteMetricSpace& space = phi.space();
    double dmin = space.min_positive_distance();
    double delta = dmin == pos_inf ? 1.0 : dmin / 2;
    RateFunction rate;
    rate.values.resize(static_cast<size_t>(space.size()));
    for (int x = 0; x < space.size(); ++x) {
        ConcentrationResult r = concentration(phi, ball(space, x, delta), schedule, tol);
        if (!r.converged)
            throw Error(Errc::no_convergence,
                        "ball concentration at " + space.label(x) + " did not stabilize");
        rate.values[static_cast<size_t>(x)] = -r.value;
    }
    return rate;
}

RateFunction rate_from_duality(const RiskMeasure& phi,
                               const std::vector<BoundedFunction>& corpus) {
    const int k = phi.space().size();
    RateFunction rate;
    rate.values.assign(static_cast<size_t>(k), neg_inf);
    for (const BoundedFunction& f : corpus) {
        double v = phi(f);
        for (int x = 0; x < k; ++x)
            rate.values[static_cast<size_t>(x)] =
                std::max(rate.values[static_cast<size_t>(x)], f[x] - v);
    }
    return rate;
}

std::vector<BoundedFunction> two_level_corpus(const FiniteMetricSpace& space,
                                              const std::vector<double>& c_grid,
                                              const std::vector<double>& r_grid) {
    std::vector<BoundedFunction> corpus;
    corpus.push_back(BoundedFunction::constant(space.size(), 0.0));
    for (double c : c_grid) {
        corpus.push_back(BoundedFunction::constant(space.size(), c));
        for (int x = 0; x < space.size(); ++x) {
            Subset single(space.size());
            single.add(x);
            for (double r : r_grid)
                corpus.push_back(BoundedFunction::two_level(single, c, r));
        }
    }
    return corpus;
}

LdpVerdict ldp_check(const ConcentrationTable& table, const RateFunction& rate,
                     const FiniteMetricSpace& space, double tol) {
    const int k = space.size();
    if (k > 15) throw Error(Errc::invalid_argument, "exhaustive check capped at 15 points");
    if (table.ground_size() != k || rate.size() != k)
        throw Error(Errc::invalid_argument, "size mismatch");

    LdpVerdict verdict;
    verdict.tolerance = tol;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
        Subset a = Subset::from_bits(k, mask);
        auto [interior, closure] = interior_closure(space, a);
        double j = table.at_bits(mask);
        double lower = -rate.min_over(interior);
        double upper = -rate.min_over(closure);
        double le = violation_excess(lower, j);
        double ue = violation_excess(j, upper);
        if (le > verdict.worst_lower_excess) {
            verdict.worst_lower_excess = le;
            verdict.witness_lower = mask;
        }
        if (ue > verdict.worst_upper_excess) {
            verdict.worst_upper_excess = ue;
            verdict.witness_upper = mask;
        }
        ++verdict.subsets_checked;
    }
    verdict.holds =
        verdict.worst_lower_excess <= tol && verdict.worst_upper_excess <= tol;
    return verdict;
}

double lp_value(const BoundedFunction& f, const RateFunction& rate) {
    double m = neg_inf;
    for (int i = 0; i < f.size(); ++i) m = std::max(m, add_penalty(f[i], -rate.at(i)));
    return m;
}

double lp_gap(const RiskMeasure& phi, const RateFunction& rate, const BoundedFunction& f) {
    return phi(f) - lp_value(f, rate);
}

LpVerdict lp_check(const RiskMeasure& phi, const RateFunction& rate, int trials,
                   std::uint64_t seed, double tol, double bound) {
    LpVerdict verdict;
    verdict.trials = trials;
    verdict.tolerance = tol;
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = random_function(phi.space().size(), rng, bound);
        double gap = std::fabs(lp_gap(phi, rate, f));
        if (t == 0 || gap > verdict.worst_gap) {
            verdict.worst_gap = gap;
            verdict.witness_f.assign(f.values().begin(), f.values().end());
        }
    }
    verdict.holds = verdict.worst_gap <= tol;
    return verdict;
}

EquivalenceReport varadhan_bryc_equivalence(const RiskMeasure& phi,
                                            const EquivalenceOptions& opts) {
    // gate: the measure must be max-stable for either statement to hold
    (void)penalty_from_risk(phi, opts.tol > 0 ? opts.tol : -1.0, opts.seed);

    EquivalenceReport report;
    report.perturbation = opts.perturbation;
    report.rate = rate_from_balls(phi);

    ConcentrationTable table = ConcentrationTable::from_risk(phi);
    report.ldp = ldp_check(table, report.rate, phi.space(), opts.tol);
    report.lp = lp_check(phi, report.rate, opts.lp_trials, opts.seed, opts.tol, opts.bound);

    const int k = phi.space().size();
    for (int x = 0; x < k; ++x) {
        double base = report.rate.at(x);
        if (!is_finite(base)) continue;  // +inf pins the value, +eps is no perturbation
        RateFunction up = report.rate;
        up.values[static_cast<size_t>(x)] = base + opts.perturbation;
        if (ldp_check(table, up, phi.space(), opts.tol).holds) report.uniqueness_ok = false;
        ++report.perturbations_tested;
        if (base > opts.perturbation) {
            RateFunction down = report.rate;
            down.values[static_cast<size_t>(x)] = base - opts.perturbation;
            if (ldp_check(table, down, phi.space(), opts.tol).holds) report.uniqueness_ok = false;
            ++report.perturbations_tested;
        }
    }
    report.holds = report.ldp.holds && report.lp.holds && report.uniqueness_ok;
    return report;
}

TightnessReport tightness_check(const DistributionSequence& family,
                                const std::vector<Subset>& nested_candidates,
                                const std::vector<int>& horizons,
                                const TightnessOptions& opts) {
    if (nested_candidates.empty()) throw Error(Errc::invalid_argument, "no candidate sets");
    for (size_t i = 1; i < nested_candidates.size(); ++i)
        if (!nested_candidates[i - 1].subset_of(nested_candidates[i]))
            throw Error(Errc::invalid_argument, "candidate sets must be nested");

    const FiniteMetricSpace& space = family.space();
    TightnessReport report;
    report.horizons = horizons;
    report.eps = opts.eps;

    for (const Subset& k_set : nested_candidates) {
        HorizonEstimate est;
        est.horizons = horizons;
        est.tail_window = opts.tail_window;
        Subset complement = k_set.complement();
        for (int n : horizons)
            est.values.push_back(complement.empty() ? neg_inf
                                                    : family.log_prob(n, complement) / n);
        // J-bar of the complement is the limsup proxy; report its negative
        report.neg_j_complement.push_back(-est.upper());
    }

    // ball rates (upper rate: -limsup of the normalized log ball mass)
    double dmin = space.min_positive_distance();
    double delta = dmin == pos_inf ? 1.0 : dmin / 2;
    for (int x = 0; x < space.size(); ++x) {
        HorizonEstimate est;
        est.horizons = horizons;
        est.tail_window = opts.tail_window;
        Subset b = ball(space, x, delta);
        for (int n : horizons) est.values.push_back(family.log_prob(n, b) / n);
        report.rate.push_back(-est.upper());
    }

    // condition (B): -J levels off at a finite value and the rate stays
    // below it outside the candidates
    {
        double i_inf = report.neg_j_complement.back();
        bool leveled = is_finite(i_inf);
        for (double v : report.neg_j_complement)
            leveled = leveled && std::fabs(v - i_inf) <= opts.eps;
        bool dominated = true;
        for (size_t m = 0; m < nested_candidates.size() && dominated; ++m)
            for (int x : nested_candidates[m].complement().members())
                if (!(report.rate[static_cast<size_t>(x)] <= i_inf + opts.eps)) {
                    dominated = false;
                    break;
                }
        if (leveled && dominated) {
            report.evidence = TightnessEvidence::condition_b;
            report.i_infinity = i_inf;
            return report;
        }
    }
    // condition (A): growth in the candidate index without an apparent bound
    {
        bool growing = true;
        for (size_t m = 1; m < report.neg_j_complement.size(); ++m)
            growing = growing && report.neg_j_complement[m] > report.neg_j_complement[m - 1];
        double spread = report.neg_j_complement.back() - report.neg_j_complement.front();
        if (growing &&
            (report.neg_j_complement.back() == pos_inf || spread >= opts.growth_threshold)) {
            report.evidence = TightnessEvidence::condition_a;
            return report;
        }
    }
    report.evidence = TightnessEvidence::neither;
    return report;
}

SandwichReport pair_sandwich_check(const RiskMeasure& phi_up, const RiskMeasure& phi_lo,
                                   const RateFunction& rate, const std::vector<Subset>& subsets,
                                   int trials, std::uint64_t seed, double tol) {
    if (phi_up.space().size() != phi_lo.space().size())
        throw Error(Errc::invalid_argument, "the pair must share a space");
    const FiniteMetricSpace& space = phi_up.space();

    SandwichReport report;
    report.tolerance = tol;

    // order and agreement on a random corpus
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = random_function(space.size(), rng, 5.0);
        double up = phi_up(f), lo = phi_lo(f);
        if (lo > up + tol)
            throw Error(Errc::order_violation,
                        "phi_lo exceeds phi_up by " + format_real(lo - up));
        report.worst_agreement_gap = std::max(report.worst_agreement_gap, std::fabs(up - lo));
    }

    for (const Subset& a : subsets) {
        auto [interior, closure] = interior_closure(space, a);
        double lower = -rate.min_over(interior);
        double upper = -rate.min_over(closure);
        double j_up = concentration(phi_up, a).value;
        double j_lo = concentration(phi_lo, a).value;
        double gap = std::max({violation_excess(lower, j_lo), violation_excess(j_lo, j_up),
                               violation_excess(j_up, upper)});
        if (gap > report.worst_sandwich_gap) report.worst_sandwich_gap = gap;
        ++report.subsets_checked;
    }
    report.sandwich_holds = report.worst_sandwich_gap <= tol;

    LpVerdict lp_up = lp_check(phi_up, rate, trials, seed + 1, tol);
    LpVerdict lp_lo = lp_check(phi_lo, rate, trials, seed + 2, tol);
    report.lp_upper_ok = lp_up.holds;
    report.lp_lower_ok = lp_lo.holds;
    report.lp_side_holds =
        lp_up.holds && lp_lo.holds && report.worst_agreement_gap <= tol;
    report.consistent = report.sandwich_holds == report.lp_side_holds;
    return report;
}

std::vector<Subset> all_subsets(int k) {
    if (k > 15) throw Error(Errc::invalid_argument, "enumeration capped at 15 points");
    std::vector<Subset> out;
    out.reserve(static_cast<size_t>(1) << k);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask)
        out.push_back(Subset::from_bits(k, mask));
    return out;
}

namespace {

/// inf over the schedule of phi(f 1_K + r 1_{K^c}), the local functional
/// behind the restricted representation.
double local_inf(const RiskMeasure& phi, const Subset& k_set, const std::vector<double>& f_on_k,
                 const RSchedule& schedule, double tol) {
    const std::vector<int> members = k_set.members();
    double prev = 0.0, value = 0.0;
    for (int k = 0; k < schedule.steps; ++k) {
        double r = schedule.at(k);
        std::vector<double> v(static_cast<size_t>(phi.space().size()), r);
        for (size_t i = 0; i < members.size(); ++i)
            v[static_cast<size_t>(members[i])] = f_on_k[i];
        value = phi(BoundedFunction(std::move(v)));
        if (k > 0 && std::fabs(value - prev) <= tol) return value;
        prev = value;
    }
    return value;
}

}  // namespace

LocalReport local_max_stability_report(const RiskMeasure& phi, const Subset& k_set, int trials,
                                       std::uint64_t seed, double bound, double tol) {
    if (k_set.ground_size() != phi.space().size())
        throw Error(Errc::invalid_argument, "subset ground set does not match the space");
    if (k_set.empty() || k_set.is_full())
        throw Error(Errc::invalid_argument, "the class needs a proper nonempty K");

    LocalReport report;
    report.tolerance = tol < 0 ? phi.default_tolerance() : tol;
    const std::vector<int> members = k_set.members();
    const int k = phi.space().size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);

    // max-stability restricted to {f 1_K + r 1_{K^c}}
    report.stability.check = "local_max_stability";
    report.stability.trials = trials;
    report.stability.tolerance = report.tolerance;
    auto sample_member = [&]() {
        double r = u(rng);
        std::vector<double> v(static_cast<size_t>(k), r);
        for (int i : members) v[static_cast<size_t>(i)] = u(rng);
        return BoundedFunction(std::move(v));
    };
    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = sample_member();
        BoundedFunction g = sample_member();
        double gap = phi(pointwise_max(f, g)) - std::max(phi(f), phi(g));
        if (gap > report.stability.worst_gap) {
            report.stability.worst_gap = gap;
            report.stability.detail = "phi(f v g) = phi(f) v phi(g) on the class";
            report.stability.witness_f.assign(f.values().begin(), f.values().end());
            report.stability.witness_g.assign(g.values().begin(), g.values().end());
        }
    }
    report.stability.pass = report.stability.worst_gap <= report.tolerance;

    const RSchedule schedule{};
    report.j_complement = concentration(phi, k_set.complement()).value;

    // I_K from the two-level corpus on K: c at one point, s elsewhere on K,
    // the inf over r handled by the schedule
    const std::vector<double> c_grid = {-bound, -bound / 2, 0.0, bound / 2, bound};
    const std::vector<double> s_grid = {-1.0, -8.0, -64.0, -512.0, -4096.0};
    report.rate_on_k.assign(members.size(), neg_inf);
    for (size_t i = 0; i < members.size(); ++i) {
        for (double c : c_grid)
            for (double s : s_grid) {
                std::vector<double> f_on_k(members.size(), s);
                f_on_k[i] = c;
                double v = local_inf(phi, k_set, f_on_k, schedule, report.tolerance);
                report.rate_on_k[i] = std::max(report.rate_on_k[i], c - v);
            }
        report.rate_on_k[i] = std::max(report.rate_on_k[i], 0.0);
    }

    // representation phi(f 1_K + r 1_{K^c}) = sup_K{f - I_K} v (r + J_{K^c})
    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = sample_member();
        double r = f[k_set.complement().members().front()];
        double rhs = add_penalty(r, report.j_complement);
        for (size_t i = 0; i < members.size(); ++i)
            rhs = std::max(rhs, f[members[i]] - report.rate_on_k[i]);
        report.worst_representation_gap =
            std::max(report.worst_representation_gap, std::fabs(phi(f) - rhs));
    }
    report.pass = report.stability.pass &&
                  report.worst_representation_gap <= report.tolerance;
    return report;
}

}  // namespace ldrisk
