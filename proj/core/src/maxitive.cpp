#include "ldrisk/maxitive.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ldrisk/extended.hpp"

namespace ldrisk {

MaxStablePenalty::MaxStablePenalty(std::vector<double> atoms, double tol)
    : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw Error(Errc::invalid_penalty, "no atoms");
    double top = neg_inf;
    for (double a : atoms_) {
        if (std::isnan(a) || a == pos_inf)
            throw Error(Errc::invalid_penalty, "atoms must live in [-inf, 0]");
        if (a > tol)
            throw Error(Errc::invalid_penalty, "positive atom " + format_real(a));
        top = std::max(top, a);
    }
    if (!(std::fabs(top) <= tol))
        throw Error(Errc::invalid_penalty,
                    "max atom is " + format_real(top) + ", the full space must carry penalty 0");
}

double MaxStablePenalty::of(const Subset& a) const {
    if (a.ground_size() != size()) throw Error(Errc::invalid_argument, "size mismatch");
    double m = neg_inf;
    for (int i = 0; i < size(); ++i)
        if (a.contains(i)) m = std::max(m, atoms_[static_cast<size_t>(i)]);
    return m;
}

double maxitive_integral_levels(const BoundedFunction& f,
                                const std::function<double(const Subset&)>& set_value) {
    std::vector<double> levels(f.values().begin(), f.values().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    const int k = f.size();
    double best = neg_inf;
    for (double v : levels) {
        Subset ge(k), gt(k);
        for (int i = 0; i < k; ++i) {
            if (f[i] >= v) ge.add(i);
            if (f[i] > v) gt.add(i);
        }
        best = std::max(best, add_penalty(v, set_value(ge)));
        best = std::max(best, add_penalty(v, set_value(gt)));
    }
    return best;
}

double maxitive_integral(const BoundedFunction& f, const MaxStablePenalty& mu) {
    if (f.size() != mu.size()) throw Error(Errc::invalid_argument, "size mismatch");
    double closed = neg_inf;
    for (int i = 0; i < f.size(); ++i) closed = std::max(closed, add_penalty(f[i], mu.atom(i)));

    double levels = maxitive_integral_levels(f, [&mu](const Subset& a) { return mu.of(a); });
    const bool agree = (closed == levels) || std::fabs(closed - levels) <= 1e-12;
    if (!agree)
        throw std::logic_error("maxitive integral routes disagree: " + format_real(closed) +
                               " vs " + format_real(levels));
    return closed;
}

double RSchedule::at(int k) const { return -std::pow(base, k); }

ConcentrationResult concentration(const RiskMeasure& phi, const Subset& a,
                                  const RSchedule& schedule, double tol) {
    if (a.ground_size() != phi.space().size())
        throw Error(Errc::invalid_argument, "subset ground set does not match the space");
    if (a.empty()) return {neg_inf, true, 0};

    if (phi.kind() == RiskMeasure::Kind::atomic) {
        const auto& gamma = phi.atom_penalties();
        double lo = pos_inf;
        for (int i : a.members()) lo = std::min(lo, gamma[static_cast<size_t>(i)]);
        return {-lo, true, 0};
    }

    const Subset outside = a.complement();
    double prev = 0.0, prev_r = 0.0;
    double value = 0.0, r = 0.0;
    int evals = 0;
    for (int k = 0; k < schedule.steps; ++k) {
        r = schedule.at(k);
        value = phi(BoundedFunction::two_level(outside, r, 0.0));
        ++evals;
        if (k > 0 && std::fabs(value - prev) <= tol) return {value, true, evals};
        prev = value;
        prev_r = r;
    }
    // pure translation along the schedule means phi(r 1_{A^c}) = r + const,
    // i.e. the infimum is -inf
    double last_step = r - prev_r;
    double second = phi(BoundedFunction::two_level(outside, r + last_step, 0.0));
    ++evals;
    if (std::fabs((second - value) - last_step) <= std::max(tol, 1e-9 * std::fabs(last_step)))
        return {neg_inf, true, evals};
    return {second, false, evals};
}

ConcentrationTable ConcentrationTable::from_risk(const RiskMeasure& phi, const RSchedule& schedule,
                                                 double tol, int materialize_limit) {
    ConcentrationTable t;
    t.n_ = phi.space().size();
    if (t.n_ <= materialize_limit) {
        const std::uint64_t total = std::uint64_t(1) << t.n_;
        t.dense_.resize(total);
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            ConcentrationResult r = concentration(phi, Subset::from_bits(t.n_, mask), schedule, tol);
            t.dense_[mask] = r.value;
            t.all_converged_ = t.all_converged_ && r.converged;
        }
    } else {
        t.lazy_ = [phi, schedule, tol](const Subset& a) { return concentration(phi, a, schedule, tol); };
    }
    return t;
}

ConcentrationTable ConcentrationTable::from_penalty(const MaxStablePenalty& mu) {
    ConcentrationTable t;
    t.n_ = mu.size();
    if (t.n_ <= 15) {
        const std::uint64_t total = std::uint64_t(1) << t.n_;
        t.dense_.resize(total);
        for (std::uint64_t mask = 0; mask < total; ++mask)
            t.dense_[mask] = mu.of(Subset::from_bits(t.n_, mask));
    } else {
        t.lazy_ = [mu](const Subset& a) { return ConcentrationResult{mu.of(a), true, 0}; };
    }
    return t;
}

double ConcentrationTable::at(const Subset& a) const {
    if (a.ground_size() != n_) throw Error(Errc::invalid_argument, "size mismatch");
    if (!dense_.empty()) return dense_[a.bits()];
    return lazy_(a).value;
}

double ConcentrationTable::at_bits(std::uint64_t bits) const {
    if (!dense_.empty()) return dense_[bits];
    return lazy_(Subset::from_bits(n_, bits)).value;
}

MaxStablePenalty penalty_from_risk(const RiskMeasure& phi, double tol, std::uint64_t seed) {
    if (tol < 0) tol = phi.default_tolerance();
    const int k = phi.space().size();

    std::vector<double> atoms(static_cast<size_t>(k));
    double top = neg_inf;
    for (int i = 0; i < k; ++i) {
        Subset single(k);
        single.add(i);
        ConcentrationResult r = concentration(phi, single);
        if (!r.converged)
            throw Error(Errc::not_max_stable,
                        "singleton concentration at " + phi.space().label(i) +
                            " did not stabilize along the schedule");
        atoms[static_cast<size_t>(i)] = r.value;
        top = std::max(top, r.value);
    }
    if (!(std::fabs(top) <= tol))
        throw Error(Errc::not_max_stable, "atoms peak at " + format_real(top) + ", not 0");

    // set-level agreement J_A = max_{x in A} atom(x)
    auto check_set = [&](const Subset& a) {
        double lhs = concentration(phi, a).value;
        double rhs = neg_inf;
        for (int i : a.members()) rhs = std::max(rhs, atoms[static_cast<size_t>(i)]);
        bool ok = (lhs == rhs) || std::fabs(lhs - rhs) <= tol;
        if (!ok)
            throw Error(Errc::not_max_stable,
                        "set-level concentration " + format_real(lhs) +
                            " disagrees with the atom maximum " + format_real(rhs));
    };
    if (k <= 10) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << k); ++mask)
            check_set(Subset::from_bits(k, mask));
    } else {
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 200; ++t) {
            Subset a(k);
            while (a.empty())
                for (int i = 0; i < k; ++i)
                    if (rng() & 1) a.add(i);
            check_set(a);
        }
    }
    return MaxStablePenalty(std::move(atoms), std::max(tol, 1e-12));
}

RiskMeasure risk_from_penalty(FiniteMetricSpace space, MaxStablePenalty mu) {
    if (space.size() != mu.size()) throw Error(Errc::invalid_argument, "size mismatch");
    return RiskMeasure::custom(
        std::move(space), [mu](const BoundedFunction& f) { return maxitive_integral(f, mu); },
        "maxitive_integral");
}

RepresentationReport representation_check(const RiskMeasure& phi, int trials, std::uint64_t seed,
                                          double tol, double bound) {
    RepresentationReport report;
    report.trials = trials;
    report.tolerance = tol < 0 ? phi.default_tolerance() : tol;

    ConcentrationTable table = ConcentrationTable::from_risk(phi);
    auto set_value = [&table](const Subset& a) { return table.at(a); };

    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = random_function(phi.space().size(), rng, bound);
        double gap = std::fabs(phi(f) - maxitive_integral_levels(f, set_value));
        if (t == 0 || gap > report.worst_gap) {
            report.worst_gap = gap;
            report.witness_f.assign(f.values().begin(), f.values().end());
        }
    }
    report.pass = report.worst_gap <= report.tolerance;
    return report;
}

PenaltyMaxStabilityReport check_penalty_maxstability(const ConcentrationTable& table,
                                                     int max_exhaustive_k, long samples,
                                                     std::uint64_t seed, double tol) {
    PenaltyMaxStabilityReport report;
    report.tolerance = tol;
    const int k = table.ground_size();

    auto gap_of = [](double lhs, double rhs) {
        if (lhs == rhs) return 0.0;  // covers matching infinities
        if (std::isinf(lhs) || std::isinf(rhs)) return pos_inf;
        return std::fabs(lhs - rhs);
    };

    if (k <= max_exhaustive_k && k <= 15 && table.materialized()) {
        report.exhaustive = true;
        const std::uint64_t total = std::uint64_t(1) << k;
        for (std::uint64_t a = 0; a < total; ++a) {
            const double ja = table.at_bits(a);
            for (std::uint64_t b = 0; b < total; ++b) {
                double gap = gap_of(table.at_bits(a | b), std::max(ja, table.at_bits(b)));
                if (gap > report.worst_gap) {
                    report.worst_gap = gap;
                    report.witness_a = a;
                    report.witness_b = b;
                }
                ++report.pairs_checked;
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        for (long t = 0; t < samples; ++t) {
            Subset a(k), b(k);
            for (int i = 0; i < k; ++i) {
                if (rng() & 1) a.add(i);
                if (rng() & 1) b.add(i);
            }
            double gap = gap_of(table.at(a.unite(b)), std::max(table.at(a), table.at(b)));
            if (gap > report.worst_gap) {
                report.worst_gap = gap;
                if (k <= 64) {
                    report.witness_a = a.bits();
                    report.witness_b = b.bits();
                }
            }
            ++report.pairs_checked;
        }
    }
    report.pass = report.worst_gap <= tol;
    return report;
}

}  // namespace ldrisk
