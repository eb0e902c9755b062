#include "ldrisk/risk_measure.hpp"

#include <algorithm>
#include <cmath>

#include "ldrisk/extended.hpp"

namespace ldrisk {

RiskMeasure RiskMeasure::atomic(FiniteMetricSpace space, std::vector<double> gamma) {
    if (static_cast<int>(gamma.size()) != space.size())
        throw Error(Errc::invalid_argument, "gamma size does not match the space");
    double lo = pos_inf;
    for (double g : gamma) {
        if (std::isnan(g) || g == neg_inf)
            throw Error(Errc::invalid_argument, "gamma must live in [0, +inf]");
        lo = std::min(lo, g);
    }
    if (lo == pos_inf)
        throw Error(Errc::invalid_argument, "gamma must be finite somewhere");
    // normalize so the minimum is exactly 0; this is what phi(0) = 0 means
    for (double& g : gamma)
        if (g != pos_inf) g -= lo;
    RiskMeasure phi(std::move(space));
    phi.kind_ = Kind::atomic;
    phi.name_ = "atomic";
    phi.gamma_ = std::move(gamma);
    return phi;
}

RiskMeasure RiskMeasure::entropic(FiniteMetricSpace space, ProbabilityVector law, int horizon) {
    if (law.size() != space.size())
        throw Error(Errc::invalid_argument, "law size does not match the space");
    if (horizon < 1) throw Error(Errc::horizon_missing, "no law at horizon " + std::to_string(horizon));
    RiskMeasure phi(std::move(space));
    phi.kind_ = Kind::entropic;
    phi.name_ = "entropic(n=" + std::to_string(horizon) + ")";
    phi.log_laws_.push_back(law.log_weights());
    phi.laws_.push_back(std::move(law));
    phi.horizon_ = horizon;
    return phi;
}

RiskMeasure RiskMeasure::shortfall(FiniteMetricSpace space, ProbabilityVector law,
                                   LossExponent loss, int horizon) {
    if (law.size() != space.size())
        throw Error(Errc::invalid_argument, "law size does not match the space");
    if (horizon < 1) throw Error(Errc::horizon_missing, "no law at horizon " + std::to_string(horizon));
    RiskMeasure phi(std::move(space));
    phi.kind_ = Kind::shortfall;
    phi.name_ = "shortfall(" + loss.name() + ",n=" + std::to_string(horizon) + ")";
    phi.log_laws_.push_back(law.log_weights());
    phi.laws_.push_back(std::move(law));
    phi.loss_ = std::move(loss);
    phi.horizon_ = horizon;
    return phi;
}

RiskMeasure RiskMeasure::robust_entropic(FiniteMetricSpace space,
                                         std::vector<ProbabilityVector> laws, int horizon) {
    if (laws.empty()) throw Error(Errc::invalid_argument, "robust family must be nonempty");
    for (const auto& law : laws)
        if (law.size() != space.size())
            throw Error(Errc::invalid_argument, "law size does not match the space");
    if (horizon < 1) throw Error(Errc::horizon_missing, "no laws at horizon " + std::to_string(horizon));
    RiskMeasure phi(std::move(space));
    phi.kind_ = Kind::robust_entropic;
    phi.name_ = "robust_entropic(m=" + std::to_string(laws.size()) +
                ",n=" + std::to_string(horizon) + ")";
    for (const auto& law : laws) phi.log_laws_.push_back(law.log_weights());
    phi.laws_ = std::move(laws);
    phi.horizon_ = horizon;
    return phi;
}

RiskMeasure RiskMeasure::custom(FiniteMetricSpace space,
                                std::function<double(const BoundedFunction&)> evaluator,
                                std::string name) {
    if (!evaluator) throw Error(Errc::invalid_argument, "missing evaluator");
    const double at_zero = evaluator(BoundedFunction::constant(space.size(), 0.0));
    if (std::fabs(at_zero) > 1e-9)
        throw Error(Errc::invalid_argument,
                    "evaluator is not normalized: phi(0) = " + format_real(at_zero));
    RiskMeasure phi(std::move(space));
    phi.kind_ = Kind::custom;
    phi.name_ = std::move(name);
    phi.eval_ = std::move(evaluator);
    return phi;
}

namespace {

double entropic_value(const BoundedFunction& f, const std::vector<double>& log_law, double n) {
    std::vector<double> terms(static_cast<size_t>(f.size()));
    for (int i = 0; i < f.size(); ++i) {
        double lw = log_law[static_cast<size_t>(i)];
        terms[static_cast<size_t>(i)] = lw == neg_inf ? neg_inf : n * f[i] + lw;
    }
    return log_sum_exp(terms) / n;
}

}  // namespace

double RiskMeasure::evaluate(const BoundedFunction& f) const {
    if (f.size() != space_.size())
        throw Error(Errc::invalid_argument, "function size does not match the space");
    switch (kind_) {
        case Kind::atomic: {
            double m = neg_inf;
            for (int i = 0; i < f.size(); ++i)
                m = std::max(m, add_penalty(f[i], -gamma_[static_cast<size_t>(i)]));
            return m;
        }
        case Kind::entropic:
            return entropic_value(f, log_laws_[0], horizon_);
        case Kind::shortfall: {
            DiscreteLogLaw z;
            z.outcomes.assign(f.values().begin(), f.values().end());
            z.log_weights = log_laws_[0];
            return shortfall_risk(z, loss_, horizon_);
        }
        case Kind::robust_entropic: {
            double m = neg_inf;
            for (const auto& lw : log_laws_) m = std::max(m, entropic_value(f, lw, horizon_));
            return m;
        }
        case Kind::custom:
            return eval_(f);
    }
    throw Error(Errc::invalid_argument, "unreachable kind");
}

int RiskMeasure::horizon() const {
    if (horizon_ < 1) throw Error(Errc::horizon_missing, name_ + " carries no horizon");
    return horizon_;
}

const std::vector<double>& RiskMeasure::atom_penalties() const {
    if (kind_ != Kind::atomic)
        throw Error(Errc::invalid_argument, "atom penalties only exist for atomic measures");
    return gamma_;
}

BoundedFunction random_function(int size, std::mt19937_64& rng, double bound) {
    std::uniform_real_distribution<double> u(-bound, bound);
    std::vector<double> v(static_cast<size_t>(size));
    for (double& x : v) x = u(rng);
    return BoundedFunction(std::move(v));
}

namespace {

void track(CheckReport& report, double gap, const char* clause, const BoundedFunction& f,
           const BoundedFunction* g, double scalar) {
    if (gap > report.worst_gap) {
        report.worst_gap = gap;
        report.detail = clause;
        report.witness_f.assign(f.values().begin(), f.values().end());
        if (g)
            report.witness_g.assign(g->values().begin(), g->values().end());
        else
            report.witness_g.clear();
        report.witness_scalar = scalar;
    }
}

double resolve_tol(const RiskMeasure& phi, double tol) {
    return tol < 0 ? phi.default_tolerance() : tol;
}

}  // namespace

CheckReport check_monetary_axioms(const RiskMeasure& phi, int trials, std::uint64_t seed,
                                  double bound, double tol) {
    CheckReport report;
    report.check = "monetary_axioms";
    report.trials = trials;
    report.tolerance = resolve_tol(phi, tol);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uc(-bound, bound);
    std::uniform_real_distribution<double> upos(0.0, bound);

    const int k = phi.space().size();
    const BoundedFunction zero = BoundedFunction::constant(k, 0.0);
    track(report, std::fabs(phi(zero)), "normalization phi(0)=0", zero, nullptr, 0.0);

    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = random_function(k, rng, bound);
        double c = uc(rng);
        double gap_t = std::fabs(phi(shift(f, c)) - (phi(f) + c));
        track(report, gap_t, "translation phi(f+c)=phi(f)+c", f, nullptr, c);

        // g dominates f pointwise by construction
        std::vector<double> gv(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) gv[static_cast<size_t>(i)] = f[i] + upos(rng);
        BoundedFunction g(std::move(gv));
        double gap_m = phi(f) - phi(g);
        if (gap_m > 0) track(report, gap_m, "monotonicity f<=g => phi(f)<=phi(g)", f, &g, 0.0);
    }
    report.pass = report.worst_gap <= report.tolerance;
    return report;
}

CheckReport check_max_stability(const RiskMeasure& phi, int trials, std::uint64_t seed,
                                double bound, double tol) {
    CheckReport report;
    report.check = "max_stability";
    report.trials = trials;
    report.tolerance = resolve_tol(phi, tol);
    std::mt19937_64 rng(seed);
    const int k = phi.space().size();

    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = random_function(k, rng, bound);
        BoundedFunction g = random_function(k, rng, bound);
        double lhs = phi(pointwise_max(f, g));
        double rhs = std::max(phi(f), phi(g));
        track(report, lhs - rhs, "phi(f v g) = phi(f) v phi(g)", f, &g, 0.0);

        // acceptance-set closure: recentre both positions to the boundary
        // of acceptability and test that their maximum stays acceptable
        BoundedFunction fa = shift(f, -phi(f));
        BoundedFunction ga = shift(g, -phi(g));
        double acc = phi(pointwise_max(fa, ga));
        track(report, acc, "acceptance set closed under v", fa, &ga, 0.0);
    }
    report.pass = report.worst_gap <= report.tolerance;
    return report;
}

CheckReport check_convexity(const RiskMeasure& phi, int trials, std::uint64_t seed, double bound,
                            double tol) {
    CheckReport report;
    report.check = "convexity";
    report.trials = trials;
    report.tolerance = resolve_tol(phi, tol);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ul(0.0, 1.0);
    const int k = phi.space().size();

    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = random_function(k, rng, bound);
        BoundedFunction g = random_function(k, rng, bound);
        double lambda = t == 0 ? 0.0 : (t == 1 ? 1.0 : ul(rng));
        double lhs = phi(blend(f, g, lambda));
        double rhs = lambda * phi(f) + (1.0 - lambda) * phi(g);
        track(report, lhs - rhs, "phi(lam f + (1-lam) g) <= lam phi(f) + (1-lam) phi(g)", f, &g,
              lambda);
    }
    report.pass = report.worst_gap <= report.tolerance;
    return report;
}

}  // namespace ldrisk
