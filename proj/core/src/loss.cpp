#include "ldrisk/loss.hpp"

#include <algorithm>
#include <cmath>

namespace ldrisk {

namespace {

double signed_power(double x, double p) {
    if (x == 0.0) return 0.0;
    double m = std::pow(std::fabs(x), p);
    return x > 0 ? m : -m;
}

}  // namespace

LossExponent LossExponent::linear() {
    LossExponent w;
    w.kind_ = Kind::linear_scaled;
    w.name_ = "linear_scaled";
    w.p_ = 1.0;
    return w;
}

LossExponent LossExponent::power(double p) {
    if (!(p > 0) || !std::isfinite(p))
        throw Error(Errc::invalid_argument, "power exponent must be positive and finite");
    LossExponent w;
    w.kind_ = Kind::power_scaled;
    w.name_ = "power_scaled(p=" + format_real(p) + ")";
    w.p_ = p;
    return w;
}

LossExponent LossExponent::transform(std::function<double(double)> v,
                                     std::function<double(double)> v_inverse, std::string name) {
    if (!v || !v_inverse) throw Error(Errc::invalid_argument, "transform needs both directions");
    static const double probes[] = {-10.0, -5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    if (std::fabs(v(0.0)) > 1e-12)
        throw Error(Errc::not_a_bijection, name + ": v(0) != 0");
    double prev = neg_inf;
    for (double t : probes) {
        double vt = v(t);
        if (!std::isfinite(vt) || vt <= prev)
            throw Error(Errc::not_a_bijection, name + ": v is not strictly increasing");
        prev = vt;
        double back = v(v_inverse(t));
        if (std::fabs(back - t) > 1e-8 * std::max(1.0, std::fabs(t)))
            throw Error(Errc::not_a_bijection, name + ": v(v^{-1}(t)) != t at t=" + format_real(t));
    }
    LossExponent w;
    w.kind_ = Kind::transform_scaled;
    w.name_ = std::move(name);
    w.fwd_ = std::move(v);
    w.inv_ = std::move(v_inverse);
    return w;
}

LossExponent LossExponent::transform_power(double q) {
    if (!(q > 0) || !std::isfinite(q))
        throw Error(Errc::invalid_argument, "transform exponent must be positive and finite");
    return transform([q](double y) { return signed_power(y, q); },
                     [q](double t) { return signed_power(t, 1.0 / q); },
                     "transform_power(q=" + format_real(q) + ")");
}

LossExponent LossExponent::table(std::vector<double> xs, std::vector<double> ws, double upper) {
    if (xs.empty() || xs.size() != ws.size())
        throw Error(Errc::invalid_argument, "table needs matching nonempty xs/ws");
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ws[i]))
            throw Error(Errc::invalid_argument, "table breakpoints and values must be finite");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw Error(Errc::invalid_argument, "table breakpoints must be strictly increasing");
        if (i > 0 && ws[i] < ws[i - 1])
            throw Error(Errc::invalid_argument, "table values must be nondecreasing");
    }
    if (!(upper >= ws.back()))
        throw Error(Errc::invalid_argument, "table upper value must dominate the last step");
    LossExponent w;
    w.kind_ = Kind::custom_table;
    w.name_ = "custom_table";
    w.xs_ = std::move(xs);
    w.ws_ = std::move(ws);
    w.upper_ = upper;
    if (w.base(0.0) != 0.0) throw Error(Errc::invalid_argument, "loss table must have w(0) = 0");
    return w;
}

double LossExponent::base(double x) const {
    switch (kind_) {
        case Kind::linear_scaled:
            return x;
        case Kind::power_scaled:
            return signed_power(x, p_);
        case Kind::transform_scaled:
            if (x == pos_inf) return pos_inf;
            if (x == neg_inf) return neg_inf;
            return inv_(x);
        case Kind::custom_table: {
            if (x > xs_.back()) return upper_;
            // left-continuous step: value of the first breakpoint at or above x
            auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
            return ws_[static_cast<size_t>(it - xs_.begin())];
        }
    }
    return 0.0;
}

double LossExponent::base_inverse(double y) const {
    switch (kind_) {
        case Kind::linear_scaled:
            return y;
        case Kind::power_scaled:
            if (y == pos_inf) return pos_inf;
            if (y == neg_inf) return neg_inf;
            return signed_power(y, 1.0 / p_);
        case Kind::transform_scaled:
            if (y == pos_inf) return pos_inf;
            if (y == neg_inf) return neg_inf;
            return fwd_(y);
        case Kind::custom_table:
            return generalized_inverse_table(xs_, ws_, upper_, y);
    }
    return 0.0;
}

double LossExponent::at(double x, double n) const {
    if (!(n > 0)) throw Error(Errc::invalid_argument, "horizon must be positive");
    return n * base(x);  // n * (+inf) = +inf
}

double LossExponent::inverse_at(double y, double n) const {
    if (!(n > 0)) throw Error(Errc::invalid_argument, "horizon must be positive");
    return base_inverse(y / n);
}

double generalized_inverse_table(const std::vector<double>& xs, const std::vector<double>& ws,
                                 double upper, double y) {
    if (upper <= y) return pos_inf;  // {w <= y} is unbounded above
    // last breakpoint whose value still satisfies w <= y
    auto it = std::upper_bound(ws.begin(), ws.end(), y);
    if (it == ws.begin()) return neg_inf;  // sup of the empty set
    return xs[static_cast<size_t>(it - ws.begin()) - 1];
}

double DiscreteLogLaw::min_outcome() const {
    return *std::min_element(outcomes.begin(), outcomes.end());
}

double DiscreteLogLaw::max_outcome() const {
    return *std::max_element(outcomes.begin(), outcomes.end());
}

double DiscreteLogLaw::log_total() const { return log_sum_exp(log_weights); }

double log_shortfall_constraint(const DiscreteLogLaw& z, const LossExponent& loss, double horizon,
                                double m) {
    std::vector<double> terms;
    terms.reserve(z.outcomes.size());
    for (size_t i = 0; i < z.outcomes.size(); ++i) {
        double lw = z.log_weights[i];
        if (lw == neg_inf) continue;  // zero mass absorbs even an infinite loss
        double w = loss.at(z.outcomes[i] - m, horizon);
        if (w == pos_inf) return pos_inf;
        terms.push_back(lw + w);
    }
    return log_sum_exp(terms);
}

double shortfall_risk(const DiscreteLogLaw& z, const LossExponent& loss, double horizon,
                      const ShortfallOptions& opts) {
    if (z.outcomes.empty() || z.outcomes.size() != z.log_weights.size())
        throw Error(Errc::invalid_argument, "law needs matching nonempty outcomes/weights");
    for (double v : z.outcomes)
        if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "outcomes must be finite");
    if (!(horizon > 0) || !std::isfinite(horizon))
        throw Error(Errc::invalid_argument, "horizon must be positive and finite");

    const double log_total = z.log_total();
    if (log_total == neg_inf) throw Error(Errc::invalid_argument, "law carries no mass");

    const double t0 = loss.base_inverse(0.0);  // sup{t : w(t) <= 0}
    if (t0 == pos_inf)
        throw Error(Errc::no_bracket, "w never exceeds 0, the constraint cannot bind");

    const double lo0 = z.min_outcome();
    const double hi0 = z.max_outcome();
    if (lo0 == hi0) {
        // constant law: inf{m : w_n(c - m) <= -log E} in closed form
        double shiftv = loss.inverse_at(-log_total, horizon);
        if (shiftv == neg_inf)
            throw Error(Errc::no_bracket, "loss cannot discount the law's excess mass");
        return lo0 - shiftv;
    }

    // w's terminal level decides whether the constraint can bind at all
    // once the law is a strict sub-probability.
    const double w_sup = loss.base(pos_inf);
    if (add_penalty(horizon * w_sup, log_total) <= 0.0)
        throw Error(Errc::no_bracket, "constraint stays slack for every shift");

    auto feasible = [&](double m) { return log_shortfall_constraint(z, loss, horizon, m) <= 0.0; };

    double hi = hi0 + 1.0;
    double step = 1.0;
    int guard = 0;
    while (!feasible(hi)) {
        hi += step;
        step *= 2;
        if (++guard > 120)
            throw Error(Errc::no_bracket, "no feasible shift found while expanding upward");
    }
    double lo = std::min(lo0 - std::max(t0, 0.0) - 1.0, hi - 1.0);
    step = 1.0;
    guard = 0;
    while (feasible(lo)) {
        lo -= step;
        step *= 2;
        if (++guard > 120)
            throw Error(Errc::no_bracket, "constraint appears slack for arbitrarily low shifts");
    }

    for (int it = 0; it < opts.max_iter && hi - lo > opts.tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace ldrisk
