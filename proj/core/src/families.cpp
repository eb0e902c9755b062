#include "ldrisk/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ldrisk/extended.hpp"

namespace ldrisk {

double LogLaw::log_mass(const Subset& a) const {
    std::vector<double> terms;
    for (int i : a.members()) terms.push_back(log_weights[static_cast<size_t>(i)]);
    return log_sum_exp(terms);
}

DistributionSequence::DistributionSequence(FiniteMetricSpace space,
                                           std::function<LogLaw(int)> generator, std::string name)
    : space_(std::move(space)), generator_(std::move(generator)), name_(std::move(name)) {
    if (!generator_) throw Error(Errc::invalid_argument, "missing generator");
}

LogLaw DistributionSequence::law(int n) const {
    if (n < 1) throw Error(Errc::horizon_missing, name_ + " has no law at n=" + std::to_string(n));
    LogLaw law = generator_(n);
    if (static_cast<int>(law.log_weights.size()) != space_.size())
        throw Error(Errc::invalid_argument, "generator returned a law of the wrong size");
    return law;
}

double DistributionSequence::log_prob(int n, const Subset& a) const {
    if (a.ground_size() != space_.size())
        throw Error(Errc::invalid_argument, "subset ground set does not match the space");
    return law(n).log_mass(a);
}

DistributionSequence monte_carlo_family(FiniteMetricSpace space,
                                        std::function<int(int, std::mt19937_64&)> sampler,
                                        long samples, std::uint64_t seed, std::string name) {
    if (!sampler) throw Error(Errc::invalid_argument, "missing sampler");
    if (samples < 1) throw Error(Errc::invalid_argument, "need at least one sample");
    const int k = space.size();
    auto generator = [sampler, samples, seed, k](int n) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n)));
        std::vector<long> counts(static_cast<size_t>(k), 0);
        for (long s = 0; s < samples; ++s) {
            int i = sampler(n, rng);
            if (i < 0 || i >= k) throw Error(Errc::unknown_point, std::to_string(i));
            ++counts[static_cast<size_t>(i)];
        }
        LogLaw law;
        law.log_weights.resize(static_cast<size_t>(k));
        law.std_err.resize(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            double p = static_cast<double>(counts[static_cast<size_t>(i)]) / samples;
            law.log_weights[static_cast<size_t>(i)] = p > 0 ? std::log(p) : neg_inf;
            law.std_err[static_cast<size_t>(i)] = std::sqrt(p * (1.0 - p) / samples);
        }
        return law;
    };
    return DistributionSequence(std::move(space), std::move(generator), std::move(name));
}

namespace {

void require_window(const HorizonEstimate& h) {
    if (h.values.empty()) throw Error(Errc::invalid_argument, "empty horizon grid");
}

size_t window_start(const HorizonEstimate& h) {
    size_t w = static_cast<size_t>(std::max(1, h.tail_window));
    return h.values.size() > w ? h.values.size() - w : 0;
}

}  // namespace

double HorizonEstimate::upper() const {
    require_window(*this);
    double m = neg_inf;
    for (size_t i = window_start(*this); i < values.size(); ++i) m = std::max(m, values[i]);
    return m;
}

double HorizonEstimate::lower() const {
    require_window(*this);
    double m = pos_inf;
    for (size_t i = window_start(*this); i < values.size(); ++i) m = std::min(m, values[i]);
    return m;
}

std::vector<double> HorizonEstimate::upper_envelope() const {
    std::vector<double> env(values.size());
    double m = neg_inf;
    for (size_t i = values.size(); i-- > 0;) {
        m = std::max(m, values[i]);
        env[i] = m;
    }
    return env;
}

std::vector<double> HorizonEstimate::lower_envelope() const {
    std::vector<double> env(values.size());
    double m = pos_inf;
    for (size_t i = values.size(); i-- > 0;) {
        m = std::min(m, values[i]);
        env[i] = m;
    }
    return env;
}

bool HorizonEstimate::any_flagged_in_window() const {
    require_window(*this);
    for (size_t i = window_start(*this); i < flagged.size(); ++i)
        if (flagged[i]) return true;
    return false;
}

std::vector<int> default_horizons(int k_min, int k_max) {
    if (k_min < 0 || k_max < k_min || k_max > 30)
        throw Error(Errc::invalid_argument, "bad horizon exponent range");
    std::vector<int> out;
    for (int k = k_min; k <= k_max; ++k) out.push_back(1 << k);
    return out;
}

namespace {

double entropy_at(const LogLaw& law, const BoundedFunction& f, int n) {
    std::vector<double> terms(law.log_weights.size());
    for (size_t i = 0; i < law.log_weights.size(); ++i) {
        double lw = law.log_weights[i];
        terms[i] = lw == neg_inf ? neg_inf : n * f[static_cast<int>(i)] + lw;
    }
    return log_sum_exp(terms) / n;
}

/// Worst-case shift of the entropy value if the truncated mass sat at the
/// maximum of f: used only to decide the TruncationDominates flag.
bool truncation_dominates(const LogLaw& law, const BoundedFunction& f, int n, double value,
                          double tol) {
    if (!(law.mass_defect > 0)) return false;
    double fmax = neg_inf;
    for (int i = 0; i < f.size(); ++i) fmax = std::max(fmax, f[i]);
    double with_defect =
        log_add_exp(n * value, std::log(law.mass_defect) + n * fmax) / n;
    return std::fabs(with_defect - value) > tol;
}

}  // namespace

HorizonEstimate asymptotic_entropy(const DistributionSequence& family, const BoundedFunction& f,
                                   const std::vector<int>& horizons,
                                   const AsymptoticOptions& opts) {
    if (horizons.empty()) throw Error(Errc::invalid_argument, "empty horizon grid");
    if (f.size() != family.space().size())
        throw Error(Errc::invalid_argument, "function size does not match the space");
    HorizonEstimate h;
    h.horizons = horizons;
    h.tail_window = opts.tail_window;
    for (int n : horizons) {
        LogLaw law = family.law(n);
        double v = entropy_at(law, f, n);
        h.values.push_back(v);
        h.flagged.push_back(truncation_dominates(law, f, n, v, opts.truncation_tol) ? 1 : 0);
    }
    return h;
}

HorizonEstimate robust_asymptotic_entropy(const std::vector<DistributionSequence>& families,
                                          const BoundedFunction& f,
                                          const std::vector<int>& horizons,
                                          const AsymptoticOptions& opts) {
    if (families.empty()) throw Error(Errc::invalid_argument, "empty family set");
    HorizonEstimate h;
    h.horizons = horizons;
    h.tail_window = opts.tail_window;
    h.values.assign(horizons.size(), neg_inf);
    h.flagged.assign(horizons.size(), 0);
    for (const auto& family : families) {
        HorizonEstimate one = asymptotic_entropy(family, f, horizons, opts);
        for (size_t i = 0; i < horizons.size(); ++i) {
            h.values[i] = std::max(h.values[i], one.values[i]);
            h.flagged[i] = h.flagged[i] || one.flagged[i];
        }
    }
    return h;
}

namespace {

/// log P(X_n = n) = log(1 - e^{-n}/(1-e^{-n}) + e^{-n^2}), evaluated via
/// log1p since the correction is tiny already for moderate n.
double naturals_diagonal_log(int n) {
    double en = std::exp(-static_cast<double>(n));
    double geom = en / (1.0 - en);
    double enn = std::exp(-static_cast<double>(n) * n);
    return std::log1p(-geom + enn);
}

}  // namespace

DistributionSequence counterexample_naturals(int m_max) {
    if (m_max < 2 || m_max > 4096)
        throw Error(Errc::invalid_argument, "m_max out of range");
    std::vector<double> coords(static_cast<size_t>(m_max));
    std::vector<std::string> labels(static_cast<size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        coords[static_cast<size_t>(m - 1)] = m;
        labels[static_cast<size_t>(m - 1)] = std::to_string(m);
    }
    FiniteMetricSpace space = FiniteMetricSpace::line(coords, std::move(labels));

    // The defining identity sum_{m != n} e^{-nm} = e^{-n}/(1-e^{-n}) - e^{-n^2}
    // is what makes the law a probability; spot-check it by direct summation
    // where the series is representable.
    for (int n : {1, 2, 3, 5, 8}) {
        double direct = 0.0;
        for (int m = 2000; m >= 1; --m)
            if (m != n) direct += std::exp(-static_cast<double>(n) * m);
        double en = std::exp(-static_cast<double>(n));
        double closed = en / (1.0 - en) - std::exp(-static_cast<double>(n) * n);
        if (std::fabs(direct - closed) > 1e-12)
            throw Error(Errc::invalid_argument,
                        "geometric identity failed at n=" + std::to_string(n));
    }

    auto generator = [m_max](int n) {
        LogLaw law;
        law.log_weights.resize(static_cast<size_t>(m_max));
        for (int m = 1; m <= m_max; ++m)
            law.log_weights[static_cast<size_t>(m - 1)] =
                m == n ? naturals_diagonal_log(n) : -static_cast<double>(n) * m;
        // truncated mass: the tail sum_{m > m_max} e^{-nm}, plus the
        // diagonal atom when it falls outside the truncation
        double en = std::exp(-static_cast<double>(n));
        double tail = std::exp(-static_cast<double>(n) * (m_max + 1)) / (1.0 - en);
        if (n > m_max) {
            double diag = std::exp(naturals_diagonal_log(n));
            double own = std::exp(-static_cast<double>(n) * n);
            law.mass_defect = std::min(1.0, tail + diag - own);
        } else {
            law.mass_defect = tail;
        }
        return law;
    };
    return DistributionSequence(std::move(space), std::move(generator),
                                "naturals(m_max=" + std::to_string(m_max) + ")");
}

std::vector<double> rational_enumeration(int q_count) {
    if (q_count < 1 || q_count > 256)
        throw Error(Errc::invalid_argument, "enumeration capped at 256 points");
    std::vector<double> out;
    for (int b = 1; static_cast<int>(out.size()) < q_count; ++b) {
        for (int a = -10 * b; a <= 10 * b && static_cast<int>(out.size()) < q_count; ++a) {
            if (std::gcd(std::abs(a), b) != 1 && !(a == 0 && b == 1)) continue;
            if (a == 0 && b != 1) continue;
            out.push_back(static_cast<double>(a) / b);
        }
    }
    return out;
}

DistributionSequence counterexample_rationals(int q_count) {
    std::vector<double> points = rational_enumeration(q_count);
    std::vector<std::string> labels(points.size());
    for (size_t i = 0; i < points.size(); ++i) labels[i] = "q" + std::to_string(i + 1);
    FiniteMetricSpace space = FiniteMetricSpace::line(points, std::move(labels));
    const int k = space.size();
    auto generator = [k](int n) {
        LogLaw law;
        law.log_weights.assign(static_cast<size_t>(k), neg_inf);
        law.log_weights[static_cast<size_t>((n - 1) % k)] = 0.0;  // exact point mass
        return law;
    };
    return DistributionSequence(std::move(space), std::move(generator),
                                "rationals(q_count=" + std::to_string(q_count) + ")");
}

}  // namespace ldrisk
