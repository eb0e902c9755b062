#include "ldrisk/cramer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>

#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"

namespace ldrisk {

DiscreteRealLaw::DiscreteRealLaw(std::vector<double> values, std::vector<double> probs) {
    if (values.empty() || values.size() != probs.size())
        throw Error(Errc::invalid_argument, "law needs matching nonempty values/probs");
    ProbabilityVector check(probs);  // nonnegative, sums to one
    std::vector<std::pair<double, double>> pairs;
    for (size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error(Errc::invalid_argument, "law values must be finite");
        if (probs[i] > 0.0) pairs.emplace_back(values[i], probs[i]);
    }
    if (pairs.empty()) throw Error(Errc::invalid_argument, "law has no support");
    std::sort(pairs.begin(), pairs.end());
    for (auto& [v, p] : pairs) {
        if (!values_.empty() && v == values_.back())
            probs_.back() += p;  // merge duplicated support points
        else {
            values_.push_back(v);
            probs_.push_back(p);
        }
    }

    origin_ = values_.front();
    if (values_.size() == 1) {
        spacing_ = 1.0;
        steps_ = {0};
        return;
    }
    spacing_ = pos_inf;
    for (size_t i = 1; i < values_.size(); ++i)
        spacing_ = std::min(spacing_, values_[i] - values_[i - 1]);
    for (double v : values_) {
        double d = v - origin_;
        double k = std::round(d / spacing_);
        if (std::abs(d - k * spacing_) > 1e-9 * std::max(1.0, std::abs(d)))
            throw Error(Errc::invalid_argument,
                        "law values must sit on a regular lattice for exact convolution");
        steps_.push_back(static_cast<int>(k));
    }
}

DiscreteRealLaw DiscreteRealLaw::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(Errc::invalid_argument, "bernoulli parameter outside [0, 1]");
    if (p == 0.0) return DiscreteRealLaw({0.0}, {1.0});
    if (p == 1.0) return DiscreteRealLaw({1.0}, {1.0});
    return DiscreteRealLaw({0.0, 1.0}, {1.0 - p, p});
}

double DiscreteRealLaw::mean() const {
    double m = 0.0;
    for (size_t i = 0; i < values_.size(); ++i) m += values_[i] * probs_[i];
    return m;
}

bool DiscreteRealLaw::degenerate() const { return values_.size() == 1; }

double log_mgf(const DiscreteRealLaw& law, double y) {
    std::vector<double> terms(static_cast<size_t>(law.size()));
    for (int i = 0; i < law.size(); ++i)
        terms[static_cast<size_t>(i)] = std::log(law.prob(i)) + y * law.value(i);
    return log_sum_exp(terms);
}

double legendre_transform(const DiscreteRealLaw& law, double x, double y_lo, double y_hi,
                          double tol) {
    if (law.degenerate()) return std::abs(x - law.min_value()) <= 1e-12 ? 0.0 : pos_inf;
    if (x < law.min_value() || x > law.max_value()) return pos_inf;
    if (x == law.min_value()) return -std::log(law.prob(0));
    if (x == law.max_value()) return -std::log(law.prob(law.size() - 1));

    auto objective = [&](double y) { return x * y - log_mgf(law, y); };
    // golden-section maximization of a concave objective
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = y_lo, b = y_hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    return objective((a + b) / 2.0);
}

double SampleMeanPmf::log_prob_in_ball(double x, double delta) const {
    std::vector<double> terms;
    for (size_t j = 0; j < logpmf.size(); ++j) {
        if (logpmf[j] == neg_inf) continue;
        if (std::abs(mean_at(j) - x) < delta) terms.push_back(logpmf[j]);
    }
    return log_sum_exp(terms);
}

std::vector<SampleMeanPmf> sample_mean_pmfs(const DiscreteRealLaw& law,
                                            const std::vector<int>& horizons) {
    std::vector<int> hs = horizons;
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    if (hs.empty() || hs.front() < 1)
        throw Error(Errc::horizon_missing, "horizons must be positive");

    const auto& steps = law.lattice_steps();
    const int max_step = steps.back();
    std::vector<double> log_p(static_cast<size_t>(law.size()));
    for (int i = 0; i < law.size(); ++i) log_p[static_cast<size_t>(i)] = std::log(law.prob(i));

    std::vector<SampleMeanPmf> out;
    std::vector<double> cur(static_cast<size_t>(max_step) + 1, neg_inf);
    for (int i = 0; i < law.size(); ++i) cur[static_cast<size_t>(steps[static_cast<size_t>(i)])] = log_p[static_cast<size_t>(i)];

    auto snapshot = [&](int n) {
        out.push_back({n, law.lattice_origin(), law.lattice_spacing(), cur});
    };
    if (hs.front() == 1) snapshot(1);

    for (int n = 2; n <= hs.back(); ++n) {
        std::vector<double> next(cur.size() + static_cast<size_t>(max_step), neg_inf);
        for (int i = 0; i < law.size(); ++i) {
            const size_t k = static_cast<size_t>(steps[static_cast<size_t>(i)]);
            const double lp = log_p[static_cast<size_t>(i)];
            for (size_t j = 0; j < cur.size(); ++j) {
                if (cur[j] == neg_inf) continue;
                next[j + k] = log_add_exp(next[j + k], cur[j] + lp);
            }
        }
        cur = std::move(next);
        if (std::binary_search(hs.begin(), hs.end(), n)) snapshot(n);
    }
    return out;
}

CramerReport cramer_demo(const DiscreteRealLaw& law, const CramerOptions& opts) {
    if (opts.grid_points < 1 || opts.tail_window < 1 || !(opts.delta > 0.0))
        throw Error(Errc::invalid_argument, "bad demo options");
    CramerReport report;
    report.degenerate = law.degenerate();

    if (report.degenerate) {
        report.grid = {law.min_value()};
        report.rate_numeric = {0.0};
    } else {
        const double lo = law.min_value(), hi = law.max_value();
        for (int i = 1; i <= opts.grid_points; ++i) {
            double x = lo + (hi - lo) * i / (opts.grid_points + 1);
            report.grid.push_back(x);
            report.rate_numeric.push_back(legendre_transform(law, x));
        }
    }

    const auto pmfs = sample_mean_pmfs(law, opts.horizons);
    for (double x : opts.probe_x) {
        BallRateRow row;
        row.x = x;
        row.delta = opts.delta;
        for (const auto& pmf : pmfs) {
            row.horizons.push_back(pmf.n);
            double lp = pmf.log_prob_in_ball(x, opts.delta);
            row.values.push_back(lp == neg_inf ? pos_inf : -lp / pmf.n);
        }
        const size_t window = std::min(row.values.size(), static_cast<size_t>(opts.tail_window));
        double est = pos_inf;
        for (size_t i = row.values.size() - window; i < row.values.size(); ++i)
            est = std::min(est, row.values[i]);
        row.estimate = est;
        report.sup_gap = std::max(report.sup_gap, abs_gap(est, legendre_transform(law, x)));
        report.ball_rows.push_back(std::move(row));
    }
    return report;
}

DistributionSequence sample_mean_family(const DiscreteRealLaw& law,
                                        const std::vector<double>& grid,
                                        const std::vector<int>& horizons_hint) {
    if (grid.empty()) throw Error(Errc::invalid_argument, "empty grid");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw Error(Errc::invalid_argument, "grid must be strictly increasing");

    std::vector<double> mids;
    for (size_t i = 1; i < grid.size(); ++i) mids.push_back((grid[i - 1] + grid[i]) / 2.0);

    auto aggregate = [grid, mids](const SampleMeanPmf& pmf) {
        std::vector<std::vector<double>> cells(grid.size());
        for (size_t j = 0; j < pmf.logpmf.size(); ++j) {
            if (pmf.logpmf[j] == neg_inf) continue;
            double m = pmf.mean_at(j);
            size_t cell = static_cast<size_t>(
                std::upper_bound(mids.begin(), mids.end(), m) - mids.begin());
            cells[cell].push_back(pmf.logpmf[j]);
        }
        LogLaw out;
        for (auto& cell : cells) out.log_weights.push_back(log_sum_exp(cell));
        return out;
    };

    auto cache = std::make_shared<std::map<int, LogLaw>>();
    auto mtx = std::make_shared<std::mutex>();
    for (const auto& pmf : sample_mean_pmfs(law, horizons_hint))
        cache->emplace(pmf.n, aggregate(pmf));

    auto generator = [law, aggregate, cache, mtx](int n) {
        std::lock_guard<std::mutex> lock(*mtx);
        auto it = cache->find(n);
        if (it == cache->end())
            it = cache->emplace(n, aggregate(sample_mean_pmfs(law, {n}).front())).first;
        return it->second;
    };
    return DistributionSequence(FiniteMetricSpace::line(grid), std::move(generator),
                                "sample_mean");
}

}  // namespace ldrisk
