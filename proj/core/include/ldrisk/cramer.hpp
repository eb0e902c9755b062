#pragma once

#include <vector>

#include "ldrisk/families.hpp"
#include "ldrisk/state_space.hpp"

namespace ldrisk {

/// Finite-support law of a real step variable, required to sit on a regular
/// lattice (values = origin + k * spacing) so sample means admit exact
/// convolution.
class DiscreteRealLaw {
public:
    DiscreteRealLaw(std::vector<double> values, std::vector<double> probs);

    static DiscreteRealLaw bernoulli(double p);

    int size() const { return static_cast<int>(values_.size()); }
    double value(int i) const { return values_[static_cast<size_t>(i)]; }
    double prob(int i) const { return probs_[static_cast<size_t>(i)]; }

    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }
    double mean() const;
    /// True when all mass sits on one point; the rate degenerates to an
    /// indicator and is special-cased everywhere.
    bool degenerate() const;

    double lattice_origin() const { return origin_; }
    double lattice_spacing() const { return spacing_; }
    const std::vector<int>& lattice_steps() const { return steps_; }

private:
    std::vector<double> values_, probs_;  // sorted by value
    std::vector<int> steps_;
    double origin_ = 0.0, spacing_ = 1.0;
};

/// Cumulant generating function Lambda(y) = log E[e^{y xi}] (log-sum-exp).
double log_mgf(const DiscreteRealLaw& law, double y);

/// Legendre transform I*(x) = sup_y { x y - Lambda(y) } by golden-section
/// search over y (Lambda is convex, so the objective is concave). Outside
/// the support hull the sup is +inf; degenerate laws give the indicator
/// rate.
double legendre_transform(const DiscreteRealLaw& law, double x, double y_lo = -60.0,
                          double y_hi = 60.0, double tol = 1e-11);

/// Exact log pmf of the n-fold sum on its lattice: logpmf[j] is the log
/// probability that the sum sits at origin*n + j*spacing.
struct SampleMeanPmf {
    int n = 1;
    double origin = 0.0, spacing = 1.0;
    std::vector<double> logpmf;

    double mean_at(size_t j) const {
        return origin + spacing * static_cast<double>(j) / n;
    }
    /// log P(mean in (x - delta, x + delta)).
    double log_prob_in_ball(double x, double delta) const;
};

/// One cumulative convolution pass in log space, snapshotting the requested
/// horizons (sorted output, one entry per distinct horizon).
std::vector<SampleMeanPmf> sample_mean_pmfs(const DiscreteRealLaw& law,
                                            const std::vector<int>& horizons);

struct BallRateRow {
    double x = 0.0;
    double delta = 0.0;
    std::vector<int> horizons;
    std::vector<double> values;  // -(1/n) log P(mean in ball) per horizon
    double estimate = 0.0;       // liminf proxy: min over the tail window
};

struct CramerReport {
    bool degenerate = false;
    std::vector<double> grid;          // x values
    std::vector<double> rate_numeric;  // Legendre transform on the grid
    std::vector<BallRateRow> ball_rows;
    /// max over probe points of |ball estimate - numerical rate|
    double sup_gap = 0.0;
};

struct CramerOptions {
    std::vector<double> probe_x = {0.25, 0.5, 0.75};
    double delta = 0.05;
    std::vector<int> horizons = default_horizons(3, 12);
    int grid_points = 99;
    int tail_window = 4;
};

/// Rate-function demo for sample means: numerical Legendre transform on an
/// interior grid of the support hull, plus exact finite-n ball rates
/// -(1/n) log P(mean in B_delta(x)) at the probe points.
CramerReport cramer_demo(const DiscreteRealLaw& law, const CramerOptions& opts = {});

/// The sample-mean sequence projected onto a fixed grid (Voronoi cells of
/// the grid points), as a distribution sequence usable by the asymptotic
/// machinery. Laws at the hinted horizons are precomputed in one pass;
/// other horizons are derived on demand.
DistributionSequence sample_mean_family(const DiscreteRealLaw& law,
                                        const std::vector<double>& grid,
                                        const std::vector<int>& horizons_hint);

}  // namespace ldrisk
