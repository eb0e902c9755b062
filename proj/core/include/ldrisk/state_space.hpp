#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldrisk/error.hpp"

namespace ldrisk {

/// A finite metric space given by point labels and a dense distance matrix.
/// Construction validates the metric axioms: zero diagonal, symmetry,
/// positivity off the diagonal and the triangle inequality (all within an
/// absolute tolerance, default 1e-12).
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::vector<std::string> labels,
                      const std::vector<std::vector<double>>& dist,
                      double tol = 1e-12);

    /// Discrete metric on k points: d(x,y) = 1 for x != y.
    static FiniteMetricSpace discrete(int k);

    /// Points on the real line with the induced metric |x - y|.
    static FiniteMetricSpace line(const std::vector<double>& coords);
    static FiniteMetricSpace line(const std::vector<double>& coords,
                                  std::vector<std::string> labels);

    int size() const { return size_; }
    const std::string& label(int i) const { return labels_[static_cast<size_t>(i)]; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Index of a labelled point; throws UnknownPoint for foreign labels.
    int index_of(std::string_view label) const;

    double distance(int i, int j) const { return dist_[static_cast<size_t>(i) * size_ + j]; }

    /// Smallest nonzero pairwise distance. Balls of half this radius are
    /// singletons, which is what realizes the delta -> 0 limit on a finite
    /// space.
    double min_positive_distance() const;

    /// Sorted, deduplicated positive distances realized by the matrix.
    std::vector<double> realized_distances() const;

private:
    std::vector<std::string> labels_;
    std::vector<double> dist_;  // row-major size_*size_
    int size_ = 0;
};

/// Subset of a finite ground set, kept as a membership mask.
class Subset {
public:
    explicit Subset(int ground_size) : n_(ground_size), mask_(static_cast<size_t>(ground_size), 0) {}

    static Subset full(int ground_size);
    static Subset of(int ground_size, std::initializer_list<int> members);
    static Subset of(int ground_size, const std::vector<int>& members);
    /// Decode the low `ground_size` bits of a mask (bit i <=> point i).
    static Subset from_bits(int ground_size, std::uint64_t bits);

    int ground_size() const { return n_; }
    bool contains(int i) const { return mask_[static_cast<size_t>(i)] != 0; }
    void add(int i) { mask_[static_cast<size_t>(i)] = 1; }
    void remove(int i) { mask_[static_cast<size_t>(i)] = 0; }

    int count() const;
    bool empty() const { return count() == 0; }
    bool is_full() const { return count() == n_; }

    Subset complement() const;
    Subset unite(const Subset& other) const;
    Subset intersect(const Subset& other) const;
    bool subset_of(const Subset& other) const;

    /// Mask encoding, only defined for ground sets of at most 64 points.
    std::uint64_t bits() const;
    std::vector<int> members() const;

    bool operator==(const Subset&) const = default;

private:
    int n_;
    std::vector<char> mask_;
};

/// Open ball {y : d(center, y) < delta}. delta must be positive.
Subset ball(const FiniteMetricSpace& space, int center, double delta);

/// Metric interior and closure of a subset. The candidate radii are the
/// realized distances plus midpoints between consecutive ones (including
/// half the minimum positive distance), which exhausts all distinct balls
/// a finite space can produce.
std::pair<Subset, Subset> interior_closure(const FiniteMetricSpace& space, const Subset& a);

/// Real-valued function on the points of a space; all values finite.
class BoundedFunction {
public:
    explicit BoundedFunction(std::vector<double> values);

    static BoundedFunction constant(int size, double c);
    /// on * 1_A + off * 1_{A^c}
    static BoundedFunction two_level(const Subset& a, double on, double off);

    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
    std::span<const double> values() const { return v_; }

    bool operator==(const BoundedFunction&) const = default;

private:
    std::vector<double> v_;
};

BoundedFunction pointwise_max(const BoundedFunction& f, const BoundedFunction& g);
BoundedFunction shift(const BoundedFunction& f, double c);
/// lambda * f + (1 - lambda) * g
BoundedFunction blend(const BoundedFunction& f, const BoundedFunction& g, double lambda);
double sup_distance(const BoundedFunction& f, const BoundedFunction& g);

/// Probability weights on the points of a space; nonnegative, summing to 1
/// within 1e-12.
class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> weights, double tol = 1e-12);

    static ProbabilityVector uniform(int k);
    static ProbabilityVector point_mass(int k, int at);

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[static_cast<size_t>(i)]; }
    std::span<const double> weights() const { return w_; }

    double mass(const Subset& a) const;
    /// Elementwise log weight, -inf where the weight vanishes.
    std::vector<double> log_weights() const;

private:
    std::vector<double> w_;
};

}  // namespace ldrisk
