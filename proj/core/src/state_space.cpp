#include "ldrisk/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ldrisk/extended.hpp"

namespace ldrisk {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     const std::vector<std::vector<double>>& dist, double tol)
    : labels_(std::move(labels)), size_(static_cast<int>(labels_.size())) {
    if (size_ == 0) throw Error(Errc::invalid_argument, "a space needs at least one point");
    if (static_cast<int>(dist.size()) != size_)
        throw Error(Errc::invalid_argument, "distance matrix row count does not match labels");
    for (const auto& row : dist)
        if (static_cast<int>(row.size()) != size_)
            throw Error(Errc::invalid_argument, "distance matrix is not square");
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j)
            if (!std::isfinite(dist[i][j]))
                throw Error(Errc::invalid_argument, "distances must be finite");

    for (int i = 0; i < size_; ++i)
        if (std::fabs(dist[i][i]) > tol)
            throw Error(Errc::nonzero_diagonal,
                        "d(" + labels_[i] + "," + labels_[i] + ") = " + format_real(dist[i][i]));
    for (int i = 0; i < size_; ++i)
        for (int j = i + 1; j < size_; ++j) {
            if (std::fabs(dist[i][j] - dist[j][i]) > tol)
                throw Error(Errc::asymmetric_distance,
                            "d(" + labels_[i] + "," + labels_[j] + ") != d(" + labels_[j] + "," +
                                labels_[i] + ")");
            if (dist[i][j] <= tol)
                throw Error(Errc::invalid_argument,
                            "distinct points " + labels_[i] + "," + labels_[j] +
                                " are at distance " + format_real(dist[i][j]));
        }
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j)
            for (int k = 0; k < size_; ++k)
                if (dist[i][k] > dist[i][j] + dist[j][k] + tol)
                    throw Error(Errc::triangle_violation,
                                "d(" + labels_[i] + "," + labels_[k] + ") > d(" + labels_[i] + "," +
                                    labels_[j] + ") + d(" + labels_[j] + "," + labels_[k] + ")");

    dist_.resize(static_cast<size_t>(size_) * size_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) dist_[static_cast<size_t>(i) * size_ + j] = dist[i][j];
}

FiniteMetricSpace FiniteMetricSpace::discrete(int k) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) labels.push_back("x" + std::to_string(i + 1));
    std::vector<std::vector<double>> dist(static_cast<size_t>(k),
                                          std::vector<double>(static_cast<size_t>(k), 1.0));
    for (int i = 0; i < k; ++i) dist[static_cast<size_t>(i)][static_cast<size_t>(i)] = 0.0;
    return FiniteMetricSpace(std::move(labels), dist);
}

FiniteMetricSpace FiniteMetricSpace::line(const std::vector<double>& coords) {
    std::vector<std::string> labels;
    labels.reserve(coords.size());
    for (double c : coords) labels.push_back(format_real(c));
    return line(coords, std::move(labels));
}

FiniteMetricSpace FiniteMetricSpace::line(const std::vector<double>& coords,
                                          std::vector<std::string> labels) {
    const size_t k = coords.size();
    std::vector<std::vector<double>> dist(k, std::vector<double>(k, 0.0));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) dist[i][j] = std::fabs(coords[i] - coords[j]);
    return FiniteMetricSpace(std::move(labels), dist);
}

int FiniteMetricSpace::index_of(std::string_view label) const {
    for (int i = 0; i < size_; ++i)
        if (labels_[static_cast<size_t>(i)] == label) return i;
    throw Error(Errc::unknown_point, std::string(label));
}

double FiniteMetricSpace::min_positive_distance() const {
    double m = pos_inf;
    for (int i = 0; i < size_; ++i)
        for (int j = i + 1; j < size_; ++j) m = std::min(m, distance(i, j));
    return m;  // +inf on one-point spaces: every ball is already a singleton
}

std::vector<double> FiniteMetricSpace::realized_distances() const {
    std::vector<double> out;
    for (int i = 0; i < size_; ++i)
        for (int j = i + 1; j < size_; ++j) out.push_back(distance(i, j));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Subset Subset::full(int ground_size) {
    Subset s(ground_size);
    std::fill(s.mask_.begin(), s.mask_.end(), char(1));
    return s;
}

Subset Subset::of(int ground_size, std::initializer_list<int> members) {
    return of(ground_size, std::vector<int>(members));
}

Subset Subset::of(int ground_size, const std::vector<int>& members) {
    Subset s(ground_size);
    for (int i : members) {
        if (i < 0 || i >= ground_size) throw Error(Errc::unknown_point, std::to_string(i));
        s.add(i);
    }
    return s;
}

Subset Subset::from_bits(int ground_size, std::uint64_t bits) {
    Subset s(ground_size);
    for (int i = 0; i < ground_size && i < 64; ++i)
        if (bits & (std::uint64_t(1) << i)) s.add(i);
    return s;
}

int Subset::count() const {
    return static_cast<int>(std::count(mask_.begin(), mask_.end(), char(1)));
}

Subset Subset::complement() const {
    Subset s(n_);
    for (int i = 0; i < n_; ++i) s.mask_[static_cast<size_t>(i)] = !mask_[static_cast<size_t>(i)];
    return s;
}

Subset Subset::unite(const Subset& other) const {
    Subset s(n_);
    for (int i = 0; i < n_; ++i)
        s.mask_[static_cast<size_t>(i)] =
            mask_[static_cast<size_t>(i)] || other.mask_[static_cast<size_t>(i)];
    return s;
}

Subset Subset::intersect(const Subset& other) const {
    Subset s(n_);
    for (int i = 0; i < n_; ++i)
        s.mask_[static_cast<size_t>(i)] =
            mask_[static_cast<size_t>(i)] && other.mask_[static_cast<size_t>(i)];
    return s;
}

bool Subset::subset_of(const Subset& other) const {
    for (int i = 0; i < n_; ++i)
        if (mask_[static_cast<size_t>(i)] && !other.mask_[static_cast<size_t>(i)]) return false;
    return true;
}

std::uint64_t Subset::bits() const {
    if (n_ > 64) throw Error(Errc::invalid_argument, "mask encoding needs at most 64 points");
    std::uint64_t b = 0;
    for (int i = 0; i < n_; ++i)
        if (mask_[static_cast<size_t>(i)]) b |= std::uint64_t(1) << i;
    return b;
}

std::vector<int> Subset::members() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
        if (mask_[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

Subset ball(const FiniteMetricSpace& space, int center, double delta) {
    if (center < 0 || center >= space.size())
        throw Error(Errc::unknown_point, std::to_string(center));
    if (!(delta > 0)) throw Error(Errc::invalid_argument, "ball radius must be positive");
    Subset s(space.size());
    for (int i = 0; i < space.size(); ++i)
        if (space.distance(center, i) < delta) s.add(i);
    return s;
}

namespace {

std::vector<double> candidate_radii(const FiniteMetricSpace& space) {
    std::vector<double> d = space.realized_distances();
    std::vector<double> out;
    if (d.empty()) {
        out.push_back(1.0);  // one-point space
        return out;
    }
    out.push_back(d.front() / 2);
    for (size_t i = 0; i < d.size(); ++i) {
        out.push_back(d[i]);
        if (i + 1 < d.size()) out.push_back((d[i] + d[i + 1]) / 2);
    }
    out.push_back(d.back() * 2);
    return out;
}

}  // namespace

std::pair<Subset, Subset> interior_closure(const FiniteMetricSpace& space, const Subset& a) {
    if (a.ground_size() != space.size())
        throw Error(Errc::invalid_argument, "subset ground set does not match the space");
    const std::vector<double> radii = candidate_radii(space);
    Subset interior(space.size());
    for (int x = 0; x < space.size(); ++x) {
        for (double r : radii) {
            if (ball(space, x, r).subset_of(a)) {
                interior.add(x);
                break;
            }
        }
    }
    // cl(A) = (int(A^c))^c
    Subset closure(space.size());
    {
        const Subset ac = a.complement();
        Subset int_ac(space.size());
        for (int x = 0; x < space.size(); ++x) {
            for (double r : radii) {
                if (ball(space, x, r).subset_of(ac)) {
                    int_ac.add(x);
                    break;
                }
            }
        }
        closure = int_ac.complement();
    }
    return {interior, closure};
}

BoundedFunction::BoundedFunction(std::vector<double> values) : v_(std::move(values)) {
    if (v_.empty()) throw Error(Errc::invalid_argument, "empty function");
    for (double x : v_)
        if (!std::isfinite(x))
            throw Error(Errc::invalid_argument, "function values must be finite");
}

BoundedFunction BoundedFunction::constant(int size, double c) {
    return BoundedFunction(std::vector<double>(static_cast<size_t>(size), c));
}

BoundedFunction BoundedFunction::two_level(const Subset& a, double on, double off) {
    std::vector<double> v(static_cast<size_t>(a.ground_size()), off);
    for (int i : a.members()) v[static_cast<size_t>(i)] = on;
    return BoundedFunction(std::move(v));
}

BoundedFunction pointwise_max(const BoundedFunction& f, const BoundedFunction& g) {
    if (f.size() != g.size()) throw Error(Errc::invalid_argument, "size mismatch");
    std::vector<double> v(static_cast<size_t>(f.size()));
    for (int i = 0; i < f.size(); ++i) v[static_cast<size_t>(i)] = std::max(f[i], g[i]);
    return BoundedFunction(std::move(v));
}

BoundedFunction shift(const BoundedFunction& f, double c) {
    std::vector<double> v(static_cast<size_t>(f.size()));
    for (int i = 0; i < f.size(); ++i) v[static_cast<size_t>(i)] = f[i] + c;
    return BoundedFunction(std::move(v));
}

BoundedFunction blend(const BoundedFunction& f, const BoundedFunction& g, double lambda) {
    if (f.size() != g.size()) throw Error(Errc::invalid_argument, "size mismatch");
    std::vector<double> v(static_cast<size_t>(f.size()));
    for (int i = 0; i < f.size(); ++i)
        v[static_cast<size_t>(i)] = lambda * f[i] + (1.0 - lambda) * g[i];
    return BoundedFunction(std::move(v));
}

double sup_distance(const BoundedFunction& f, const BoundedFunction& g) {
    if (f.size() != g.size()) throw Error(Errc::invalid_argument, "size mismatch");
    double m = 0.0;
    for (int i = 0; i < f.size(); ++i) m = std::max(m, std::fabs(f[i] - g[i]));
    return m;
}

ProbabilityVector::ProbabilityVector(std::vector<double> weights, double tol)
    : w_(std::move(weights)) {
    if (w_.empty()) throw Error(Errc::invalid_argument, "empty probability vector");
    double sum = 0.0;
    for (double w : w_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw Error(Errc::invalid_argument, "weights must be nonnegative and finite");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > tol)
        throw Error(Errc::invalid_argument, "weights sum to " + format_real(sum) + ", not 1");
}

ProbabilityVector ProbabilityVector::uniform(int k) {
    return ProbabilityVector(std::vector<double>(static_cast<size_t>(k), 1.0 / k));
}

ProbabilityVector ProbabilityVector::point_mass(int k, int at) {
    std::vector<double> w(static_cast<size_t>(k), 0.0);
    w.at(static_cast<size_t>(at)) = 1.0;
    return ProbabilityVector(std::move(w));
}

double ProbabilityVector::mass(const Subset& a) const {
    if (a.ground_size() != size()) throw Error(Errc::invalid_argument, "size mismatch");
    double s = 0.0;
    for (int i : a.members()) s += w_[static_cast<size_t>(i)];
    return s;
}

std::vector<double> ProbabilityVector::log_weights() const {
    std::vector<double> out(w_.size());
    for (size_t i = 0; i < w_.size(); ++i) out[i] = w_[i] > 0 ? std::log(w_[i]) : neg_inf;
    return out;
}

}  // namespace ldrisk
