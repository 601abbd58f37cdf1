#pragma once
#include <cstddef>
#include <vector>

#include "fracdrift/errors.hpp"

namespace fracdrift {

/// Uniform partition of [0, T] into n steps; nodes t_i = i*T/n, i = 0..n.
/// Immutable after construction and safe to share across threads.
class TimeGrid {
  public:
    TimeGrid(double T, std::size_t n);

    double horizon() const { return T_; }
    std::size_t steps() const { return n_; }
    std::size_t node_count() const { return n_ + 1; }
    double dt() const { return dt_; }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

    bool same_as(const TimeGrid& other, double rel_tol = 1e-12) const;

  private:
    double T_;
    std::size_t n_;
    double dt_;
    std::vector<double> nodes_;
};

TimeGrid make_grid(double T, std::size_t n);

/// Real-valued function sampled on a TimeGrid (values.size() == n+1, all finite).
struct SampledPath {
    TimeGrid grid;
    std::vector<double> values;

    SampledPath(TimeGrid g, std::vector<double> v);

    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

}  // namespace fracdrift
