#include "fracdrift/grid.hpp"

#include <cmath>
#include <utility>

namespace fracdrift {

TimeGrid::TimeGrid(double T, std::size_t n) : T_(T), n_(n) {
    if (!std::isfinite(T) || T <= 0.0) throw ValidationError("TimeGrid: horizon T must be finite and > 0");
    if (n == 0) throw ValidationError("TimeGrid: step count n must be >= 1");
    dt_ = T / static_cast<double>(n);
    nodes_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) nodes_[i] = static_cast<double>(i) * T / static_cast<double>(n);
    nodes_[n] = T;  // exact right endpoint
}

bool TimeGrid::same_as(const TimeGrid& other, double rel_tol) const {
    return n_ == other.n_ && std::abs(T_ - other.T_) <= rel_tol * T_;
}

TimeGrid make_grid(double T, std::size_t n) { return TimeGrid(T, n); }

SampledPath::SampledPath(TimeGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.node_count())
        throw ValidationError("SampledPath: value count does not match grid node count");
    for (double x : values)
        if (!std::isfinite(x)) throw ValidationError("SampledPath: non-finite sample value");
}

}  // namespace fracdrift
