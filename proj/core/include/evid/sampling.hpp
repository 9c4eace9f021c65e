#pragma once

#include "evid/block_algebra.hpp"
#include "evid/calculus.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace evid {

struct SamplingOptions {
    std::size_t count = 20;
    std::uint64_t seed = 42;
    /// Lower bound on |u^{1(a)}|; the sampled magnitude lies in [floor, floor + 1].
    double floor = 0.5;
    /// Other coordinates are drawn from [-spread, spread].
    double spread = 1.0;
    unsigned order = Backend::default_jet_order;
};

/// Deterministic sample points for `seed`. Points rejected by `admissible`
/// are redrawn (at most 1000 attempts per point).
std::vector<std::vector<double>> sample_points(const BlockShape& shape, const SamplingOptions& options,
                                               const std::function<bool(const std::vector<double>&)>& admissible = {});

/// Evaluates a residual on the jet backend at every point and concatenates
/// the entries, each tagged with its point.
Residual sample_residual(const std::function<Residual(const Backend&)>& residual,
                         const std::vector<std::vector<double>>& points, unsigned order = Backend::default_jet_order);

/// Lifts every component onto `backend`.
VectorField lift(const VectorField& x, const Backend& backend);

}  // namespace evid
