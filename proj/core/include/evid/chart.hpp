#pragma once

#include "evid/dual.hpp"

#include <vector>

namespace evid {

struct ChartSpec {
    std::vector<double> p0;
    std::vector<std::vector<double>> grid;
    double h = 1e-3;
    double tol = 1e-8;
    /// Lower bound on |E^{1(a)}| and |a_{2(a)}| at p0 and on |E^{1(a)}| along trajectories.
    double floor = 0.5;
    /// Largest admissible |w^i|.
    double radius = 0.5;
    /// Evaluate the flow-order disagreement (reverse composition) at each sample.
    bool check_order = true;
    /// Check v2_conditions on jets at p0 before integrating.
    bool check_frame = true;
};

struct ChartSample {
    std::vector<double> w;
    std::vector<double> u;
    /// jacobian[q] is the finite-difference column du/dw^q.
    std::vector<std::vector<double>> jacobian;
    double order_err = 0.0;
    double jac_err = 0.0;
    double push_err = 0.0;
};

struct ChartResult {
    std::vector<double> p0;
    double h = 0.0;
    double tol = 0.0;
    std::vector<ChartSample> samples;

    double max_order_err() const;
    double max_jac_err() const;
    double max_push_err() const;
};

/// Numerical evaluation of the frame fields v_{i(a)} (flat order) and of E.
class FrameEvaluator {
public:
    explicit FrameEvaluator(const DualFrame& frame);

    std::size_t dimension() const noexcept { return shape_.dimension(); }
    const BlockShape& shape() const noexcept { return shape_; }
    /// v_q(u) for the q-th frame field in flat order (1-based).
    std::vector<double> field(std::size_t q, std::span<const double> u) const;
    std::vector<double> e(std::span<const double> u) const;
    std::vector<double> a2(std::span<const double> u) const;

    struct Compiled;

private:
    BlockShape shape_;
    std::vector<std::vector<std::shared_ptr<const Compiled>>> fields_;
    std::vector<std::shared_ptr<const Compiled>> e_;
    std::vector<std::shared_ptr<const Compiled>> a2_;
};

/// Applies the time-t flow of field q by the classical fourth-order scheme
/// with N = ceil(|t|/h) equal steps. Raises SingularEncounter when some
/// |E^{1(a)}| drops below `floor` at a stage.
std::vector<double> flow(const FrameEvaluator& frame, std::size_t q, std::vector<double> u, double t, double h,
                         double floor);

/// Composition of the flows of the frame fields for times w^q in the given
/// order (flat indices, 1-based).
std::vector<double> flow_composition(const FrameEvaluator& frame, std::span<const double> p0, std::span<const double> w,
                                     std::span<const std::size_t> order, double h, double floor);

/// Integrates u(w) on the grid in the canonical order (block 1 first,
/// ascending i). Raises NonCommutingFrame when the reverse order disagrees by
/// more than 10 tol, SingularEncounter near the non-invertibility locus, and
/// PreconditionFailed when p0 is too close to it or the frame fails its
/// conditions at p0. Jacobians are central differences with step h; jac_err
/// compares them with v_q(u(w)).
ChartResult integrate_chart(const DualFrame& frame, const ChartSpec& spec);

/// Structure constants of * in the w-frame at each sample,
/// J^{-1} (J_j * J_k), compared with the canonical block pattern. Fills
/// push_err per sample; entries tagged (sample, i, j, k) with the deviation.
Residual pushforward_check(const DualFrame& frame, ChartResult& result);

}  // namespace evid
