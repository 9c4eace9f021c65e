#include "evid/chart.hpp"

#include "evid/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evid {

namespace {

struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<std::pair<std::size_t, unsigned>> powers;
    };
    std::vector<Term> terms;

    explicit CompiledPoly(const Poly& p)
    {
        for (const auto& [e, c] : p.terms()) {
            Term t{c.get_d(), {}};
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) t.powers.emplace_back(i, e[i]);
            terms.push_back(std::move(t));
        }
    }

    double operator()(std::span<const double> u) const
    {
        double sum = 0.0;
        for (const auto& t : terms) {
            double v = t.coeff;
            for (const auto& [i, k] : t.powers)
                for (unsigned r = 0; r < k; ++r) v *= u[i];
            sum += v;
        }
        return sum;
    }
};

}  // namespace

struct FrameEvaluator::Compiled {
    CompiledPoly num;
    std::vector<std::pair<CompiledPoly, unsigned>> den;

    explicit Compiled(const ScalarFn& f) : num(Poly(f.nvars()))
    {
        if (f.backend() == BackendKind::Poly) {
            num = CompiledPoly(f.as_poly());
        } else if (f.backend() == BackendKind::Rational) {
            num = CompiledPoly(f.as_rational().numerator());
            for (const auto& fac : f.as_rational().factors()) den.emplace_back(CompiledPoly(fac.base), fac.exponent);
        } else {
            fail(Errc::BackendMismatch, "chart integration needs a frame on an exact backend");
        }
    }

    double operator()(std::span<const double> u) const
    {
        double v = num(u);
        for (const auto& [d, k] : den) v /= std::pow(d(u), double(k));
        return v;
    }
};

FrameEvaluator::FrameEvaluator(const DualFrame& frame) : shape_(frame.shape)
{
    for (const auto& x : frame.flat_fields()) {
        std::vector<std::shared_ptr<const Compiled>> comps;
        for (const auto& c : x.components()) comps.push_back(std::make_shared<const Compiled>(c));
        fields_.push_back(std::move(comps));
    }
    for (const auto& c : frame.e.components()) e_.push_back(std::make_shared<const Compiled>(c));
    for (std::size_t alpha = 1; alpha <= shape_.blocks(); ++alpha)
        a2_.push_back(shape_.size(alpha) >= 2 ? std::make_shared<const Compiled>(frame.a_at(alpha, 2)) : nullptr);
}

std::vector<double> FrameEvaluator::field(std::size_t q, std::span<const double> u) const
{
    std::vector<double> out;
    out.reserve(dimension());
    for (const auto& c : fields_.at(q - 1)) out.push_back((*c)(u));
    return out;
}

std::vector<double> FrameEvaluator::e(std::span<const double> u) const
{
    std::vector<double> out;
    for (const auto& c : e_) out.push_back((*c)(u));
    return out;
}

std::vector<double> FrameEvaluator::a2(std::span<const double> u) const
{
    std::vector<double> out;
    for (const auto& c : a2_) out.push_back(c ? (*c)(u) : 1.0);
    return out;
}

double ChartResult::max_order_err() const
{
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.order_err);
    return m;
}

double ChartResult::max_jac_err() const
{
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.jac_err);
    return m;
}

double ChartResult::max_push_err() const
{
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.push_err);
    return m;
}

namespace {

void check_floor(const FrameEvaluator& frame, std::span<const double> u, double floor)
{
    const BlockShape& shape = frame.shape();
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const double e1 = frame.e(u)[shape.flat(alpha, 1) - 1];
        if (!(std::abs(e1) >= floor))
            throw Error(Errc::SingularEncounter, "|E^1| of block " + std::to_string(alpha) + " fell to " +
                                                     std::to_string(std::abs(e1)) + " along a flow")
                .with_indices({alpha});
    }
}

}  // namespace

std::vector<double> flow(const FrameEvaluator& frame, std::size_t q, std::vector<double> u, double t, double h,
                         double floor)
{
    if (t == 0.0) return u;
    if (!(h > 0.0)) fail(Errc::InvalidInput, "step size must be positive");
    const std::size_t steps = static_cast<std::size_t>(std::ceil(std::abs(t) / h));
    const double dt = t / double(steps);
    const std::size_t n = u.size();
    std::vector<double> tmp(n);
    auto stage = [&](const std::vector<double>& base, const std::vector<double>& k, double c) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = base[i] + c * k[i];
        check_floor(frame, tmp, floor);
        return frame.field(q, tmp);
    };
    for (std::size_t s = 0; s < steps; ++s) {
        check_floor(frame, u, floor);
        const std::vector<double> k1 = frame.field(q, u);
        const std::vector<double> k2 = stage(u, k1, dt / 2);
        const std::vector<double> k3 = stage(u, k2, dt / 2);
        const std::vector<double> k4 = stage(u, k3, dt);
        for (std::size_t i = 0; i < n; ++i) u[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return u;
}

std::vector<double> flow_composition(const FrameEvaluator& frame, std::span<const double> p0, std::span<const double> w,
                                     std::span<const std::size_t> order, double h, double floor)
{
    std::vector<double> u(p0.begin(), p0.end());
    for (std::size_t q : order) u = flow(frame, q, std::move(u), w[q - 1], h, floor);
    return u;
}

ChartResult integrate_chart(const DualFrame& frame, const ChartSpec& spec)
{
    const BlockShape& shape = frame.shape;
    const std::size_t n = shape.dimension();
    if (spec.p0.size() != n) fail(Errc::ShapeMismatch, "base point dimension differs from the shape");
    FrameEvaluator eval(frame);

    const std::vector<double> e0 = eval.e(spec.p0), a0 = eval.a2(spec.p0);
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        if (std::abs(e0[shape.flat(alpha, 1) - 1]) < spec.floor || std::abs(a0[alpha - 1]) < spec.floor)
            throw Error(Errc::PreconditionFailed, "base point within the floor of the non-invertibility locus in block " +
                                                      std::to_string(alpha))
                .with_indices({alpha});
    }
    if (spec.check_frame) {
        const Backend jb = Backend::jet(spec.p0, 2);
        GeneratorComponents a;
        for (const auto& block : frame.a) {
            a.emplace_back();
            for (const auto& c : block) a.back().push_back(jb.lift(c));
        }
        Residual r = v2_conditions(build_frame(lift(frame.e, jb), a));
        if (!r.passes(1e-9)) {
            const auto* w = r.worst();
            throw Error(Errc::PreconditionFailed, "frame fails its conditions at the base point")
                .with_indices(w ? w->indices : std::vector<std::size_t>{})
                .with_detail(w ? w->group : "");
        }
    }

    std::vector<std::size_t> forward(n), backward(n);
    std::iota(forward.begin(), forward.end(), 1);
    std::reverse_copy(forward.begin(), forward.end(), backward.begin());

    ChartResult result{spec.p0, spec.h, spec.tol, {}};
    for (const auto& w : spec.grid) {
        if (w.size() != n) fail(Errc::ShapeMismatch, "grid point dimension differs from the shape");
        for (double x : w)
            if (std::abs(x) > spec.radius) fail(Errc::InvalidInput, "grid point outside the chart radius");

        ChartSample s;
        s.w = w;
        s.u = flow_composition(eval, spec.p0, w, forward, spec.h, spec.floor);
        if (spec.check_order) {
            const std::vector<double> alt = flow_composition(eval, spec.p0, w, backward, spec.h, spec.floor);
            for (std::size_t i = 0; i < n; ++i) s.order_err = std::max(s.order_err, std::abs(alt[i] - s.u[i]));
            if (s.order_err > 10 * spec.tol)
                throw Error(Errc::NonCommutingFrame,
                            "flow orderings disagree by " + std::to_string(s.order_err) + " at a grid point");
        }

        const double delta = spec.h;
        for (std::size_t q = 1; q <= n; ++q) {
            std::vector<double> wp = w, wm = w;
            wp[q - 1] += delta;
            wm[q - 1] -= delta;
            const std::vector<double> up = flow_composition(eval, spec.p0, wp, forward, spec.h, spec.floor);
            const std::vector<double> um = flow_composition(eval, spec.p0, wm, forward, spec.h, spec.floor);
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = (up[i] - um[i]) / (2 * delta);
            const std::vector<double> exact = eval.field(q, s.u);
            for (std::size_t i = 0; i < n; ++i) s.jac_err = std::max(s.jac_err, std::abs(col[i] - exact[i]));
            s.jacobian.push_back(std::move(col));
        }
        result.samples.push_back(std::move(s));
    }
    return result;
}

Residual pushforward_check(const DualFrame& frame, ChartResult& result)
{
    const BlockShape& shape = frame.shape;
    const std::size_t n = shape.dimension();
    FrameEvaluator eval(frame);

    Residual out;
    out.identity = "pushforward";
    out.backend = "numeric";
    for (std::size_t idx = 0; idx < result.samples.size(); ++idx) {
        ChartSample& s = result.samples[idx];
        Eigen::MatrixXd jac(n, n);
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t i = 0; i < n; ++i) jac(Eigen::Index(i), Eigen::Index(q)) = s.jacobian[q][i];
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const std::vector<double> einv = invert_values(shape, eval.e(s.u));

        s.push_err = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t k = 1; k <= n; ++k) {
                const std::vector<double> prod =
                    circ_values(shape, einv, circ_values(shape, s.jacobian[j - 1], s.jacobian[k - 1]));
                const Eigen::VectorXd c = lu.solve(Eigen::Map<const Eigen::VectorXd>(prod.data(), Eigen::Index(n)));
                const auto [bj, pj] = shape.block_of(j);
                const auto [bk, pk] = shape.block_of(k);
                for (std::size_t i = 1; i <= n; ++i) {
                    const auto [bi, pi] = shape.block_of(i);
                    const double canonical = (bi == bj && bi == bk && pi == pj + pk - 1) ? 1.0 : 0.0;
                    const double dev = c(Eigen::Index(i - 1)) - canonical;
                    s.push_err = std::max(s.push_err, std::abs(dev));
                    out.entries.push_back({"structure", {idx + 1, i, j, k}, ScalarFn(FloatJet::constant(s.u, 0, dev)), s.w});
                }
            }
    }
    return out;
}

}  // namespace evid
