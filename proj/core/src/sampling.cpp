#include "evid/sampling.hpp"

#include <random>

namespace evid {

std::vector<std::vector<double>> sample_points(const BlockShape& shape, const SamplingOptions& options,
                                               const std::function<bool(const std::vector<double>&)>& admissible)
{
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> lead(options.floor, options.floor + 1.0);
    std::uniform_real_distribution<double> rest(-options.spread, options.spread);
    std::bernoulli_distribution sign(0.5);

    std::vector<std::vector<double>> points;
    points.reserve(options.count);
    for (std::size_t s = 0; s < options.count; ++s) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == 1000) fail(Errc::InvalidInput, "no admissible sample point after 1000 draws");
            std::vector<double> x(shape.dimension());
            for (std::size_t i = 1; i <= shape.dimension(); ++i) {
                if (shape.block_of(i).second == 1) {
                    const double m = lead(rng);
                    x[i - 1] = sign(rng) ? m : -m;
                } else {
                    x[i - 1] = rest(rng);
                }
            }
            if (!admissible || admissible(x)) {
                points.push_back(std::move(x));
                break;
            }
        }
    }
    return points;
}

Residual sample_residual(const std::function<Residual(const Backend&)>& residual,
                         const std::vector<std::vector<double>>& points, unsigned order)
{
    Residual out;
    for (const auto& p : points) {
        Residual r = residual(Backend::jet(p, order));
        if (out.identity.empty()) out.identity = r.identity;
        for (auto& e : r.entries) {
            e.point = p;
            out.entries.push_back(std::move(e));
        }
    }
    out.backend = "jet";
    return out;
}

VectorField lift(const VectorField& x, const Backend& backend)
{
    std::vector<ScalarFn> c;
    c.reserve(x.dimension());
    for (const auto& f : x.components()) c.push_back(backend.lift(f));
    return VectorField(x.shape(), std::move(c));
}

}  // namespace evid
