#include "evid/jet.hpp"

#include <map>
#include <mutex>

namespace evid {

namespace {

void enumerate_degree(std::size_t nvars, unsigned degree, std::vector<Poly::Exponents>& out)
{
    Poly::Exponents e(nvars, 0);
    // Lex-descending enumeration of compositions of `degree` into nvars parts.
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
        if (i + 1 == nvars) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (unsigned v = left + 1; v-- > 0;) {
            e[i] = v;
            self(self, i + 1, left - v);
        }
    };
    if (nvars == 0) {
        if (degree == 0) out.push_back(e);
        return;
    }
    rec(rec, 0, degree);
}

}  // namespace

JetLayout::JetLayout(std::size_t nvars, unsigned order) : nvars_(nvars), order_(order)
{
    for (unsigned d = 0; d <= order; ++d) {
        enumerate_degree(nvars, d, multi_);
        degree_.resize(multi_.size(), d);
        prefix_.push_back(multi_.size());
    }

    std::map<Poly::Exponents, std::uint32_t> index;
    for (std::size_t k = 0; k < multi_.size(); ++k) index.emplace(multi_[k], static_cast<std::uint32_t>(k));

    Poly::Exponents sum(nvars);
    for (std::size_t a = 0; a < multi_.size(); ++a) {
        for (std::size_t b = 0; b < prefix_[order - degree_[a]]; ++b) {
            for (std::size_t i = 0; i < nvars; ++i) sum[i] = multi_[a][i] + multi_[b][i];
            products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), index.at(sum)});
        }
    }

    lowering_.resize(nvars);
    for (std::size_t v = 0; v < nvars; ++v) {
        for (std::size_t k = 0; k < multi_.size(); ++k) {
            if (multi_[k][v] == 0) continue;
            auto lower = multi_[k];
            lower[v] -= 1;
            lowering_[v].emplace_back(static_cast<std::uint32_t>(k), index.at(lower));
        }
    }
}

std::size_t JetLayout::index_of(const Poly::Exponents& e) const
{
    if (e.size() != nvars_) fail(Errc::IndexOutOfRange, "multi-index length differs from jet arity");
    unsigned d = 0;
    for (auto x : e) d += x;
    if (d > order_) fail(Errc::IndexOutOfRange, "multi-index degree exceeds jet order");
    const std::size_t begin = d == 0 ? 0 : prefix_[d - 1];
    for (std::size_t k = begin; k < prefix_[d]; ++k)
        if (multi_[k] == e) return k;
    fail(Errc::IndexOutOfRange, "multi-index not found");
}

std::shared_ptr<const JetLayout> JetLayout::get(std::size_t nvars, unsigned order)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::make_shared<const JetLayout>(nvars, order);
    return slot;
}

}  // namespace evid
