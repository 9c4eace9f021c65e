#pragma once

#include "evid/chart.hpp"
#include "evid/dual.hpp"
#include "evid/ei_solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace evid {

using json = nlohmann::json;

/// { "shape": [m1, ...], "components": ["expr", ...] } in flat variable names.
json field_to_json(const VectorField& x);
/// Components are parsed on `backend`; its dimension must match the shape.
VectorField field_from_json(const json& j, const Backend& backend);
BlockShape shape_from_json(const json& j);

/// { "shape": [...], "seeds": [{ "block": a, "f": ["expr", ...] }] } with
/// block-local variable names (u1, u2 are the block's first two coordinates).
json seed_to_json(const EISeed& seed);
EISeed seed_from_json(const json& j);

/// Per block, expressions in block-local names u1..u{m_a}: a_{2(a)} first.
json generator_to_json(const BlockShape& shape, const GeneratorComponents& a);
GeneratorComponents generator_from_json(const BlockShape& shape, const json& j, const Backend& backend);

/// Expression in block-local names lowered onto the flat backend.
ScalarFn parse_block_local(std::string_view src, const BlockShape& shape, std::size_t alpha, const Backend& backend);
/// Writes an exact function of block alpha's variables in block-local names.
std::string to_block_local(const ScalarFn& f, const BlockShape& shape, std::size_t alpha);

/// { "shape", "E", "a", "v" }.
json frame_to_json(const DualFrame& frame);

/// { "identity", "backend", "max_abs", "worst_entry", "seed", "entries", "nonzero", "pass" }.
/// max_abs is the string "0(exact)" for an exact zero residual.
json residual_report(const Residual& r, std::uint64_t seed, double tol);

/// { "p0", "h", "tol", "samples": [{ "w", "u", "jac_err", "push_err", "order_err" }], "max_*" }.
json chart_report(const ChartResult& r);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
json read_json_file(const std::filesystem::path& path);

}  // namespace evid
