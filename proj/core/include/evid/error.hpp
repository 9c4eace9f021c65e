#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evid {

enum class Errc {
    BackendMismatch,
    DivisionByZeroFunction,
    UnsupportedDivision,
    IndexOutOfRange,
    JetOrderExhausted,
    SyntaxError,
    UnknownVariable,
    NotClosed,
    ShapeMismatch,
    NotInvertible,
    PreconditionFailed,
    SeedSupportViolation,
    ZeroGenerator,
    QViolated,
    NoPolynomialSolution,
    SingularEncounter,
    NonCommutingFrame,
    InvalidInput,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every failure raised by the library. `code()` names the
/// contract that was violated; the optional payload fields are filled by the
/// raising site when the contract has something to report (a failing index
/// pair, a syntax position, the offending block).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

    /// Offending indices, e.g. the (k, l) pair of a non-closed one-form or the
    /// 1-based block of a non-invertible field.
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    Error& with_indices(std::vector<std::size_t> idx);

    /// Residual or offending expression rendered as text.
    const std::string& detail() const noexcept { return detail_; }
    Error& with_detail(std::string d);

    /// Character offset for SyntaxError.
    std::size_t position() const noexcept { return position_; }
    Error& with_position(std::size_t pos);

private:
    Errc code_;
    std::vector<std::size_t> indices_;
    std::string detail_;
    std::size_t position_ = 0;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace evid
