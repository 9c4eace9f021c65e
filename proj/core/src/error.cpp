#include "evid/error.hpp"

#include <utility>

namespace evid {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::BackendMismatch: return "BackendMismatch";
    case Errc::DivisionByZeroFunction: return "DivisionByZeroFunction";
    case Errc::UnsupportedDivision: return "UnsupportedDivision";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::JetOrderExhausted: return "JetOrderExhausted";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::NotClosed: return "NotClosed";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::SeedSupportViolation: return "SeedSupportViolation";
    case Errc::ZeroGenerator: return "ZeroGenerator";
    case Errc::QViolated: return "QViolated";
    case Errc::NoPolynomialSolution: return "NoPolynomialSolution";
    case Errc::SingularEncounter: return "SingularEncounter";
    case Errc::NonCommutingFrame: return "NonCommutingFrame";
    case Errc::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{}

Error& Error::with_indices(std::vector<std::size_t> idx)
{
    indices_ = std::move(idx);
    return *this;
}

Error& Error::with_detail(std::string d)
{
    detail_ = std::move(d);
    return *this;
}

Error& Error::with_position(std::size_t pos)
{
    position_ = pos;
    return *this;
}

void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace evid
