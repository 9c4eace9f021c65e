#include "evid/rational.hpp"

#include "evid/error.hpp"

#include <cctype>

namespace evid {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    Rational value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) fail(Errc::SyntaxError, "bad rational literal '" + std::string(text) + "'");
        mpz_class d(std::string(den), 10);
        if (d == 0) fail(Errc::SyntaxError, "zero denominator in '" + std::string(text) + "'");
        value = Rational(mpz_class(std::string(num), 10), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
            fail(Errc::SyntaxError, "bad decimal literal '" + std::string(text) + "'");
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        value = Rational(digits, scale);
    } else {
        if (!all_digits(body)) fail(Errc::SyntaxError, "bad integer literal '" + std::string(text) + "'");
        value = Rational(mpz_class(std::string(body), 10));
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q)
{
    return q.get_str(10);
}

Rational binomial(unsigned n, unsigned k)
{
    if (k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

}  // namespace evid
