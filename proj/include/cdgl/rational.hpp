#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cdgl {

/// Exact rational; GMP keeps it canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

inline std::string to_string(const Rational &q)
{
	return q.get_str();
}

/// Accepts `p` or `p/q` with an optional leading sign.
inline Rational parse_rational(std::string_view text)
{
	auto valid_int = [](std::string_view s, bool allow_sign) {
		if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+'))
			s.remove_prefix(1);
		if (s.empty())
			return false;
		for (char c : s)
			if (!std::isdigit(static_cast<unsigned char>(c)))
				return false;
		return true;
	};
	auto slash = text.find('/');
	std::string_view num = text.substr(0, slash);
	std::string_view den =
	    slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
	if (!valid_int(num, true) ||
	    (slash != std::string_view::npos && !valid_int(den, false)))
		throw std::invalid_argument("malformed rational: " + std::string(text));
	std::string n(num);
	if (!n.empty() && n[0] == '+')
		n.erase(0, 1);
	Rational q;
	if (slash == std::string_view::npos)
		q = Rational(Integer(n));
	else
	{
		Integer d{std::string(den)};
		if (d == 0)
			throw std::invalid_argument("zero denominator: " + std::string(text));
		q = Rational(Integer(n), d);
		q.canonicalize();
	}
	return q;
}

inline Integer factorial(int n)
{
	Integer r = 1;
	for (int i = 2; i <= n; ++i)
		r *= i;
	return r;
}

} // namespace cdgl
