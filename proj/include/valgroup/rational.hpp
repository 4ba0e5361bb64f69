#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace valgroup {

// Exact rational coefficients. cpp_rational keeps values in lowest terms
// with a positive denominator, which is exactly the invariant we need.
using Coefficient = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline bool is_integer(const Coefficient &c) { return denominator(c) == 1; }

inline std::string to_string(const Coefficient &c)
{
	if (is_integer(c))
		return numerator(c).str();
	return numerator(c).str() + "/" + denominator(c).str();
}

// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed
// input or a zero denominator.
inline Coefficient parse_rational(const std::string &text)
{
	auto slash = text.find('/');
	try {
		if (slash == std::string::npos)
			return Coefficient(Integer(text));
		Integer num(text.substr(0, slash));
		Integer den(text.substr(slash + 1));
		if (den == 0)
			throw std::invalid_argument("zero denominator in rational '" + text + "'");
		return Coefficient(num, den);
	} catch (const std::runtime_error &) {
		throw std::invalid_argument("malformed rational '" + text + "'");
	}
}

} // namespace valgroup
