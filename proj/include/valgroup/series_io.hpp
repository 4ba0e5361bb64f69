#pragma once

#include "valgroup/series.hpp"

#include <cctype>
#include <sstream>
#include <string>

namespace valgroup {

// Renders a series as a sum of terms in ascending exponent order, e.g.
//   t - t^2 + 2 t^3 - 5/2 t^4 + O(t^13)
// The printer and parse_series round-trip bit-exactly.
inline std::string print_series(const TruncatedSeries &s)
{
	std::ostringstream out;
	bool first = true;
	for (const auto &[e, c] : s.coeffs()) {
		bool negative = c < 0;
		Coefficient mag = negative ? Coefficient(-c) : c;
		if (first)
			out << (negative ? "-" : "");
		else
			out << (negative ? " - " : " + ");
		first = false;
		if (e == 0) {
			out << to_string(mag);
		} else {
			if (mag != 1)
				out << to_string(mag) << " ";
			out << "t";
			if (e != 1)
				out << "^" << e;
		}
	}
	if (first)
		out << "0";
	out << " + O(t^" << s.order() + 1 << ")";
	return out.str();
}

namespace detail {

struct SeriesLexer {
	const std::string &text;
	std::size_t pos = 0;

	void skip_ws()
	{
		while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
			++pos;
	}

	[[noreturn]] void fail(const std::string &msg) const
	{
		throw std::invalid_argument("series parse error at position " + std::to_string(pos) +
		                            ": " + msg);
	}

	bool eat(char c)
	{
		skip_ws();
		if (pos < text.size() && text[pos] == c) {
			++pos;
			return true;
		}
		return false;
	}

	bool at_digit()
	{
		skip_ws();
		return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]));
	}

	Integer integer()
	{
		skip_ws();
		std::size_t start = pos;
		while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
			++pos;
		if (pos == start)
			fail("expected an integer");
		return Integer(text.substr(start, pos - start));
	}
};

} // namespace detail

// Parses the series grammar: terms `c`, `c t^k`, `t^k`, `t` joined by +/-,
// with `c` an integer or p/q rational. A trailing `O(t^K)` term fixes the
// truncation order to K - 1; otherwise default_order is used.
inline TruncatedSeries parse_series(const std::string &text, int default_order)
{
	detail::SeriesLexer lex{text};
	std::map<int, Coefficient> terms;
	int order = default_order;
	bool saw_big_o = false;

	bool negative = lex.eat('-');
	while (true) {
		lex.skip_ws();
		if (lex.pos >= lex.text.size())
			lex.fail("expected a term");
		if (saw_big_o)
			lex.fail("O(...) must be the last term");
		if (lex.eat('O')) {
			if (negative || !lex.eat('(') || !lex.eat('t') || !lex.eat('^'))
				lex.fail("malformed O(t^K) term");
			Integer k = lex.integer();
			if (!lex.eat(')'))
				lex.fail("malformed O(t^K) term");
			if (k < 1 || k > 1000000)
				lex.fail("order out of range");
			order = static_cast<int>(k) - 1;
			saw_big_o = true;
		} else {
			Coefficient coeff(1);
			bool saw_coeff = false;
			if (lex.at_digit()) {
				Integer num = lex.integer();
				if (lex.eat('/')) {
					Integer den = lex.integer();
					if (den == 0)
						lex.fail("zero denominator");
					coeff = Coefficient(num, den);
				} else {
					coeff = Coefficient(num);
				}
				saw_coeff = true;
			}
			int exponent = 0;
			if (lex.eat('t')) {
				exponent = 1;
				if (lex.eat('^')) {
					Integer k = lex.integer();
					if (k > 1000000)
						lex.fail("exponent out of range");
					exponent = static_cast<int>(k);
				}
			} else if (!saw_coeff) {
				lex.fail("expected a coefficient or t");
			}
			if (negative)
				coeff = -coeff;
			auto [it, inserted] = terms.emplace(exponent, coeff);
			if (!inserted)
				it->second += coeff;
		}
		lex.skip_ws();
		if (lex.pos >= lex.text.size())
			break;
		if (lex.eat('+'))
			negative = false;
		else if (lex.eat('-'))
			negative = true;
		else
			lex.fail("expected '+' or '-'");
	}

	TruncatedSeries s(order);
	for (const auto &[e, c] : terms) {
		if (e > order)
			lex.fail("exponent " + std::to_string(e) + " exceeds truncation order " +
			         std::to_string(order));
		s.set(e, c);
	}
	return s;
}

} // namespace valgroup
