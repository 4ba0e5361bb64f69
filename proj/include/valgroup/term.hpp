#pragma once

#include "valgroup/rational.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace valgroup {

// AST for words over the group extended by the variable y with rational
// exponents. Mul is kept n-ary (the flattened normal form); inv(x) is
// represented as Pow(x, -1).
struct Term {
	enum class Kind { constref, variable, mul, pow };

	Kind kind;
	std::string name;          // constref
	Coefficient exponent;      // pow
	std::vector<Term> children; // mul: >= 2 factors, pow: the base

	static Term constref(std::string id)
	{
		return Term{Kind::constref, std::move(id), Coefficient(0), {}};
	}
	static Term y() { return Term{Kind::variable, {}, Coefficient(0), {}}; }
	static Term mul(std::vector<Term> factors)
	{
		if (factors.size() == 1)
			return factors.front();
		return Term{Kind::mul, {}, Coefficient(0), std::move(factors)};
	}
	static Term pow(Term base, Coefficient q)
	{
		return Term{Kind::pow, {}, std::move(q), {std::move(base)}};
	}
	static Term inv(Term base) { return pow(std::move(base), Coefficient(-1)); }
};

inline bool operator==(const Term &a, const Term &b)
{
	return a.kind == b.kind && a.name == b.name && a.exponent == b.exponent &&
	       a.children == b.children;
}
inline bool operator!=(const Term &a, const Term &b) { return !(a == b); }

// total y-exponent; the homomorphism with alpha(g) = 0 and alpha(y) = 1
inline Coefficient alpha(const Term &t)
{
	switch (t.kind) {
	case Term::Kind::constref:
		return Coefficient(0);
	case Term::Kind::variable:
		return Coefficient(1);
	case Term::Kind::mul: {
		Coefficient sum(0);
		for (const Term &c : t.children)
			sum += alpha(c);
		return sum;
	}
	case Term::Kind::pow:
		return t.exponent * alpha(t.children.front());
	}
	return Coefficient(0);
}

inline bool is_regular(const Term &t) { return !alpha(t).is_zero(); }

// y-exponents restricted to integers (the A = Z fragment)
inline bool has_integer_exponents_only(const Term &t)
{
	if (t.kind == Term::Kind::pow && !is_integer(t.exponent))
		return false;
	for (const Term &c : t.children)
		if (!has_integer_exponents_only(c))
			return false;
	return true;
}

inline Term substitute_y(const Term &t, const Term &replacement)
{
	switch (t.kind) {
	case Term::Kind::constref:
		return t;
	case Term::Kind::variable:
		return replacement;
	case Term::Kind::mul: {
		std::vector<Term> factors;
		for (const Term &c : t.children)
			factors.push_back(substitute_y(c, replacement));
		return Term::mul(std::move(factors));
	}
	case Term::Kind::pow:
		return Term::pow(substitute_y(t.children.front(), replacement), t.exponent);
	}
	return t;
}

// ----- printing ---------------------------------------------------------

inline std::string print_term(const Term &t)
{
	auto atom = [](const Term &x, const std::string &rendered) {
		if (x.kind == Term::Kind::mul || x.kind == Term::Kind::pow)
			return "(" + rendered + ")";
		return rendered;
	};
	switch (t.kind) {
	case Term::Kind::constref:
		return t.name;
	case Term::Kind::variable:
		return "y";
	case Term::Kind::mul: {
		std::string out;
		for (const Term &c : t.children) {
			if (!out.empty())
				out += " * ";
			out += atom(c, print_term(c));
		}
		return out;
	}
	case Term::Kind::pow: {
		const Term &base = t.children.front();
		std::string b = atom(base, print_term(base));
		if (is_integer(t.exponent) && t.exponent >= 0)
			return b + "^" + to_string(t.exponent);
		return b + "^(" + to_string(t.exponent) + ")";
	}
	}
	return {};
}

// ----- parsing ----------------------------------------------------------

namespace detail {

struct TermLexer {
	const std::string &text;
	std::size_t pos = 0;

	[[noreturn]] void fail(const std::string &msg) const
	{
		throw std::invalid_argument("term parse error at position " + std::to_string(pos) +
		                            ": " + msg);
	}

	void skip_ws()
	{
		while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
			++pos;
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

	bool peek(char c)
	{
		skip_ws();
		return pos < text.size() && text[pos] == c;
	}

	bool at_end()
	{
		skip_ws();
		return pos >= text.size();
	}

	bool at_identifier()
	{
		skip_ws();
		return pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]));
	}

	std::string identifier()
	{
		skip_ws();
		if (!at_identifier())
			fail("expected an identifier");
		std::size_t start = pos;
		while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
		                             text[pos] == '_'))
			++pos;
		return text.substr(start, pos - start);
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

class TermParser {
public:
	TermParser(const std::string &text, const std::set<std::string> &reserved)
	    : lex_{text}, reserved_(reserved)
	{
	}

	Term parse()
	{
		Term t = term();
		if (!lex_.at_end())
			lex_.fail("unexpected trailing input");
		return t;
	}

private:
	static constexpr int max_nesting = 256;

	detail::TermLexer lex_;
	const std::set<std::string> &reserved_;
	int depth_ = 0;

	struct DepthGuard {
		TermParser &parser;
		explicit DepthGuard(TermParser &p) : parser(p)
		{
			if (++parser.depth_ > max_nesting)
				parser.lex_.fail("term nesting too deep");
		}
		~DepthGuard() { --parser.depth_; }
	};

	bool at_atom_start() { return lex_.at_identifier() || lex_.peek('('); }

	Term term()
	{
		DepthGuard guard(*this);
		std::vector<Term> factors;
		factors.push_back(factor());
		while (true) {
			if (lex_.eat('*')) {
				factors.push_back(factor());
				continue;
			}
			if (at_atom_start()) { // juxtaposition
				factors.push_back(factor());
				continue;
			}
			break;
		}
		return Term::mul(std::move(factors));
	}

	Term factor()
	{
		Term base = atom();
		if (lex_.eat('^'))
			return Term::pow(std::move(base), exponent());
		return base;
	}

	Term atom()
	{
		if (lex_.eat('(')) {
			Term t = term();
			if (!lex_.eat(')'))
				lex_.fail("unbalanced parentheses");
			return t;
		}
		if (!lex_.at_identifier())
			lex_.fail("expected 'y', an identifier, or a parenthesized term");
		std::string id = lex_.identifier();
		if (id == "y")
			return Term::y();
		if (id == "inv") {
			if (!lex_.eat('('))
				lex_.fail("inv requires a parenthesized argument");
			Term t = term();
			if (!lex_.eat(')'))
				lex_.fail("unbalanced parentheses");
			return Term::inv(std::move(t));
		}
		if (reserved_.count(id))
			lex_.fail("'" + id + "' is reserved");
		return Term::constref(std::move(id));
	}

	Coefficient exponent()
	{
		if (lex_.eat('(')) {
			Coefficient q = exponent();
			if (!lex_.eat(')'))
				lex_.fail("unbalanced parentheses in exponent");
			return q;
		}
		bool negative = lex_.eat('-');
		Integer num = lex_.integer();
		Integer den(1);
		if (lex_.eat('/')) {
			den = lex_.integer();
			if (den == 0)
				lex_.fail("zero denominator");
		}
		Coefficient q(num, den);
		return negative ? Coefficient(-q) : q;
	}
};

} // namespace detail

inline Term parse_term(const std::string &text, const std::set<std::string> &reserved = {})
{
	return detail::TermParser(text, reserved).parse();
}

// ----- symbol tables and evaluation --------------------------------------

// Immutable after construction; `y` and internally generated names cannot
// be bound by users.
template <typename Elem> class SymbolTable {
public:
	SymbolTable() = default;

	void bind(const std::string &name, Elem value)
	{
		if (name == "y" || name == "inv")
			throw std::invalid_argument("'" + name + "' is reserved and cannot be bound");
		if (name.empty() || name[0] == '$')
			throw std::invalid_argument("identifiers starting with '$' are internal");
		if (entries_.count(name))
			throw std::invalid_argument("'" + name + "' is already bound");
		entries_.emplace(name, std::move(value));
	}

	void bind_internal(const std::string &name, Elem value) { entries_.emplace(name, value); }

	const Elem &lookup(const std::string &name) const
	{
		auto it = entries_.find(name);
		if (it == entries_.end())
			throw std::invalid_argument("unbound identifier '" + name + "'");
		return it->second;
	}

	bool contains(const std::string &name) const { return entries_.count(name) > 0; }
	std::size_t size() const { return entries_.size(); }

private:
	std::map<std::string, Elem> entries_;
};

// Homomorphic evaluation sending y to `value` and fixing the bound
// constants. Ops supplies the group operations (see group_ops.hpp); the
// word product folds left to right into the group law.
template <typename Ops>
typename Ops::Elem eval_term(const Term &t, const typename Ops::Elem &value,
                             const SymbolTable<typename Ops::Elem> &table)
{
	switch (t.kind) {
	case Term::Kind::constref:
		return table.lookup(t.name);
	case Term::Kind::variable:
		return value;
	case Term::Kind::mul: {
		auto acc = eval_term<Ops>(t.children.front(), value, table);
		for (std::size_t i = 1; i < t.children.size(); ++i)
			acc = Ops::op(acc, eval_term<Ops>(t.children[i], value, table));
		return acc;
	}
	case Term::Kind::pow:
		return Ops::pow(eval_term<Ops>(t.children.front(), value, table), t.exponent);
	}
	throw std::logic_error("unreachable term kind");
}

template <typename Elem> struct ShiftResult {
	Term term;
	SymbolTable<Elem> table;
};

// The shifted term t_f = t(f)^-1 t(f y): substitute y -> f y and multiply by
// the inverse of t(f) on the left. Fresh bindings are namespaced so they can
// never collide with user identifiers. alpha is preserved.
template <typename Ops>
ShiftResult<typename Ops::Elem> shift(const Term &t, const typename Ops::Elem &f,
                                      const SymbolTable<typename Ops::Elem> &table)
{
	SymbolTable<typename Ops::Elem> extended = table;
	std::string base = "$shift_" + std::to_string(table.size());
	std::string f_name = base + "_f", inv_name = base + "_i";
	extended.bind_internal(f_name, f);
	extended.bind_internal(inv_name, Ops::inv(eval_term<Ops>(t, f, table)));
	Term shifted = Term::mul(
	    {Term::constref(inv_name),
	     substitute_y(t, Term::mul({Term::constref(f_name), Term::y()}))});
	return {std::move(shifted), std::move(extended)};
}

} // namespace valgroup
