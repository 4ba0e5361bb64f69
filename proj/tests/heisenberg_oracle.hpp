#pragma once

// Independent symbolic oracle for unary equations over the Heisenberg group
// in Mal'cev coordinates. Works entirely from the closed-form product
//   (a1,a2,a3)(b1,b2,b3) = (a1+b1, a2+b2, a3+b3+ (a1 b2 - a2 b1)/2)
// by propagating coordinates as polynomials in the unknown (y1, y2, y3),
// then solving the resulting triangular equations. Shares no code with the
// associative-algebra BCH implementation it cross-checks.

#include "valgroup/rational.hpp"
#include "valgroup/term.hpp"

#include <array>
#include <map>
#include <stdexcept>

namespace heisenberg_oracle {

using valgroup::Coefficient;
using valgroup::Term;

// affine form c0 + c1 y1 + c2 y2
struct Lin {
	Coefficient c0, c1, c2;

	Lin operator+(const Lin &o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
	Lin scaled(const Coefficient &q) const { return {q * c0, q * c1, q * c2}; }
};

// polynomial c + a1 y1 + a2 y2 + b11 y1^2 + b12 y1 y2 + b22 y2^2 + l y3
struct Quad {
	Coefficient c, a1, a2, b11, b12, b22, l;

	Quad operator+(const Quad &o) const
	{
		return {c + o.c, a1 + o.a1, a2 + o.a2, b11 + o.b11, b12 + o.b12, b22 + o.b22,
		        l + o.l};
	}
	Quad scaled(const Coefficient &q) const
	{
		return {q * c, q * a1, q * a2, q * b11, q * b12, q * b22, q * l};
	}
};

inline Quad lin_product(const Lin &x, const Lin &y)
{
	return {x.c0 * y.c0,
	        x.c0 * y.c1 + x.c1 * y.c0,
	        x.c0 * y.c2 + x.c2 * y.c0,
	        x.c1 * y.c1,
	        x.c1 * y.c2 + x.c2 * y.c1,
	        x.c2 * y.c2,
	        Coefficient(0)};
}

struct Element {
	Lin first, second;
	Quad third;

	static Element constant(const Coefficient &a1, const Coefficient &a2, const Coefficient &a3)
	{
		return {{a1, 0, 0}, {a2, 0, 0}, {a3, 0, 0, 0, 0, 0, 0}};
	}

	static Element variable()
	{
		return {{0, 1, 0}, {0, 0, 1}, {0, 0, 0, 0, 0, 0, 1}};
	}
};

inline Element multiply(const Element &a, const Element &b)
{
	Quad twist = lin_product(a.first, b.second) + lin_product(a.second, b.first).scaled(-1);
	return {a.first + b.first, a.second + b.second,
	        a.third + b.third + twist.scaled(Coefficient(1, 2))};
}

// group powers are scalar in Mal'cev coordinates
inline Element power(const Element &a, const Coefficient &q)
{
	return {a.first.scaled(q), a.second.scaled(q), a.third.scaled(q)};
}

inline Element evaluate(const Term &t, const std::map<std::string, Element> &constants)
{
	switch (t.kind) {
	case Term::Kind::constref:
		return constants.at(t.name);
	case Term::Kind::variable:
		return Element::variable();
	case Term::Kind::mul: {
		Element acc = evaluate(t.children.front(), constants);
		for (std::size_t i = 1; i < t.children.size(); ++i)
			acc = multiply(acc, evaluate(t.children[i], constants));
		return acc;
	}
	case Term::Kind::pow:
		return power(evaluate(t.children.front(), constants), t.exponent);
	}
	throw std::logic_error("unreachable");
}

// closed-form solution of t(y) = 1
inline std::array<Coefficient, 3> solve(const Term &t,
                                        const std::map<std::string, Element> &constants)
{
	Element e = evaluate(t, constants);
	// coordinates 1 and 2 stay decoupled: each depends on its own unknown
	if (!e.first.c2.is_zero() || !e.second.c1.is_zero())
		throw std::logic_error("unexpected coordinate coupling");
	if (e.first.c1.is_zero() || e.second.c2.is_zero() || e.third.l.is_zero())
		throw std::invalid_argument("term is singular over the Heisenberg group");
	Coefficient y1 = -e.first.c0 / e.first.c1;
	Coefficient y2 = -e.second.c0 / e.second.c2;
	Coefficient rest = e.third.c + e.third.a1 * y1 + e.third.a2 * y2 + e.third.b11 * y1 * y1 +
	                   e.third.b12 * y1 * y2 + e.third.b22 * y2 * y2;
	Coefficient y3 = -rest / e.third.l;
	return {y1, y2, y3};
}

} // namespace heisenberg_oracle
