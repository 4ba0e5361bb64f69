#pragma once

#include "valgroup/derivation.hpp"
#include "valgroup/parabolic.hpp"

#include <utility>
#include <vector>

namespace valgroup {

// One-parameter family through f: flow(f, 1) = f, flows at mu and nu
// compose to the flow at mu + nu, and every flow commutes with f. This is
// the rational power structure of the composition group.
inline Parabolic flow(const Parabolic &f, const Coefficient &mu)
{
	return exp(mu * log(f));
}

// unique n-th compositional root, n >= 1
inline Parabolic nth_root(const Parabolic &f, long n)
{
	if (n < 1)
		throw std::invalid_argument("nth_root needs n >= 1");
	return flow(f, Coefficient(1, n));
}

// rational power f^q through the flow; integer arguments agree with
// power_int (cross-checked in tests)
inline Parabolic power_rational(const Parabolic &f, const Coefficient &q)
{
	if (is_integer(q)) {
		Integer n = numerator(q);
		if (n >= -16 && n <= 16)
			return power_int(f, static_cast<long>(n));
	}
	return flow(f, q);
}

// Lie algebra structure transported through log: a commutative, associative
// addition and a bracket on the group itself.
inline Parabolic group_add(const Parabolic &f, const Parabolic &g)
{
	return exp(log(f) + log(g));
}

inline Parabolic group_bracket(const Parabolic &f, const Parabolic &g)
{
	return exp(bracket(log(f), log(g)));
}

// canonical scaling element at exponent rho
inline Parabolic scaling_element(int rho, int order)
{
	if (rho < 2)
		throw std::invalid_argument("scaling element exponent must be >= 2");
	TruncatedSeries body = TruncatedSeries::t(order);
	body.set(rho, 1);
	return Parabolic(body);
}

// Greedy decomposition of f into flows of the canonical scaling elements:
// each step peels the residue of the remainder, so the recorded exponents
// strictly increase and composing the factors left to right restores f.
inline std::vector<std::pair<int, Coefficient>> decompose(const Parabolic &f)
{
	std::vector<std::pair<int, Coefficient>> factors;
	Parabolic u = f;
	while (auto rho = val(u)) {
		Coefficient mu = u.delta().coeff(*rho);
		factors.emplace_back(*rho, mu);
		u = compose(inverse(flow(scaling_element(*rho, f.order()), mu)), u);
		if (factors.size() > 1 && factors[factors.size() - 2].first >= *rho)
			throw std::logic_error("decompose failed to increase the peeled exponent");
	}
	return factors;
}

inline Parabolic recompose(const std::vector<std::pair<int, Coefficient>> &factors, int order)
{
	Parabolic r = Parabolic::identity(order);
	for (auto it = factors.rbegin(); it != factors.rend(); ++it)
		r = compose(flow(scaling_element(it->first, order), it->second), r);
	return r;
}

} // namespace valgroup
