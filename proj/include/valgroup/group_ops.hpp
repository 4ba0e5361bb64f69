#pragma once

#include "valgroup/flows.hpp"
#include "valgroup/parabolic.hpp"

#include <optional>

namespace valgroup {

// Group operations bundle for term evaluation and the equation solver,
// instantiated for the composition group here and for free nilpotent groups
// in nilpotent.hpp.
struct CompgroupOps {
	using Elem = Parabolic;
	using Context = int; // the truncation order

	static Elem op(const Elem &a, const Elem &b) { return compose(a, b); }
	static Elem inv(const Elem &a) { return inverse(a); }
	static Elem pow(const Elem &a, const Coefficient &q) { return power_rational(a, q); }
	static Elem identity(Context order) { return Parabolic::identity(order); }
	static bool is_id(const Elem &a) { return is_identity(a); }

	// valuation level of the deviation from the identity; levels strictly
	// increase along the solver trace
	static std::optional<int> level(const Elem &u) { return val(u); }

	static int max_steps(Context order) { return order - 1; }

	// minimal-support representative g with alpha * res(g) = -res(u):
	// g = t - (c / alpha) t^rho
	static Elem correction(const Elem &u, const Coefficient &alpha_value)
	{
		int rho = *val(u);
		Coefficient c = u.delta().coeff(rho);
		TruncatedSeries body = TruncatedSeries::t(u.order());
		body.set(rho, -c / alpha_value);
		return Elem(body);
	}

	static Coefficient residue_coefficient(const Elem &u) { return u.delta().coeff(*val(u)); }
};

} // namespace valgroup
