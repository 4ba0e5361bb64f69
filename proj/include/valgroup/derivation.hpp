#pragma once

#include "valgroup/calibration.hpp"
#include "valgroup/parabolic.hpp"
#include "valgroup/series.hpp"

#include <stdexcept>

namespace valgroup {

// A series u with v(u) >= 0 stands for the derivation u * t^2 d/dt. On
// series with nonnegative exponents that contraction condition is automatic,
// so the element type is the series itself. The natural truncation order for
// derivations is two below the parabolic session order: exp shifts
// information up by t^2 and log shifts it back down.
using DerivationElement = TruncatedSeries;

namespace detail {

// u * t^2 d/dt applied to s. Raises valuation by at least one. The result at
// exponent e only involves u below e, so it may be trusted at `order` even
// though u itself carries a lower order.
inline TruncatedSeries apply_derivation(const DerivationElement &u, const TruncatedSeries &s,
                                        int order)
{
	return mul_at(u, shift_up(derivative(s), 2), order);
}

} // namespace detail

// Lie bracket [[u, w]] = u (t^2 w') - (t^2 u') w. Strictly dominated by both
// arguments: v >= v(u) + v(w) + 1.
inline DerivationElement bracket(const DerivationElement &u, const DerivationElement &w)
{
	int order = common_order(u, w);
	TruncatedSeries left = detail::mul_at(u, shift_up(derivative(w), 2), order);
	TruncatedSeries right = detail::mul_at(shift_up(derivative(u), 2), w, order);
	return left - right;
}

// exp(u d)(t) = sum_k (u d)^k(t) / k!. Each application of the derivation
// raises series valuation, so the sum is finite at a fixed order. The result
// is a parabolic series trusted two exponents beyond u's own order.
inline Parabolic exp(const DerivationElement &u)
{
	int order = u.order() + 2;
	TruncatedSeries acc = TruncatedSeries::t(order);
	TruncatedSeries term = TruncatedSeries::t(order);
	Coefficient inv_factorial(1);
	for (int k = 1; k <= order; ++k) {
		term = detail::apply_derivation(u, term, order);
		if (term.is_zero())
			break;
		inv_factorial /= k;
		acc = acc + inv_factorial * term;
	}
	return Parabolic(acc);
}

// Inverse of exp by successive refinement: u <- u + (f - exp(u)) / t^2.
// Each pass raises the agreement order by at least one.
inline DerivationElement log(const Parabolic &f)
{
	int order = f.order() - 2;
	if (order < 0)
		throw std::invalid_argument("log needs truncation order >= 2");
	DerivationElement u = TruncatedSeries::zero(order);
	int previous_gap = 1; // any exponent below the first possible residual
	for (int pass = 0; pass <= f.order(); ++pass) {
		TruncatedSeries residual = f.body() - exp(u).body();
		auto v = residual.valuation();
		if (!v)
			return u;
		if (*v <= previous_gap)
			throw std::logic_error("log refinement failed to make progress");
		previous_gap = *v;
		u = u + shift_down(residual, 2);
	}
	throw std::logic_error("log refinement exceeded its pass bound");
}

// Group law of (Cont(d), *): the Baker-Campbell-Hausdorff product, computed
// through the exp/log correspondence. exp reverses products (see
// calibration.hpp), so the composition below is taken in reverse order; the
// result then matches u + w + 1/2 [[u,w]] + ... through bracket depth 3.
inline DerivationElement bch(const DerivationElement &u, const DerivationElement &w)
{
	static_assert(calibration::exp_reverses_products);
	int order = common_order(u, w);
	return log(compose(exp(w.with_order(order)), exp(u.with_order(order))));
}

inline DerivationElement bch_inverse(const DerivationElement &u) { return -u; }

// the explicit expansion u + w + 1/2 [[u,w]] + 1/12 ([[u,[[u,w]]]] - [[w,[[u,w]]]]),
// exact through bracket depth 3; used as an independent cross-check of bch
inline DerivationElement bch_low_order(const DerivationElement &u, const DerivationElement &w)
{
	DerivationElement inner = bracket(u, w);
	return u + w + Coefficient(1, 2) * inner +
	       Coefficient(1, 12) * (bracket(u, inner) - bracket(w, inner));
}

inline DerivationElement random_derivation(Rng &rng, int order)
{
	TruncatedSeries u = TruncatedSeries::zero(order);
	long terms = rng.uniform(1, 4);
	for (long i = 0; i < terms; ++i)
		u.add_to(static_cast<int>(rng.uniform(0, std::max(0, order))), rng.small_rational());
	return u;
}

} // namespace valgroup
