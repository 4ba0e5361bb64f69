#pragma once

#include "valgroup/rational.hpp"

#include <atomic>
#include <cassert>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace valgroup {

// Counts operations that had to reconcile operands of different truncation
// orders (the result is truncated to the smaller one). Client code such as
// the CLI surfaces this as a diagnostic.
inline std::atomic<long> &mixed_order_warnings()
{
	static std::atomic<long> count{0};
	return count;
}

// A power series with nonnegative exponents and exact rational coefficients,
// truncated at `order`: coefficients at exponents > order are unrepresented.
// Stored coefficients are never zero. Values are immutable after
// construction; all operations are pure.
class TruncatedSeries {
public:
	explicit TruncatedSeries(int order) : order_(order) { assert(order >= 0); }

	static TruncatedSeries zero(int order) { return TruncatedSeries(order); }

	static TruncatedSeries monomial(const Coefficient &c, int exponent, int order)
	{
		TruncatedSeries s(order);
		s.set(exponent, c);
		return s;
	}

	// the identity series t
	static TruncatedSeries t(int order) { return monomial(1, 1, order); }

	static TruncatedSeries constant(const Coefficient &c, int order)
	{
		return monomial(c, 0, order);
	}

	int order() const { return order_; }

	const std::map<int, Coefficient> &coeffs() const { return coeffs_; }

	Coefficient coeff(int exponent) const
	{
		assert(exponent >= 0 && exponent <= order_);
		auto it = coeffs_.find(exponent);
		return it == coeffs_.end() ? Coefficient(0) : it->second;
	}

	// smallest exponent with a nonzero coefficient; nullopt means the series
	// vanishes at every represented exponent (valuation >= order + 1)
	std::optional<int> valuation() const
	{
		if (coeffs_.empty())
			return std::nullopt;
		return coeffs_.begin()->first;
	}

	bool is_zero() const { return coeffs_.empty(); }

	// equality of all coefficients at exponents <= k
	bool agrees_with(const TruncatedSeries &other, int k) const
	{
		assert(k <= order_ && k <= other.order_);
		auto a = coeffs_.begin();
		auto b = other.coeffs_.begin();
		while (true) {
			bool a_done = a == coeffs_.end() || a->first > k;
			bool b_done = b == other.coeffs_.end() || b->first > k;
			if (a_done || b_done)
				return a_done && b_done;
			if (a->first != b->first || a->second != b->second)
				return false;
			++a, ++b;
		}
	}

	// Reinterprets the trusted order. Raising it is only sound when the
	// caller can account for every coefficient up to the new order (the
	// valuation bookkeeping in taylor_compose and exp does exactly that).
	TruncatedSeries with_order(int new_order) const
	{
		TruncatedSeries r(new_order);
		for (const auto &[e, c] : coeffs_)
			if (e <= new_order)
				r.coeffs_.emplace(e, c);
		return r;
	}

	void set(int exponent, const Coefficient &c)
	{
		assert(exponent >= 0);
		if (exponent > order_)
			return;
		if (c.is_zero())
			coeffs_.erase(exponent);
		else
			coeffs_[exponent] = c;
	}

	void add_to(int exponent, const Coefficient &c)
	{
		assert(exponent >= 0);
		if (exponent > order_ || c.is_zero())
			return;
		auto [it, inserted] = coeffs_.emplace(exponent, c);
		if (!inserted) {
			it->second += c;
			if (it->second.is_zero())
				coeffs_.erase(it);
		}
	}

private:
	std::map<int, Coefficient> coeffs_;
	int order_;
};

inline int common_order(const TruncatedSeries &a, const TruncatedSeries &b)
{
	if (a.order() != b.order())
		mixed_order_warnings()++;
	return std::min(a.order(), b.order());
}

// equality up to the shared truncation order
inline bool operator==(const TruncatedSeries &a, const TruncatedSeries &b)
{
	return a.agrees_with(b, common_order(a, b));
}

inline bool operator!=(const TruncatedSeries &a, const TruncatedSeries &b) { return !(a == b); }

inline TruncatedSeries operator+(const TruncatedSeries &a, const TruncatedSeries &b)
{
	TruncatedSeries r = a.with_order(common_order(a, b));
	for (const auto &[e, c] : b.coeffs())
		r.add_to(e, c);
	return r;
}

inline TruncatedSeries operator-(const TruncatedSeries &a, const TruncatedSeries &b)
{
	TruncatedSeries r = a.with_order(common_order(a, b));
	for (const auto &[e, c] : b.coeffs())
		r.add_to(e, -c);
	return r;
}

inline TruncatedSeries operator-(const TruncatedSeries &a)
{
	TruncatedSeries r(a.order());
	for (const auto &[e, c] : a.coeffs())
		r.set(e, -c);
	return r;
}

inline TruncatedSeries operator*(const Coefficient &c, const TruncatedSeries &a)
{
	TruncatedSeries r(a.order());
	if (c.is_zero())
		return r;
	for (const auto &[e, v] : a.coeffs())
		r.set(e, c * v);
	return r;
}

namespace detail {

// Cauchy product truncated at an explicit order, independent of the
// operands' own orders. Callers are responsible for the precision claim.
inline TruncatedSeries mul_at(const TruncatedSeries &a, const TruncatedSeries &b, int order)
{
	TruncatedSeries r(order);
	for (const auto &[ea, ca] : a.coeffs()) {
		if (ea > order)
			break;
		for (const auto &[eb, cb] : b.coeffs()) {
			if (ea + eb > order)
				break;
			r.add_to(ea + eb, ca * cb);
		}
	}
	return r;
}

} // namespace detail

inline TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b)
{
	return detail::mul_at(a, b, common_order(a, b));
}

// termwise d/dt; the result is trusted one exponent less far out
inline TruncatedSeries derivative(const TruncatedSeries &s)
{
	TruncatedSeries r(std::max(s.order() - 1, 0));
	for (const auto &[e, c] : s.coeffs())
		if (e >= 1)
			r.set(e - 1, Coefficient(e) * c);
	return r;
}

// multiplication by t^k; exact, so the trusted order grows with the shift
inline TruncatedSeries shift_up(const TruncatedSeries &s, int k)
{
	assert(k >= 0);
	TruncatedSeries r(s.order() + k);
	for (const auto &[e, c] : s.coeffs())
		r.set(e + k, c);
	return r;
}

// division by t^k; requires valuation >= k
inline TruncatedSeries shift_down(const TruncatedSeries &s, int k)
{
	assert(k >= 0);
	auto v = s.valuation();
	if (v && *v < k)
		throw std::invalid_argument("series not divisible by t^" + std::to_string(k));
	TruncatedSeries r(std::max(s.order() - k, 0));
	for (const auto &[e, c] : s.coeffs())
		r.set(e - k, c);
	return r;
}

// f(s) computed by summing f_e * s^e; requires v(s) >= 1, which confines the
// influence of each power so the result is trusted at the shared order
inline TruncatedSeries substitute(const TruncatedSeries &f, const TruncatedSeries &s)
{
	auto vs = s.valuation();
	if (vs && *vs < 1)
		throw std::invalid_argument("substitution point must vanish at 0");
	int order = common_order(f, s);
	TruncatedSeries acc(order);
	TruncatedSeries power = TruncatedSeries::constant(1, order);
	int e_prev = 0;
	for (const auto &[e, c] : f.coeffs()) {
		if (e > order)
			break;
		for (; e_prev < e; ++e_prev) {
			power = detail::mul_at(power, s, order);
			if (power.is_zero())
				return acc;
		}
		acc = acc + c * power;
	}
	return acc;
}

// f(s) via the Taylor sum over derivatives of f against delta = s - t.
// Requires v(delta) >= 2. The i-th derivative is only trusted to order - i,
// but multiplying by delta^i (valuation >= 2i) pushes every represented
// coefficient back inside the trusted range, so the term may be accumulated
// at the full order.
inline TruncatedSeries taylor_compose(const TruncatedSeries &f, const TruncatedSeries &s)
{
	int order = common_order(f, s);
	TruncatedSeries delta = s.with_order(order) - TruncatedSeries::t(order);
	auto vd = delta.valuation();
	if (vd && *vd < 2)
		throw std::invalid_argument("taylor_compose requires v(s - t) >= 2");
	TruncatedSeries acc = f.with_order(order);
	if (delta.is_zero())
		return acc;
	TruncatedSeries deriv = f.with_order(order);
	TruncatedSeries delta_pow = TruncatedSeries::constant(1, order);
	Coefficient inv_factorial(1);
	for (int i = 1; i * *vd <= order; ++i) {
		deriv = derivative(deriv);
		delta_pow = detail::mul_at(delta_pow, delta, order);
		inv_factorial /= i;
		if (deriv.is_zero() || delta_pow.is_zero())
			break;
		acc = acc + detail::mul_at(inv_factorial * deriv, delta_pow, order);
	}
	return acc;
}

} // namespace valgroup
