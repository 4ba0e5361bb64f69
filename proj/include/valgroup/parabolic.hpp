#pragma once

#include "valgroup/rng.hpp"
#include "valgroup/series.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace valgroup {

// An element t + sum_{n>=2} f_n t^n of the composition group: valuation 1
// and leading coefficient 1.
class Parabolic {
public:
	explicit Parabolic(TruncatedSeries body) : body_(std::move(body))
	{
		if (body_.order() < 1 || body_.coeff(0) != 0 || body_.coeff(1) != 1)
			throw std::invalid_argument(
			    "parabolic series must start with t (zero constant term, unit linear term)");
	}

	static Parabolic identity(int order) { return Parabolic(TruncatedSeries::t(order)); }

	const TruncatedSeries &body() const { return body_; }
	int order() const { return body_.order(); }

	// f - t, the deviation from the identity
	TruncatedSeries delta() const { return body_ - TruncatedSeries::t(body_.order()); }

private:
	TruncatedSeries body_;
};

inline bool operator==(const Parabolic &f, const Parabolic &g) { return f.body() == g.body(); }
inline bool operator!=(const Parabolic &f, const Parabolic &g) { return !(f == g); }

// group law: (f, g) -> f(g), substitution of g into f
inline Parabolic compose(const Parabolic &f, const Parabolic &g)
{
	return Parabolic(substitute(f.body(), g.body()));
}

// val(f) = v(f - t), an exponent >= 2; nullopt is the trivial marker for the
// identity up to order. The value set is ordered reversely: larger exponents
// are smaller values.
inline std::optional<int> val(const Parabolic &f) { return f.delta().valuation(); }

inline bool is_identity(const Parabolic &f) { return f.delta().is_zero(); }

// Compositional inverse, solved coefficient by coefficient: bumping g at
// exponent k moves f(g) at exponent k by exactly the same amount.
inline Parabolic inverse(const Parabolic &f)
{
	int order = f.order();
	TruncatedSeries g = TruncatedSeries::t(order);
	for (int k = 2; k <= order; ++k) {
		TruncatedSeries residual = substitute(f.body(), g) - TruncatedSeries::t(order);
		g.add_to(k, -residual.coeff(k));
	}
	return Parabolic(g);
}

// f g f^-1; preserves val and res
inline Parabolic conjugate(const Parabolic &f, const Parabolic &g)
{
	return compose(compose(f, g), inverse(f));
}

// [f, g] = f^-1 g^-1 f g
inline Parabolic commutator(const Parabolic &f, const Parabolic &g)
{
	return compose(compose(compose(inverse(f), inverse(g)), f), g);
}

inline Parabolic power_int(const Parabolic &f, long n)
{
	if (n < 0)
		return power_int(inverse(f), -n);
	Parabolic acc = Parabolic::identity(f.order());
	Parabolic base = f;
	while (n > 0) {
		if (n & 1)
			acc = compose(acc, base);
		base = compose(base, base);
		n >>= 1;
	}
	return acc;
}

// The residue of f: its valuation together with the leading coefficient of
// f - t. Residues at a fixed rho add like elements of (C, +).
struct Residue {
	std::optional<int> rho;
	Coefficient coeff; // nonzero iff rho is set

	static Residue zero() { return Residue{std::nullopt, Coefficient(0)}; }
	bool is_zero() const { return !rho.has_value(); }
};

inline bool operator==(const Residue &a, const Residue &b)
{
	return a.rho == b.rho && a.coeff == b.coeff;
}
inline bool operator!=(const Residue &a, const Residue &b) { return !(a == b); }

inline Residue res(const Parabolic &f)
{
	TruncatedSeries d = f.delta();
	auto v = d.valuation();
	if (!v)
		return Residue::zero();
	return Residue{*v, d.coeff(*v)};
}

inline Residue residue_add(const Residue &a, const Residue &b)
{
	if (a.is_zero())
		return b;
	if (b.is_zero())
		return a;
	if (*a.rho != *b.rho)
		throw std::invalid_argument("residues live in different value classes");
	Coefficient sum = a.coeff + b.coeff;
	if (sum.is_zero())
		return Residue::zero();
	return Residue{a.rho, sum};
}

inline Residue residue_scale(const Coefficient &a, const Residue &r)
{
	if (r.is_zero() || a.is_zero())
		return Residue::zero();
	return Residue{r.rho, a * r.coeff};
}

// Total order: sign of the leading coefficient of f - g. This is the
// lexicographic order on coefficients; val classes meet the positive cone
// in convex sets.
inline int compare(const Parabolic &f, const Parabolic &g)
{
	TruncatedSeries d = f.body() - g.body();
	auto v = d.valuation();
	if (!v)
		return 0;
	return d.coeff(*v) > 0 ? 1 : -1;
}

enum class BallSide { left, right };

// Membership of h in the strict ball of radius rho around center: the
// displacement must have valuation strictly below rho in the value order,
// i.e. exponent strictly above rho.
inline bool ball_membership(const Parabolic &h, const Parabolic &center, int rho, BallSide side)
{
	if (rho < 2)
		throw std::invalid_argument("ball radius must be an exponent >= 2");
	Parabolic displaced = side == BallSide::right ? compose(inverse(center), h)
	                                              : compose(h, inverse(center));
	auto v = val(displaced);
	return !v || *v > rho;
}

// seeded sampler: a random parabolic with a handful of small rational terms
inline Parabolic random_parabolic(Rng &rng, int order)
{
	TruncatedSeries body = TruncatedSeries::t(order);
	long terms = rng.uniform(1, 4);
	for (long i = 0; i < terms; ++i)
		body.add_to(static_cast<int>(rng.uniform(2, std::max(2, order))), rng.small_rational());
	return Parabolic(body);
}

} // namespace valgroup
