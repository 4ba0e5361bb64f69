#pragma once

#include "valgroup/derivation.hpp"
#include "valgroup/flows.hpp"
#include "valgroup/laws.hpp"
#include "valgroup/nilpotent.hpp"
#include "valgroup/series_io.hpp"

#include <functional>
#include <memory>

namespace valgroup {

namespace modeldetail {

inline int exp_or_beyond(const std::optional<int> &v, int order) { return v ? *v : order + 1; }

// the value set of exponent-valued models is ordered reversely: a larger
// exponent is a smaller value
inline int reversed_exponent_cmp(int ea, int eb) { return ea > eb ? -1 : ea < eb ? 1 : 0; }

} // namespace modeldetail

// ----- Abelian control ------------------------------------------------------

// (Q, +) with its unique c-dominance: the identity below everything, all
// nontrivial elements equivalent.
struct TrivialAbelianModel {
	using Elem = Coefficient;
	std::string name = "trivial";

	Elem sample(Rng &rng) const { return rng.small_rational_or_zero(); }
	Elem op(const Elem &a, const Elem &b) const { return a + b; }
	Elem inv(const Elem &a) const { return -a; }
	Elem id() const { return Coefficient(0); }
	bool eq(const Elem &a, const Elem &b) const { return a == b; }
	bool is_id(const Elem &a) const { return a.is_zero(); }
	std::string show(const Elem &a) const { return to_string(a); }

	int dom_cmp(const Elem &a, const Elem &b) const
	{
		if (a.is_zero() || b.is_zero())
			return a.is_zero() ? (b.is_zero() ? 0 : -1) : 1;
		return 0;
	}

	Elem pow(const Elem &a, const Coefficient &q) const { return q * a; }
	std::pair<Elem, Elem> commuting_pair(Rng &rng) const
	{
		return {sample(rng), sample(rng)};
	}
	std::pair<Elem, Elem> same_class_pair(Rng &rng) const
	{
		return {rng.small_rational(), rng.small_rational()};
	}
	Elem centralizer_element(Rng &rng, const Elem &) const { return sample(rng); }
};

// ----- affine maps ----------------------------------------------------------

// Bijective affine maps x -> lambda x + v over Q with the three-level
// valuation: lambda != 1 at the top, translations in the middle, the
// identity at the bottom. Solvable, c-valued, and has torsion.
struct AffineModel {
	using Elem = std::pair<Coefficient, Coefficient>; // (lambda, v)
	std::string name = "affine";

	Elem sample(Rng &rng) const
	{
		Coefficient lambda = rng.coin() ? Coefficient(1) : rng.small_rational();
		return {lambda, rng.small_rational_or_zero()};
	}
	Elem op(const Elem &a, const Elem &b) const
	{
		return {a.first * b.first, a.first * b.second + a.second};
	}
	Elem inv(const Elem &a) const
	{
		return {Coefficient(1) / a.first, -a.second / a.first};
	}
	Elem id() const { return {Coefficient(1), Coefficient(0)}; }
	bool eq(const Elem &a, const Elem &b) const { return a == b; }
	bool is_id(const Elem &a) const { return a.first == 1 && a.second.is_zero(); }
	std::string show(const Elem &a) const
	{
		return to_string(a.first) + " x + " + to_string(a.second);
	}

	static int level(const Elem &a)
	{
		if (a.first != 1)
			return 0;
		return a.second.is_zero() ? 2 : 1;
	}
	int dom_cmp(const Elem &a, const Elem &b) const
	{
		// value set ({0,1,2}, >): level 2 is the minimum
		int la = level(a), lb = level(b);
		return la > lb ? -1 : la < lb ? 1 : 0;
	}

	std::pair<Elem, Elem> commuting_pair(Rng &rng) const
	{
		if (rng.coin()) // two translations
			return {{Coefficient(1), rng.small_rational()},
			        {Coefficient(1), rng.small_rational()}};
		// two maps with a shared fixed point p
		Coefficient p = rng.small_rational_or_zero();
		Coefficient l1 = rng.small_rational(), l2 = rng.small_rational();
		return {{l1, (1 - l1) * p}, {l2, (1 - l2) * p}};
	}

	std::pair<Elem, Elem> same_class_pair(Rng &rng) const
	{
		if (rng.coin())
			return {{Coefficient(1), rng.small_rational()},
			        {Coefficient(1), rng.small_rational()}};
		Coefficient l1 = rng.small_rational(), l2 = rng.small_rational();
		if (l1 == 1)
			l1 = Coefficient(2);
		if (l2 == 1)
			l2 = Coefficient(3);
		return {{l1, rng.small_rational_or_zero()}, {l2, rng.small_rational_or_zero()}};
	}

	Elem centralizer_element(Rng &rng, const Elem &f) const
	{
		if (is_id(f))
			return sample(rng);
		if (f.first == 1) // translation: centraliser is the translations
			return {Coefficient(1), rng.small_rational()};
		Coefficient p = f.second / (1 - f.first); // fixed point
		Coefficient mu = rng.small_rational();
		return {mu, (1 - mu) * p};
	}

	std::pair<Elem, long> torsion_witness() const
	{
		return {{Coefficient(-1), Coefficient(3)}, 2};
	}
};

// ----- the composition group ------------------------------------------------

struct CompgroupModel {
	using Elem = Parabolic;
	std::string name = "compgroup";
	int order;
	bool ga_on_inverse = calibration::compgroup_ga_on_inverse;

	explicit CompgroupModel(int order_) : order(order_) {}

	Elem sample(Rng &rng) const { return random_parabolic(rng, order); }
	Elem op(const Elem &a, const Elem &b) const { return compose(a, b); }
	Elem inv(const Elem &a) const { return inverse(a); }
	Elem id() const { return Parabolic::identity(order); }
	bool eq(const Elem &a, const Elem &b) const { return a == b; }
	bool is_id(const Elem &a) const { return is_identity(a); }
	std::string show(const Elem &a) const { return print_series(a.body()); }

	int dom_cmp(const Elem &a, const Elem &b) const
	{
		return modeldetail::reversed_exponent_cmp(modeldetail::exp_or_beyond(val(a), order),
		                                          modeldetail::exp_or_beyond(val(b), order));
	}

	int order_cmp(const Elem &a, const Elem &b) const { return compare(a, b); }
	Elem pow(const Elem &a, const Coefficient &q) const { return power_rational(a, q); }
	Coefficient res_coeff(const Elem &a) const { return res(a).coeff; }

	bool ga_visible(const Elem &f, const Elem &g) const
	{
		return *val(f) + *val(g) - 1 <= order;
	}

	// the conjugate of an element of C(f) by g re-enters C(f) visibly only
	// if the resulting commutator exponent fits under the order; equal
	// classes cancel the leading bracket coefficient and probe deeper still
	bool malnormal_visible(const Elem &f, const Elem &g) const
	{
		return *val(g) != *val(f) && *val(g) + 2 * *val(f) - 2 <= order;
	}

	std::pair<Elem, Elem> commuting_pair(Rng &rng) const
	{
		Elem s = random_parabolic(rng, order);
		return {flow(s, rng.small_rational()), flow(s, rng.small_rational())};
	}

	std::pair<Elem, Elem> same_class_pair(Rng &rng) const
	{
		int rho = static_cast<int>(rng.uniform(2, order - 1));
		auto make = [&](Coefficient lead) {
			TruncatedSeries body = TruncatedSeries::t(order);
			body.set(rho, lead);
			if (rng.coin())
				body.set(static_cast<int>(rng.uniform(rho + 1, order)),
				         rng.small_rational_or_zero());
			return Parabolic(body);
		};
		return {make(rng.small_rational()), make(rng.small_rational())};
	}

	Elem centralizer_element(Rng &rng, const Elem &f) const
	{
		if (is_identity(f))
			return sample(rng);
		return flow(f, rng.small_rational());
	}
};

// ----- contracting derivations under the BCH product -------------------------

struct DerivationsModel {
	using Elem = DerivationElement;
	std::string name = "derivations";
	int order; // derivation order, two below the parabolic session order
	bool ga_on_inverse = calibration::derivations_ga_on_inverse;

	explicit DerivationsModel(int order_) : order(order_) {}

	Elem sample(Rng &rng) const { return random_derivation(rng, order); }
	Elem op(const Elem &a, const Elem &b) const { return bch(a, b); }
	Elem inv(const Elem &a) const { return bch_inverse(a); }
	Elem id() const { return TruncatedSeries::zero(order); }
	bool eq(const Elem &a, const Elem &b) const { return a == b; }
	bool is_id(const Elem &a) const { return a.is_zero(); }
	std::string show(const Elem &a) const { return print_series(a); }

	int dom_cmp(const Elem &a, const Elem &b) const
	{
		return modeldetail::reversed_exponent_cmp(
		    modeldetail::exp_or_beyond(a.valuation(), order),
		    modeldetail::exp_or_beyond(b.valuation(), order));
	}

	int order_cmp(const Elem &a, const Elem &b) const
	{
		TruncatedSeries d = a - b;
		auto v = d.valuation();
		if (!v)
			return 0;
		return d.coeff(*v) > 0 ? 1 : -1;
	}

	// the C-group structure: powers are scalar multiples
	Elem pow(const Elem &a, const Coefficient &q) const { return q * a; }
	Coefficient res_coeff(const Elem &a) const { return a.coeff(*a.valuation()); }

	bool ga_visible(const Elem &f, const Elem &g) const
	{
		return *f.valuation() + *g.valuation() + 1 <= order;
	}

	bool malnormal_visible(const Elem &f, const Elem &g) const
	{
		return *g.valuation() != *f.valuation() &&
		       *g.valuation() + 2 * *f.valuation() + 2 <= order;
	}

	std::pair<Elem, Elem> commuting_pair(Rng &rng) const
	{
		Elem s = random_derivation(rng, order);
		return {rng.small_rational() * s, rng.small_rational() * s};
	}

	std::pair<Elem, Elem> same_class_pair(Rng &rng) const
	{
		int v = static_cast<int>(rng.uniform(0, order - 1));
		auto make = [&](Coefficient lead) {
			TruncatedSeries u = TruncatedSeries::zero(order);
			u.set(v, lead);
			if (rng.coin())
				u.set(static_cast<int>(rng.uniform(v + 1, order)),
				      rng.small_rational_or_zero());
			return u;
		};
		return {make(rng.small_rational()), make(rng.small_rational())};
	}

	Elem centralizer_element(Rng &rng, const Elem &f) const
	{
		if (f.is_zero())
			return sample(rng);
		return rng.small_rational() * f;
	}
};

// ----- free nilpotent groups --------------------------------------------------

// Free nilpotent group with the lower central valuation. Uniformly valued
// with D6, but deliberately not c-valued: central elements commute with
// everything while sitting in a different valuation class, so D5 has
// honest counterexamples.
struct NilpotentModel {
	using Elem = NilElement;
	std::string name = "nilpotent";
	std::shared_ptr<FreeNilAlgebra> algebra;

	explicit NilpotentModel(std::shared_ptr<FreeNilAlgebra> alg) : algebra(std::move(alg)) {}

	Elem sample(Rng &rng) const { return random_nil(rng, *algebra); }
	Elem op(const Elem &a, const Elem &b) const { return nil_mul(a, b); }
	Elem inv(const Elem &a) const { return nil_inverse(a); }
	Elem id() const { return NilElement(*algebra); }
	bool eq(const Elem &a, const Elem &b) const { return a == b; }
	bool is_id(const Elem &a) const { return a.is_zero(); }

	std::string show(const Elem &a) const { return nil_to_string(a); }

	int dom_cmp(const Elem &a, const Elem &b) const
	{
		int beyond = algebra->nil_class() + 1;
		auto wa = lc_val(a), wb = lc_val(b);
		return modeldetail::reversed_exponent_cmp(wa ? *wa : beyond, wb ? *wb : beyond);
	}

	Elem pow(const Elem &a, const Coefficient &q) const { return nil_pow(a, q); }

	Elem central_element(Rng &rng) const
	{
		std::map<std::size_t, Coefficient> coords;
		for (std::size_t i = 0; i < algebra->dimension(); ++i)
			if (algebra->basis()[i].weight == algebra->nil_class() && rng.coin())
				coords.emplace(i, rng.small_rational());
		if (coords.empty())
			coords.emplace(algebra->dimension() - 1, rng.small_rational());
		return NilElement(*algebra, std::move(coords));
	}

	bool is_central(const Elem &a) const
	{
		for (int g = 0; g < algebra->generators(); ++g) {
			NilElement gen(*algebra, {{static_cast<std::size_t>(g), Coefficient(1)}});
			if (!nil_bracket(a, gen).is_zero())
				return false;
		}
		return true;
	}

	std::pair<Elem, Elem> commuting_pair(Rng &rng) const
	{
		Elem a = sample(rng);
		if (rng.coin())
			return {a, nil_pow(a, rng.small_rational())};
		return {a, central_element(rng)};
	}

	std::pair<Elem, Elem> same_class_pair(Rng &rng) const
	{
		int w = static_cast<int>(rng.uniform(1, algebra->nil_class()));
		auto make = [&] {
			std::map<std::size_t, Coefficient> coords;
			for (std::size_t i = 0; i < algebra->dimension(); ++i) {
				int wi = algebra->basis()[i].weight;
				if (wi == w || (wi > w && rng.coin()))
					if (rng.coin())
						coords[i] = rng.small_rational();
			}
			bool has_lead = false;
			for (const auto &[i, c] : coords)
				has_lead |= algebra->basis()[i].weight == w;
			if (!has_lead)
				coords[first_of_weight(w)] = rng.small_rational();
			return NilElement(*algebra, std::move(coords));
		};
		return {make(), make()};
	}

	std::size_t first_of_weight(int w) const
	{
		for (std::size_t i = 0; i < algebra->dimension(); ++i)
			if (algebra->basis()[i].weight == w)
				return i;
		return 0;
	}

	Elem centralizer_element(Rng &rng, const Elem &f) const
	{
		if (f.is_zero())
			return sample(rng);
		if (is_central(f)) // the centraliser is the whole group
			return sample(rng);
		if (rng.coin())
			return nil_pow(f, rng.small_rational());
		return central_element(rng);
	}
};

// ----- product controls -------------------------------------------------------

// Remark-style product of two composition groups: the valuation reads the
// second component when it is nontrivial and falls back to the first
// otherwise, with the fallback values placed below in the value order. A
// valuation, but never a c-valuation: ((h,1),(1,g)) commutes with distinct
// values.
struct ProductControlModel {
	using Elem = std::pair<Parabolic, Parabolic>;
	std::string name = "product";
	int order;

	explicit ProductControlModel(int order_) : order(order_) {}

	Elem sample(Rng &rng) const
	{
		return {random_parabolic(rng, order), random_parabolic(rng, order)};
	}
	Elem op(const Elem &a, const Elem &b) const
	{
		return {compose(a.first, b.first), compose(a.second, b.second)};
	}
	Elem inv(const Elem &a) const { return {inverse(a.first), inverse(a.second)}; }
	Elem id() const { return {Parabolic::identity(order), Parabolic::identity(order)}; }
	bool eq(const Elem &a, const Elem &b) const { return a == b; }
	bool is_id(const Elem &a) const { return is_identity(a.first) && is_identity(a.second); }
	std::string show(const Elem &a) const
	{
		return "(" + print_series(a.first.body()) + " | " + print_series(a.second.body()) + ")";
	}

	// (tier, exponent) key; tiers ordered 0 < 1 in the value order, the
	// identity below both
	std::pair<int, int> key(const Elem &a) const
	{
		if (!is_identity(a.second))
			return {1, *val(a.second)};
		if (!is_identity(a.first))
			return {0, *val(a.first)};
		return {-1, 0};
	}

	int dom_cmp(const Elem &a, const Elem &b) const
	{
		auto ka = key(a), kb = key(b);
		if (ka.first != kb.first)
			return ka.first < kb.first ? -1 : 1;
		return modeldetail::reversed_exponent_cmp(ka.second, kb.second);
	}

	std::pair<Elem, Elem> commuting_pair(Rng &rng) const
	{
		Parabolic id = Parabolic::identity(order);
		if (rng.coin()) {
			// the V5 killer: commuting elements straddling the two factors
			return {Elem{random_parabolic(rng, order), id},
			        Elem{id, random_parabolic(rng, order)}};
		}
		Parabolic s = random_parabolic(rng, order), u = random_parabolic(rng, order);
		return {Elem{flow(s, rng.small_rational()), flow(u, rng.small_rational())},
		        Elem{flow(s, rng.small_rational()), flow(u, rng.small_rational())}};
	}

	std::pair<Elem, Elem> same_class_pair(Rng &rng) const
	{
		Parabolic id = Parabolic::identity(order);
		int rho = static_cast<int>(rng.uniform(2, order - 1));
		auto para = [&] {
			TruncatedSeries body = TruncatedSeries::t(order);
			body.set(rho, rng.small_rational());
			return Parabolic(body);
		};
		if (rng.coin())
			return {Elem{random_parabolic(rng, order), para()},
			        Elem{random_parabolic(rng, order), para()}};
		return {Elem{para(), id}, Elem{para(), id}};
	}
};

// Product of two free nilpotent groups with the min-of-weights valuation
// (the lower central valuation of the direct product). Uniformly valued,
// fails D5 the same way.
struct NilProductControlModel {
	using Elem = std::pair<NilElement, NilElement>;
	std::string name = "nilproduct";
	std::shared_ptr<FreeNilAlgebra> algebra;

	explicit NilProductControlModel(std::shared_ptr<FreeNilAlgebra> alg) : algebra(std::move(alg))
	{
	}

	Elem sample(Rng &rng) const { return {random_nil(rng, *algebra), random_nil(rng, *algebra)}; }
	Elem op(const Elem &a, const Elem &b) const
	{
		return {nil_mul(a.first, b.first), nil_mul(a.second, b.second)};
	}
	Elem inv(const Elem &a) const { return {nil_inverse(a.first), nil_inverse(a.second)}; }
	Elem id() const { return {NilElement(*algebra), NilElement(*algebra)}; }
	bool eq(const Elem &a, const Elem &b) const { return a == b; }
	bool is_id(const Elem &a) const { return a.first.is_zero() && a.second.is_zero(); }
	std::string show(const Elem &a) const
	{
		NilpotentModel helper(algebra);
		return "(" + helper.show(a.first) + " | " + helper.show(a.second) + ")";
	}

	int weight_key(const Elem &a) const
	{
		int beyond = algebra->nil_class() + 1;
		auto wa = lc_val(a.first), wb = lc_val(a.second);
		return std::min(wa ? *wa : beyond, wb ? *wb : beyond);
	}

	int dom_cmp(const Elem &a, const Elem &b) const
	{
		return modeldetail::reversed_exponent_cmp(weight_key(a), weight_key(b));
	}

	Elem pow(const Elem &a, const Coefficient &q) const
	{
		return {nil_pow(a.first, q), nil_pow(a.second, q)};
	}

	std::pair<Elem, Elem> commuting_pair(Rng &rng) const
	{
		NilElement zero(*algebra);
		if (rng.coin())
			return {Elem{random_nil(rng, *algebra), zero},
			        Elem{zero, random_nil(rng, *algebra)}};
		Elem a = sample(rng);
		return {a, pow(a, rng.small_rational())};
	}

	std::pair<Elem, Elem> same_class_pair(Rng &rng) const
	{
		NilpotentModel helper(algebra);
		auto [f1, f2] = helper.same_class_pair(rng);
		return {Elem{f1, random_nil(rng, *algebra)}, Elem{f2, random_nil(rng, *algebra)}};
	}
};

// ----- registry ---------------------------------------------------------------

// Type-erased handle on one builtin model: the applicable laws plus a
// runner closing over the model instance.
struct ModelRunner {
	std::string name;
	std::vector<std::string> laws;
	std::function<LawReport(const std::string &, int, std::uint64_t)> run;
};

inline std::vector<ModelRunner> builtin_models(int order = 12)
{
	std::vector<ModelRunner> registry;
	auto add = [&registry](auto model, std::vector<std::string> laws) {
		ModelRunner runner;
		runner.name = model.name;
		runner.laws = std::move(laws);
		runner.run = [model](const std::string &law, int samples, std::uint64_t seed) {
			return check_law(model, law, samples, seed);
		};
		registry.push_back(std::move(runner));
	};

	std::vector<std::string> base = {"D1", "D2", "D3", "D4", "ABSORB", "COMMDROP", "SIMAGREE", "BALLEQ"};
	auto with = [&base](std::initializer_list<std::string> extra) {
		std::vector<std::string> laws = base;
		laws.insert(laws.end(), extra);
		return laws;
	};

	// D8/D9 are omitted for the trivial model: their hypothesis eps < f has
	// no witnesses when every nontrivial element is equivalent
	add(TrivialAbelianModel{}, with({"D5", "D6", "NA", "D7", "POWCOMM", "ABELCENT", "RESCONJ"}));
	add(AffineModel{}, with({"D5", "D6", "NA", "POWCOMM", "ABELCENT", "RESCONJ", "TORSION"}));
	add(CompgroupModel(order),
	    with({"D5", "D6", "NA", "D7", "D8", "D9", "GA", "GOG1", "GOG2", "GOG3", "POWCOMM",
	          "ABELCENT", "RESCONJ", "D9Z", "MALNORMAL"}));
	add(DerivationsModel(order - 2),
	    with({"D5", "D6", "NA", "D7", "D8", "D9", "GA", "GOG1", "GOG2", "GOG3", "POWCOMM",
	          "ABELCENT", "RESCONJ", "D9Z", "MALNORMAL"}));

	auto nil_algebra = std::make_shared<FreeNilAlgebra>(2, 3);
	add(NilpotentModel(nil_algebra), with({"D5", "D6", "NA", "D7", "D8", "D9", "POWCOMM",
	                                       "ABELCENT", "RESCONJ", "D9Z", "MALNORMAL"}));
	add(ProductControlModel(order), with({"D5", "D6", "NA", "RESCONJ"}));
	add(NilProductControlModel(nil_algebra),
	    with({"D5", "D6", "NA", "D7", "D8", "D9", "RESCONJ", "D9Z"}));

	return registry;
}

inline const ModelRunner &find_model(const std::vector<ModelRunner> &registry,
                                     const std::string &name)
{
	for (const auto &m : registry)
		if (m.name == name)
			return m;
	throw std::invalid_argument("unknown model '" + name + "'");
}

} // namespace valgroup
