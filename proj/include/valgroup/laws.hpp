#pragma once

#include "valgroup/rng.hpp"

#include <concepts>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace valgroup {

// Outcome of checking one law against one model. A failing report always
// carries a replayable counterexample: re-running the same (law, samples,
// seed) triple reproduces it exactly.
struct LawReport {
	std::string model;
	std::string law;
	int samples = 0;
	std::uint64_t seed = 0;
	bool applicable = true;
	bool pass = false;
	int effective = 0; // samples that actually exercised the hypothesis
	std::vector<std::string> counterexample;

	std::string verdict() const { return !applicable ? "n/a" : pass ? "pass" : "fail"; }
};

// ----- model capabilities -------------------------------------------------

// A model bundles a seeded sampler with the group structure, a total
// dominance comparison (dom_cmp(f, g) < 0 means f is strictly dominated),
// and whatever optional structure it supports. Laws probe for capabilities
// with the concepts below and report "not applicable" when one is missing.

template <typename M>
concept HasOrder = requires(const M &m, const typename M::Elem &a) {
	{ m.order_cmp(a, a) } -> std::convertible_to<int>;
};

template <typename M>
concept HasPowers = requires(const M &m, const typename M::Elem &a, const Coefficient &q) {
	{ m.pow(a, q) } -> std::convertible_to<typename M::Elem>;
};

template <typename M>
concept HasCommutingPairs = requires(const M &m, Rng &rng) {
	{ m.commuting_pair(rng) } -> std::convertible_to<std::pair<typename M::Elem, typename M::Elem>>;
};

template <typename M>
concept HasSameClassPairs = requires(const M &m, Rng &rng) {
	{ m.same_class_pair(rng) } -> std::convertible_to<std::pair<typename M::Elem, typename M::Elem>>;
};

template <typename M>
concept HasCentralizerSampling = requires(const M &m, Rng &rng, const typename M::Elem &f) {
	{ m.centralizer_element(rng, f) } -> std::convertible_to<typename M::Elem>;
};

template <typename M>
concept HasResidueCoeff = requires(const M &m, const typename M::Elem &a) {
	{ m.res_coeff(a) } -> std::convertible_to<Coefficient>;
};

template <typename M>
concept HasTorsionWitness = requires(const M &m) {
	{ m.torsion_witness() } -> std::convertible_to<std::pair<typename M::Elem, long>>;
};

template <typename M>
concept HasGaVisibility = requires(const M &m, const typename M::Elem &a) {
	{ m.ga_visible(a, a) } -> std::convertible_to<bool>;
};

template <typename M>
concept HasMalnormalVisibility = requires(const M &m, const typename M::Elem &a) {
	{ m.malnormal_visible(a, a) } -> std::convertible_to<bool>;
};

// ----- generic helpers ----------------------------------------------------

namespace lawdetail {

template <typename M>
typename M::Elem conj(const M &m, const typename M::Elem &h, const typename M::Elem &x)
{
	return m.op(m.op(h, x), m.inv(h));
}

template <typename M>
typename M::Elem comm(const M &m, const typename M::Elem &f, const typename M::Elem &g)
{
	return m.op(m.op(m.op(m.inv(f), m.inv(g)), f), g);
}

// f ~ g: the residues agree, expressed valuation-theoretically
template <typename M>
bool similar(const M &m, const typename M::Elem &f, const typename M::Elem &g)
{
	bool fid = m.is_id(f), gid = m.is_id(g);
	if (fid || gid)
		return fid == gid;
	return m.dom_cmp(m.op(f, m.inv(g)), f) < 0;
}

template <typename M> typename M::Elem nontrivial(const M &m, Rng &rng)
{
	for (int i = 0; i < 64; ++i) {
		auto f = m.sample(rng);
		if (!m.is_id(f))
			return f;
	}
	throw std::logic_error("sampler failed to produce a nontrivial element");
}

// conjugation in the orientation recorded for the model's growth axiom
template <typename M>
typename M::Elem ga_conj(const M &m, const typename M::Elem &f, const typename M::Elem &g)
{
	if (m.ga_on_inverse)
		return m.op(m.op(m.inv(f), g), f);
	return conj(m, f, g);
}

} // namespace lawdetail

// ----- the harness --------------------------------------------------------

// Evaluates the quantifier-free matrix of `law` on seeded samples from the
// model; all comparisons are exact. Universal laws are sampled, never
// proved: the harness guards the implementation, not the mathematics.
template <typename M>
LawReport check_law(const M &model, const std::string &law, int samples, std::uint64_t seed)
{
	using Elem = typename M::Elem;
	LawReport report{model.name, law, samples, seed, true, true, 0, {}};
	Rng rng(seed);

	auto fail = [&](std::initializer_list<Elem> witness) {
		report.pass = false;
		for (const Elem &e : witness)
			report.counterexample.push_back(model.show(e));
	};
	auto sample_nontrivial = [&] { return lawdetail::nontrivial(model, rng); };

	if (law == "D1") {
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = sample_nontrivial();
			++report.effective;
			if (!(model.dom_cmp(model.id(), f) < 0))
				fail({f});
		}
	} else if (law == "D2") {
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = model.sample(rng), g = model.sample(rng);
			++report.effective;
			Elem fg = model.op(f, g);
			if (!(model.dom_cmp(fg, f) <= 0 || model.dom_cmp(fg, g) <= 0))
				fail({f, g});
		}
	} else if (law == "D3") {
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = model.sample(rng), g = model.sample(rng), h = model.sample(rng);
			++report.effective;
			int before = model.dom_cmp(f, g);
			int after = model.dom_cmp(lawdetail::conj(model, h, f), lawdetail::conj(model, h, g));
			if (before != after)
				fail({f, g, h});
		}
	} else if (law == "D4") {
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = model.sample(rng);
			++report.effective;
			if (model.dom_cmp(f, model.inv(f)) != 0)
				fail({f});
		}
	} else if (law == "D5") {
		if constexpr (HasCommutingPairs<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				auto [f, g] = model.commuting_pair(rng);
				if (model.is_id(f) || model.is_id(g))
					continue;
				++report.effective;
				if (model.dom_cmp(f, g) != 0)
					fail({f, g});
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "D6") {
		if constexpr (HasSameClassPairs<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				auto [f, g] = model.same_class_pair(rng);
				if (model.is_id(f) || model.is_id(g) || model.dom_cmp(f, g) != 0)
					continue;
				++report.effective;
				if (!(model.dom_cmp(lawdetail::comm(model, f, g), f) < 0))
					fail({f, g});
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "NA") {
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = sample_nontrivial(), g = sample_nontrivial();
			++report.effective;
			Elem c = lawdetail::comm(model, f, g);
			if (!(model.dom_cmp(c, f) < 0 && model.dom_cmp(c, g) < 0))
				fail({f, g});
		}
	} else if (law == "D7" || law == "D9Z" || law == "D8" || law == "D9") {
		if constexpr (HasPowers<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				Coefficient a = law == "D9Z" ? Coefficient(rng.uniform(-4, 4))
				                               : rng.small_rational_or_zero();
				if (law == "D7") {
					Elem f = model.sample(rng);
					Elem fa = model.pow(f, a);
					if (model.is_id(fa))
						continue;
					++report.effective;
					if (!(model.dom_cmp(fa, f) <= 0))
						fail({f});
				} else {
					Elem f = sample_nontrivial(), eps = sample_nontrivial();
					if (model.dom_cmp(eps, f) >= 0)
						std::swap(f, eps);
					if (model.dom_cmp(eps, f) >= 0)
						continue;
					++report.effective;
					Elem lhs = model.op(model.pow(model.op(f, eps), a),
					                    model.pow(f, -a));
					bool ok = law == "D9" || law == "D9Z"
					              ? model.dom_cmp(lhs, eps) <= 0
					              : model.dom_cmp(lhs, f) < 0;
					if (!ok)
						fail({f, eps});
				}
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "GA" || law == "GOG2") {
		if constexpr (HasOrder<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				Elem f = sample_nontrivial(), g = sample_nontrivial();
				// normalize into the positive cone; inversion respects
				// both the class and the hypothesis
				if (model.order_cmp(f, model.id()) < 0)
					f = model.inv(f);
				if (model.order_cmp(g, model.id()) < 0)
					g = model.inv(g);
				if (model.order_cmp(f, model.id()) <= 0 ||
				    model.order_cmp(g, model.id()) <= 0)
					continue;
				if (model.dom_cmp(f, g) <= 0)
					continue;
				if constexpr (HasGaVisibility<M>) {
					if (!model.ga_visible(f, g))
						continue;
				}
				++report.effective;
				if (law == "GA") {
					if (!(model.order_cmp(lawdetail::ga_conj(model, f, g), g) > 0))
						fail({f, g});
				} else {
					// f dominating and positive exceeds all of C(g)
					Elem fg = model.op(f, g), gf = model.op(g, f);
					int cmp = model.ga_on_inverse ? model.order_cmp(gf, fg)
					                              : model.order_cmp(fg, gf);
					if (!(cmp > 0))
						fail({f, g});
				}
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "GOG1" || law == "GOG3") {
		if constexpr (HasOrder<M> && HasPowers<M> && HasResidueCoeff<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				Elem f = sample_nontrivial(), g = sample_nontrivial();
				if (law == "GOG1") {
					if (model.order_cmp(f, model.id()) <= 0 ||
					    model.order_cmp(g, model.id()) <= 0 ||
					    model.order_cmp(f, g) < 0 || model.dom_cmp(f, g) < 0)
						continue;
					++report.effective;
					Elem g0 = model.pow(g, rng.small_rational());
					// witness search along the one-parameter subgroup of f
					bool found = false;
					Coefficient ratio =
					    model.is_id(g0)
					        ? Coefficient(1)
					        : (abs(model.res_coeff(g0)) + 1) / abs(model.res_coeff(f));
					for (const Coefficient &nu :
					     {Coefficient(1), Coefficient(8), ratio, Coefficient(ratio + 1)}) {
						if (model.order_cmp(model.pow(f, nu), g0) >= 0) {
							found = true;
							break;
						}
					}
					if (!found)
						fail({f, g0});
				} else {
					// scaling: flows of f reach the residue of any g in its class
					if (model.dom_cmp(f, g) != 0)
						continue;
					++report.effective;
					Coefficient mu = model.res_coeff(g) / model.res_coeff(f);
					if (!lawdetail::similar(model, model.pow(f, mu), g))
						fail({f, g});
				}
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "ABSORB") {
		// f strictly below g absorbs: fg and gf both sit in the class of g
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = model.sample(rng), g = model.sample(rng);
			if (model.dom_cmp(f, g) >= 0)
				continue;
			++report.effective;
			if (!(model.dom_cmp(model.op(f, g), g) == 0 &&
			      model.dom_cmp(model.op(g, f), g) == 0))
				fail({f, g});
		}
	} else if (law == "COMMDROP") {
		// commutators drop below the dominant argument
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = sample_nontrivial(), g = sample_nontrivial();
			if (model.eq(f, g))
				continue;
			++report.effective;
			const Elem &larger = model.dom_cmp(f, g) >= 0 ? f : g;
			if (!(model.dom_cmp(lawdetail::comm(model, f, g), larger) < 0))
				fail({f, g});
		}
	} else if (law == "POWCOMM") {
		// commuting with a power forces commuting with the base
		if constexpr (HasCentralizerSampling<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				Elem f = sample_nontrivial();
				long n = rng.uniform(2, 4);
				Elem fn = f;
				for (long j = 1; j < n; ++j)
					fn = model.op(fn, f);
				if (model.is_id(fn))
					continue;
				Elem g = model.centralizer_element(rng, fn);
				if (!model.is_id(lawdetail::comm(model, fn, g)))
					continue; // sampler missed the centraliser
				++report.effective;
				if (!model.is_id(lawdetail::comm(model, f, g)))
					fail({f, g});
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "ABELCENT") {
		// centralisers are Abelian
		if constexpr (HasCentralizerSampling<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				Elem f = sample_nontrivial();
				Elem g = model.centralizer_element(rng, f);
				Elem h = model.centralizer_element(rng, f);
				if (!model.is_id(lawdetail::comm(model, f, g)) ||
				    !model.is_id(lawdetail::comm(model, f, h)))
					continue;
				++report.effective;
				if (!model.is_id(lawdetail::comm(model, g, h)))
					fail({f, g, h});
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "SIMAGREE") {
		// the four formulations of f ~ g agree
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = sample_nontrivial(), g = sample_nontrivial();
			++report.effective;
			Elem fginv = model.op(f, model.inv(g));
			Elem ginvf = model.op(model.inv(g), f);
			bool c1 = model.dom_cmp(fginv, f) < 0;
			bool c2 = model.dom_cmp(fginv, g) < 0;
			bool c3 = model.dom_cmp(ginvf, f) < 0;
			bool c4 = model.dom_cmp(ginvf, g) < 0;
			if (!(c1 == c2 && c2 == c3 && c3 == c4))
				fail({f, g});
		}
	} else if (law == "RESCONJ") {
		// conjugation and swapping preserve residues (near-Abelian form)
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem f = model.sample(rng), g = model.sample(rng);
			++report.effective;
			bool conj_ok = lawdetail::similar(model, lawdetail::conj(model, f, g), g);
			bool swap_ok =
			    lawdetail::similar(model, model.op(f, g), model.op(g, f));
			if (!(conj_ok && swap_ok))
				fail({f, g});
		}
	} else if (law == "MALNORMAL") {
		// centralisers are malnormal: conjugates leave them
		if constexpr (HasCentralizerSampling<M>) {
			for (int i = 0; i < samples && report.pass; ++i) {
				Elem f = sample_nontrivial();
				Elem h = model.centralizer_element(rng, f);
				if (model.is_id(h) || !model.is_id(lawdetail::comm(model, f, h)))
					continue;
				Elem g = model.sample(rng);
				if (model.is_id(lawdetail::comm(model, g, f)))
					continue; // need g outside C(f)
				if constexpr (HasMalnormalVisibility<M>) {
					if (!model.malnormal_visible(f, g))
						continue;
				}
				++report.effective;
				Elem moved = lawdetail::conj(model, g, h);
				if (model.is_id(lawdetail::comm(model, moved, f)))
					fail({f, g, h});
			}
		} else {
			report.applicable = false;
		}
	} else if (law == "BALLEQ") {
		// left and right valuative balls coincide
		for (int i = 0; i < samples && report.pass; ++i) {
			Elem g = model.sample(rng), h = model.sample(rng);
			Elem r = sample_nontrivial();
			++report.effective;
			bool right = model.dom_cmp(model.op(model.inv(g), h), r) < 0;
			bool left = model.dom_cmp(model.op(h, model.inv(g)), r) < 0;
			if (right != left)
				fail({g, h, r});
		}
	} else if (law == "TORSION") {
		if constexpr (HasTorsionWitness<M>) {
			auto [w, n] = model.torsion_witness();
			report.effective = 1;
			Elem acc = w;
			for (long j = 1; j < n; ++j)
				acc = model.op(acc, w);
			if (model.is_id(w) || !model.is_id(acc))
				fail({w});
		} else {
			report.applicable = false;
		}
	} else {
		throw std::invalid_argument("unknown law '" + law + "'");
	}

	if (!report.applicable) {
		report.pass = false;
		report.effective = 0;
	}
	return report;
}

inline std::string print_law_report(const LawReport &r)
{
	std::ostringstream out;
	out << r.model << " " << r.law << " " << r.verdict() << " (" << r.effective << "/"
	    << r.samples << " effective, seed " << r.seed << ")";
	for (const auto &c : r.counterexample)
		out << "\n  counterexample: " << c;
	return out.str();
}

} // namespace valgroup
