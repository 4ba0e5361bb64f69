#pragma once

#include "valgroup/rng.hpp"
#include "valgroup/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace valgroup {

// Words over the generator alphabet, stored as raw generator indices.
using Word = std::string;

// degree first, then lexicographic: the peeling order under which Lyndon
// bracketings are triangular
struct ShortLex {
	bool operator()(const Word &a, const Word &b) const
	{
		if (a.size() != b.size())
			return a.size() < b.size();
		return a < b;
	}
};

// Elements of the free associative algebra truncated above a fixed degree.
using AssocPoly = std::map<Word, Coefficient, ShortLex>;

namespace assoc {

inline void add_to(AssocPoly &p, const Word &w, const Coefficient &c)
{
	if (c.is_zero())
		return;
	auto [it, inserted] = p.emplace(w, c);
	if (!inserted) {
		it->second += c;
		if (it->second.is_zero())
			p.erase(it);
	}
}

inline AssocPoly add(const AssocPoly &a, const AssocPoly &b)
{
	AssocPoly r = a;
	for (const auto &[w, c] : b)
		add_to(r, w, c);
	return r;
}

inline AssocPoly scale(const Coefficient &c, const AssocPoly &a)
{
	AssocPoly r;
	if (c.is_zero())
		return r;
	for (const auto &[w, v] : a)
		r.emplace(w, c * v);
	return r;
}

inline AssocPoly mul(const AssocPoly &a, const AssocPoly &b, std::size_t max_degree)
{
	AssocPoly r;
	for (const auto &[wa, ca] : a)
		for (const auto &[wb, cb] : b) {
			if (wa.size() + wb.size() > max_degree)
				continue;
			add_to(r, wa + wb, ca * cb);
		}
	return r;
}

// exp of a polynomial without constant term
inline AssocPoly exp(const AssocPoly &p, std::size_t max_degree)
{
	AssocPoly r{{Word(), Coefficient(1)}};
	AssocPoly power{{Word(), Coefficient(1)}};
	Coefficient inv_factorial(1);
	for (std::size_t k = 1; k <= max_degree; ++k) {
		power = mul(power, p, max_degree);
		if (power.empty())
			break;
		inv_factorial /= static_cast<long>(k);
		r = add(r, scale(inv_factorial, power));
	}
	return r;
}

// log of 1 + r where r has no constant term
inline AssocPoly log(AssocPoly q, std::size_t max_degree)
{
	auto unit = q.find(Word());
	if (unit == q.end() || unit->second != 1)
		throw std::logic_error("log expects a polynomial with constant term 1");
	q.erase(unit);
	AssocPoly acc;
	AssocPoly power{{Word(), Coefficient(1)}};
	for (std::size_t k = 1; k <= max_degree; ++k) {
		power = mul(power, q, max_degree);
		if (power.empty())
			break;
		Coefficient c(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
		acc = add(acc, scale(c, power));
	}
	return acc;
}

} // namespace assoc

// Free nilpotent Lie algebra over Q on k generators of class c, with the
// Lyndon-word basis. Each basis element carries its standard-factorization
// bracketing and its expansion in the free associative algebra; Lie elements
// are recovered from associative ones by triangular peeling (a Lyndon
// bracketing expands to its word plus lexicographically larger words of the
// same degree).
class FreeNilAlgebra {
public:
	struct BasisElement {
		Word word;
		int weight;
		int left = -1, right = -1; // standard factorization; -1 for generators
		AssocPoly expansion;
	};

	FreeNilAlgebra(int generators, int nil_class) : k_(generators), c_(nil_class)
	{
		if (k_ < 1 || c_ < 1)
			throw std::invalid_argument("need at least one generator and class >= 1");
		build_basis();
	}

	int generators() const { return k_; }
	int nil_class() const { return c_; }
	const std::vector<BasisElement> &basis() const { return basis_; }
	std::size_t dimension() const { return basis_.size(); }

	long dimension_of_weight(int w) const
	{
		long n = 0;
		for (const auto &b : basis_)
			if (b.weight == w)
				++n;
		return n;
	}

	std::string basis_name(std::size_t i) const
	{
		const BasisElement &b = basis_[i];
		if (b.left < 0)
			return "x" + std::to_string(b.word[0] + 1);
		return "[" + basis_name(b.left) + "," + basis_name(b.right) + "]";
	}

	std::optional<std::size_t> index_of(const Word &w) const
	{
		auto it = index_.find(w);
		if (it == index_.end())
			return std::nullopt;
		return it->second;
	}

	AssocPoly assoc_from_coords(const std::map<std::size_t, Coefficient> &coords) const
	{
		AssocPoly p;
		for (const auto &[i, c] : coords)
			p = assoc::add(p, assoc::scale(c, basis_[i].expansion));
		return p;
	}

	// triangular peel; throws if the polynomial is not a Lie element
	std::map<std::size_t, Coefficient> coords_from_assoc(AssocPoly p) const
	{
		std::map<std::size_t, Coefficient> coords;
		while (!p.empty()) {
			auto [word, coeff] = *p.begin();
			auto idx = index_of(word);
			if (!idx)
				throw std::logic_error("polynomial is not a Lie element: leading word '" +
				                       word + "' is not Lyndon");
			coords[*idx] = coeff;
			p = assoc::add(p, assoc::scale(-coeff, basis_[*idx].expansion));
		}
		return coords;
	}

	// structure constants of the bracket, cached per basis pair
	const std::map<std::size_t, Coefficient> &bracket_coords(std::size_t i, std::size_t j) const
	{
		auto key = std::make_pair(i, j);
		auto it = bracket_cache_.find(key);
		if (it != bracket_cache_.end())
			return it->second;
		AssocPoly commutator = assoc::add(
		    assoc::mul(basis_[i].expansion, basis_[j].expansion, c_),
		    assoc::scale(-1, assoc::mul(basis_[j].expansion, basis_[i].expansion, c_)));
		return bracket_cache_.emplace(key, coords_from_assoc(std::move(commutator)))
		    .first->second;
	}

private:
	int k_, c_;
	std::vector<BasisElement> basis_;
	std::map<Word, std::size_t> index_;
	mutable std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, Coefficient>>
	    bracket_cache_;

	// Duval's algorithm: all Lyndon words of length <= c in lex order
	std::vector<Word> lyndon_words() const
	{
		std::vector<Word> words;
		Word w(1, 0);
		while (true) {
			words.push_back(w);
			Word t = w;
			while (static_cast<int>(t.size()) < c_)
				t += t[t.size() % w.size()];
			while (!t.empty() && t.back() == static_cast<char>(k_ - 1))
				t.pop_back();
			if (t.empty())
				break;
			++t.back();
			w = t;
		}
		return words;
	}

	void build_basis()
	{
		std::vector<Word> words = lyndon_words();
		std::sort(words.begin(), words.end(), ShortLex());
		for (const Word &w : words) {
			BasisElement b;
			b.word = w;
			b.weight = static_cast<int>(w.size());
			if (w.size() == 1) {
				assoc::add_to(b.expansion, w, Coefficient(1));
			} else {
				// standard factorization w = uv, v the longest proper
				// Lyndon suffix; both parts precede w in shortlex order
				std::size_t split = 1;
				for (std::size_t s = 1; s < w.size(); ++s) {
					Word suffix = w.substr(s);
					if (index_.count(suffix)) {
						split = s;
						break;
					}
				}
				Word u = w.substr(0, split), v = w.substr(split);
				b.left = static_cast<int>(index_.at(u));
				b.right = static_cast<int>(index_.at(v));
				b.expansion = assoc::add(
				    assoc::mul(basis_[b.left].expansion, basis_[b.right].expansion, c_),
				    assoc::scale(-1, assoc::mul(basis_[b.right].expansion,
				                                basis_[b.left].expansion, c_)));
			}
			index_.emplace(w, basis_.size());
			basis_.push_back(std::move(b));
		}
	}
};

// A group element in Mal'cev coordinates over the Lyndon basis: the element
// is a Lie algebra vector, the group law is the truncated BCH product.
class NilElement {
public:
	explicit NilElement(const FreeNilAlgebra &algebra) : algebra_(&algebra) {}

	NilElement(const FreeNilAlgebra &algebra, std::map<std::size_t, Coefficient> coords)
	    : algebra_(&algebra), coords_(std::move(coords))
	{
		for (auto it = coords_.begin(); it != coords_.end();) {
			if (it->first >= algebra.dimension())
				throw std::invalid_argument("coordinate index out of range");
			it = it->second.is_zero() ? coords_.erase(it) : std::next(it);
		}
	}

	const FreeNilAlgebra &algebra() const { return *algebra_; }
	const std::map<std::size_t, Coefficient> &coords() const { return coords_; }
	Coefficient coord(std::size_t i) const
	{
		auto it = coords_.find(i);
		return it == coords_.end() ? Coefficient(0) : it->second;
	}

	bool is_zero() const { return coords_.empty(); }

private:
	const FreeNilAlgebra *algebra_;
	std::map<std::size_t, Coefficient> coords_;
};

inline bool operator==(const NilElement &a, const NilElement &b)
{
	return &a.algebra() == &b.algebra() && a.coords() == b.coords();
}
inline bool operator!=(const NilElement &a, const NilElement &b) { return !(a == b); }

inline void require_shared_algebra(const NilElement &a, const NilElement &b)
{
	if (&a.algebra() != &b.algebra())
		throw std::invalid_argument("elements live in different nilpotent algebras");
}

// truncated BCH product log(exp(a) exp(b)), computed exactly in the free
// associative algebra and projected back to the Lyndon basis
inline NilElement nil_mul(const NilElement &a, const NilElement &b)
{
	require_shared_algebra(a, b);
	const FreeNilAlgebra &alg = a.algebra();
	std::size_t c = static_cast<std::size_t>(alg.nil_class());
	AssocPoly product = assoc::mul(assoc::exp(alg.assoc_from_coords(a.coords()), c),
	                               assoc::exp(alg.assoc_from_coords(b.coords()), c), c);
	return NilElement(alg, alg.coords_from_assoc(assoc::log(std::move(product), c)));
}

// group power a^q along the one-parameter subgroup through a, which in
// Mal'cev coordinates is plain scalar action
inline NilElement nil_pow(const NilElement &a, const Coefficient &q)
{
	std::map<std::size_t, Coefficient> coords;
	if (!q.is_zero())
		for (const auto &[i, c] : a.coords())
			coords.emplace(i, q * c);
	return NilElement(a.algebra(), std::move(coords));
}

inline NilElement nil_inverse(const NilElement &a) { return nil_pow(a, Coefficient(-1)); }

inline NilElement nil_bracket(const NilElement &a, const NilElement &b)
{
	require_shared_algebra(a, b);
	const FreeNilAlgebra &alg = a.algebra();
	std::map<std::size_t, Coefficient> coords;
	for (const auto &[i, ca] : a.coords())
		for (const auto &[j, cb] : b.coords())
			for (const auto &[idx, s] : alg.bracket_coords(i, j)) {
				coords[idx] += ca * cb * s;
				if (coords[idx].is_zero())
					coords.erase(idx);
			}
	return NilElement(alg, std::move(coords));
}

// lower central valuation: the smallest weight carrying a nonzero
// coordinate; nullopt is the trivial marker
inline std::optional<int> lc_val(const NilElement &a)
{
	std::optional<int> best;
	for (const auto &[i, c] : a.coords()) {
		int w = a.algebra().basis()[i].weight;
		if (!best || w < *best)
			best = w;
	}
	return best;
}

// the homogeneous component at the lower central valuation
inline NilElement nil_res(const NilElement &a)
{
	auto v = lc_val(a);
	if (!v)
		throw std::invalid_argument("the zero element has no residue");
	std::map<std::size_t, Coefficient> coords;
	for (const auto &[i, c] : a.coords())
		if (a.algebra().basis()[i].weight == *v)
			coords.emplace(i, c);
	return NilElement(a.algebra(), std::move(coords));
}

inline std::string nil_to_string(const NilElement &a)
{
	if (a.is_zero())
		return "0";
	std::string out;
	for (const auto &[i, c] : a.coords()) {
		bool negative = c < 0;
		Coefficient mag = negative ? Coefficient(-c) : c;
		if (out.empty())
			out += negative ? "-" : "";
		else
			out += negative ? " - " : " + ";
		if (mag != 1)
			out += to_string(mag) + " ";
		out += a.algebra().basis_name(i);
	}
	return out;
}

inline NilElement random_nil(Rng &rng, const FreeNilAlgebra &algebra)
{
	std::map<std::size_t, Coefficient> coords;
	long terms = rng.uniform(1, 3);
	for (long i = 0; i < terms; ++i) {
		auto idx = static_cast<std::size_t>(
		    rng.uniform(0, static_cast<long>(algebra.dimension()) - 1));
		Coefficient c = rng.small_rational();
		coords[idx] += c;
		if (coords[idx].is_zero())
			coords.erase(idx);
	}
	return NilElement(algebra, std::move(coords));
}

// solver bundle over the nilpotent group (see solver.hpp)
struct NilpotentOps {
	using Elem = NilElement;
	using Context = const FreeNilAlgebra *;

	static Elem op(const Elem &a, const Elem &b) { return nil_mul(a, b); }
	static Elem inv(const Elem &a) { return nil_inverse(a); }
	static Elem pow(const Elem &a, const Coefficient &q) { return nil_pow(a, q); }
	static Elem identity(Context algebra) { return NilElement(*algebra); }
	static bool is_id(const Elem &a) { return a.is_zero(); }

	static std::optional<int> level(const Elem &u) { return lc_val(u); }
	static int max_steps(Context algebra) { return algebra->nil_class(); }

	// homogeneous lift: the correction is (-1/alpha) res(u)
	static Elem correction(const Elem &u, const Coefficient &alpha_value)
	{
		return nil_pow(nil_res(u), Coefficient(-1) / alpha_value);
	}

	static Coefficient residue_coefficient(const Elem &u)
	{
		return nil_res(u).coords().begin()->second;
	}
};

} // namespace valgroup
