#pragma once

#include "valgroup/calibration.hpp"
#include "valgroup/group_ops.hpp"
#include "valgroup/rng.hpp"
#include "valgroup/series_io.hpp"
#include "valgroup/term.hpp"

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace valgroup {

// Raised when the iteration bound is exceeded; indicates a model violating
// the divisibility assumptions rather than bad user input.
struct SolverBoundError : std::logic_error {
	using std::logic_error::logic_error;
};

// Trace of the iterative solution of t(y) = 1. Each step records the
// valuation level of the current evaluation and its residue coefficient;
// the levels increase strictly, which is the pseudo-Cauchy property of the
// correction sequence.
template <typename Elem> struct SolveTrace {
	std::vector<std::pair<int, Coefficient>> steps;
	int iterations = 0;
	Elem solution;
};

// Iteration: starting from the identity, evaluate, read off the residue of
// the defect, and cancel it with the canonical correction whose residue
// solves alpha * res(g) = -res(u). Every step strictly raises the defect's
// valuation level, so the loop ends within the model's step bound.
template <typename Ops>
SolveTrace<typename Ops::Elem> solve_regular(const Term &t,
                                             const SymbolTable<typename Ops::Elem> &table,
                                             typename Ops::Context context)
{
	Coefficient a = alpha(t);
	if (a.is_zero())
		throw std::invalid_argument("singular term: alpha(t) = 0");

	typename Ops::Elem f = Ops::identity(context);
	SolveTrace<typename Ops::Elem> trace{{}, 0, f};
	int bound = Ops::max_steps(context);
	int previous_level = -1;
	while (true) {
		typename Ops::Elem u = eval_term<Ops>(t, f, table);
		auto level = Ops::level(u);
		if (!level)
			break;
		if (static_cast<int>(trace.steps.size()) >= bound)
			throw SolverBoundError("solver exceeded its iteration bound");
		if (*level <= previous_level)
			throw SolverBoundError("solver failed to raise the defect level");
		previous_level = *level;
		trace.steps.emplace_back(*level, Ops::residue_coefficient(u));
		f = Ops::op(f, Ops::correction(u, a));
	}
	trace.iterations = static_cast<int>(trace.steps.size());
	trace.solution = f;
	return trace;
}

// ----- residue analysis (composition group) ------------------------------

// Residue of t(f) for terms with t(1) = 1, per the residue formula: for
// regular t it is alpha(t) res(f); for singular t the evaluation drops
// strictly below f in the value order, reported through `smaller_flag`.
struct TermResidue {
	bool smaller_flag = false;
	Residue value = Residue::zero();
};

inline TermResidue residue_of_term(const Term &t, const Parabolic &f,
                                   const SymbolTable<Parabolic> &table)
{
	Parabolic id = Parabolic::identity(f.order());
	if (!is_identity(eval_term<CompgroupOps>(t, id, table)))
		throw std::invalid_argument("residue_of_term requires t(1) = 1");
	if (is_identity(f))
		throw std::invalid_argument("residue_of_term requires f != identity");
	Coefficient a = alpha(t);
	if (a.is_zero())
		return TermResidue{true, Residue::zero()};
	return TermResidue{false, residue_scale(a, res(f))};
}

// ----- probes (composition group) ----------------------------------------

struct ProbeReport {
	std::string probe;
	int trials = 0;
	std::uint64_t seed = 0;
	std::vector<std::string> counterexamples;

	bool pass() const { return counterexamples.empty(); }
	std::string verdict() const { return pass() ? "pass" : "fail"; }
};

// Perturbs candidates around (and away from) the solution and checks that
// none of them also solves t(y) = 1.
inline ProbeReport uniqueness_probe(const Term &t, const SymbolTable<Parabolic> &table,
                                    const Parabolic &solution, int trials, std::uint64_t seed)
{
	if (alpha(t).is_zero())
		throw std::invalid_argument("singular term: alpha(t) = 0");
	ProbeReport report{"uniqueness", trials, seed, {}};
	Rng rng(seed);
	int order = solution.order();
	for (int i = 0; i < trials; ++i) {
		Parabolic h = solution;
		if (rng.coin()) {
			h = random_parabolic(rng, order);
		} else {
			TruncatedSeries body = solution.body();
			int e = static_cast<int>(rng.uniform(2, order));
			body.add_to(e, rng.small_rational());
			h = Parabolic(body);
		}
		if (h == solution)
			continue;
		if (is_identity(eval_term<CompgroupOps>(t, h, table))) {
			report.counterexamples.push_back(print_series(h.body()));
		}
	}
	return report;
}

// Checks that f -> t(f) is strictly monotone with the sign of alpha(t), and
// for terms with t(1) = 1 that t(f) and f^alpha sit on the same side of the
// identity. Integer exponents only. The orientation consumed here is the
// calibrated one: monotonicity is with respect to the direct order while the
// growth axiom lives on the inverse group.
inline ProbeReport monotonicity_probe(const Term &t, const SymbolTable<Parabolic> &table,
                                      int samples, std::uint64_t seed, int order)
{
	if (!has_integer_exponents_only(t))
		throw std::invalid_argument("monotonicity probe needs integer exponents");
	Coefficient a = alpha(t);
	if (a.is_zero())
		throw std::invalid_argument("singular term: alpha(t) = 0");
	static_assert(calibration::compgroup_ga_on_inverse,
	              "probe orientation is tied to the recorded GA calibration");
	// with f < g, an increasing evaluation keeps t(f) below t(g)
	int expected = a > 0 ? -1 : 1;

	ProbeReport report{"monotonicity", samples, seed, {}};
	Rng rng(seed);
	Parabolic id = Parabolic::identity(order);
	bool fixes_identity = is_identity(eval_term<CompgroupOps>(t, id, table));
	long alpha_int = static_cast<long>(numerator(a));

	for (int i = 0; i < samples; ++i) {
		Parabolic f = random_parabolic(rng, order);
		Parabolic g = random_parabolic(rng, order);
		int cmp = compare(f, g);
		if (cmp == 0)
			continue;
		if (cmp > 0)
			std::swap(f, g); // now f < g
		auto tf = eval_term<CompgroupOps>(t, f, table);
		auto tg = eval_term<CompgroupOps>(t, g, table);
		if (compare(tf, tg) != expected) {
			report.counterexamples.push_back("pair " + print_series(f.body()) + " < " +
			                                 print_series(g.body()));
			continue;
		}
		if (fixes_identity) {
			int side = compare(tf, id);
			int power_side = compare(power_int(f, alpha_int), id);
			if (side != power_side)
				report.counterexamples.push_back("sign equivalence at " +
				                                 print_series(f.body()));
		}
	}
	return report;
}

// ----- report rendering ---------------------------------------------------

template <typename Elem>
std::string print_trace(const SolveTrace<Elem> &trace)
{
	std::ostringstream out;
	out << "iterations: " << trace.iterations << "\n";
	for (const auto &[rho, c] : trace.steps)
		out << "  step rho=" << rho << " residue=" << to_string(c) << "\n";
	return out.str();
}

inline std::string print_report(const ProbeReport &report)
{
	std::ostringstream out;
	out << report.probe << ": " << report.verdict() << " (" << report.trials << " trials, seed "
	    << report.seed << ")\n";
	for (const auto &ce : report.counterexamples)
		out << "  counterexample: " << ce << "\n";
	return out.str();
}

} // namespace valgroup
