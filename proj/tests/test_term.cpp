#include "valgroup/group_ops.hpp"
#include "valgroup/series_io.hpp"
#include "valgroup/term.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace valgroup;

namespace {

const int N = 12;

SymbolTable<Parabolic> table_with(std::initializer_list<std::pair<std::string, std::string>> binds)
{
	SymbolTable<Parabolic> tab;
	for (const auto &[name, text] : binds)
		tab.bind(name, Parabolic(parse_series(text, N)));
	return tab;
}

Term random_term(Rng &rng, int depth)
{
	long pick = rng.uniform(0, depth > 0 ? 3 : 1);
	switch (pick) {
	case 0:
		return Term::y();
	case 1:
		return Term::constref("g" + std::to_string(rng.uniform(1, 3)));
	case 2: {
		std::vector<Term> factors;
		long n = rng.uniform(2, 3);
		for (long i = 0; i < n; ++i)
			factors.push_back(random_term(rng, depth - 1));
		return Term::mul(std::move(factors));
	}
	default: {
		static const Coefficient exponents[] = {Coefficient(-2), Coefficient(-1),
		                                        Coefficient(2),  Coefficient(3),
		                                        Coefficient(1, 2), Coefficient(-1, 2)};
		return Term::pow(random_term(rng, depth - 1), exponents[rng.uniform(0, 5)]);
	}
	}
}

} // namespace

TEST_CASE("term parsing")
{
	SECTION("word syntax")
	{
		Term t = parse_term("g1 * y^2 * g2 * y^-1");
		REQUIRE(t.kind == Term::Kind::mul);
		REQUIRE(t.children.size() == 4);
		REQUIRE(t.children[0] == Term::constref("g1"));
		REQUIRE(t.children[1] == Term::pow(Term::y(), Coefficient(2)));
		REQUIRE(t.children[3] == Term::pow(Term::y(), Coefficient(-1)));
	}

	SECTION("rational exponents and grouping")
	{
		Term t = parse_term("(g * y)^(1/2) * y");
		REQUIRE(t.children.size() == 2);
		REQUIRE(t.children[0].kind == Term::Kind::pow);
		REQUIRE(t.children[0].exponent == Coefficient(1, 2));
		REQUIRE(t.children[0].children[0] ==
		        Term::mul({Term::constref("g"), Term::y()}));
	}

	SECTION("inv maps to the power -1")
	{
		REQUIRE(parse_term("inv(g)") == Term::pow(Term::constref("g"), Coefficient(-1)));
		REQUIRE(parse_term("y inv(y)") ==
		        Term::mul({Term::y(), Term::pow(Term::y(), Coefficient(-1))}));
	}

	SECTION("errors carry positions")
	{
		REQUIRE_THROWS_WITH(parse_term("y^(1/0)"),
		                    Catch::Matchers::ContainsSubstring("zero denominator"));
		REQUIRE_THROWS_WITH(parse_term("(g * y"),
		                    Catch::Matchers::ContainsSubstring("position"));
		REQUIRE_THROWS_AS(parse_term("y ^ %"), std::invalid_argument);
		REQUIRE_THROWS_AS(parse_term("secret * y", {"secret"}), std::invalid_argument);
	}
}

TEST_CASE("alpha homomorphism")
{
	REQUIRE(alpha(parse_term("g1 * y^2 * g2 * y^-1")) == 1);
	REQUIRE(alpha(parse_term("(g * y)^(1/2) * y")) == Coefficient(3, 2));
	REQUIRE(alpha(parse_term("g1 * g2")) == 0);
	REQUIRE_FALSE(is_regular(parse_term("g1 * g2")));
	REQUIRE(is_regular(parse_term("y")));

	SECTION("structural rules on random terms")
	{
		Rng rng(3);
		for (int i = 0; i < 50; ++i) {
			Term a = random_term(rng, 3);
			Term b = random_term(rng, 3);
			REQUIRE(alpha(Term::mul({a, b})) == alpha(a) + alpha(b));
			Coefficient q = rng.small_rational();
			REQUIRE(alpha(Term::pow(a, q)) == q * alpha(a));
		}
	}
}

TEST_CASE("evaluation over the composition group")
{
	auto tab = table_with({{"g", "t + t^2"}, {"g1", "t + 2 t^3"}, {"g2", "t - t^2"}});
	auto f = Parabolic(parse_series("t + t^2", N));

	SECTION("desk examples")
	{
		REQUIRE(eval_term<CompgroupOps>(parse_term("y^2"), f, tab) ==
		        Parabolic(parse_series("t + 2 t^2 + 2 t^3 + t^4", N)));
		REQUIRE(is_identity(eval_term<CompgroupOps>(parse_term("g * inv(g)"), f, tab)));
		REQUIRE(eval_term<CompgroupOps>(parse_term("y"), f, tab) == f);
	}

	SECTION("evaluation is homomorphic")
	{
		Rng rng(11);
		SymbolTable<Parabolic> rtab;
		rtab.bind("g1", random_parabolic(rng, N));
		rtab.bind("g2", random_parabolic(rng, N));
		rtab.bind("g3", random_parabolic(rng, N));
		for (int i = 0; i < 25; ++i) {
			Term a = random_term(rng, 2);
			Term b = random_term(rng, 2);
			auto h = random_parabolic(rng, N);
			REQUIRE(eval_term<CompgroupOps>(Term::mul({a, b}), h, rtab) ==
			        compose(eval_term<CompgroupOps>(a, h, rtab),
			                eval_term<CompgroupOps>(b, h, rtab)));
			Coefficient q(rng.uniform(-2, 2));
			REQUIRE(eval_term<CompgroupOps>(Term::pow(a, q), h, rtab) ==
			        power_int(eval_term<CompgroupOps>(a, h, rtab),
			                  static_cast<long>(numerator(q))));
		}
	}

	SECTION("unresolved identifiers are reported")
	{
		REQUIRE_THROWS_WITH(eval_term<CompgroupOps>(parse_term("nope * y"), f, tab),
		                    Catch::Matchers::ContainsSubstring("unbound identifier"));
	}
}

TEST_CASE("printer round-trip")
{
	Rng rng(17);
	for (int i = 0; i < 60; ++i) {
		Term t = random_term(rng, 3);
		REQUIRE(parse_term(print_term(t)) == t);
	}
}

TEST_CASE("shift transform")
{
	auto tab = table_with({{"g1", "t + t^2"}, {"g2", "t - t^3"}, {"g3", "t + 2 t^2 + t^5"}});
	Rng rng(23);

	SECTION("shift of y evaluates to the identity at y = identity")
	{
		auto f = random_parabolic(rng, N);
		auto [term, extended] = shift<CompgroupOps>(parse_term("y"), f, tab);
		auto at_identity =
		    eval_term<CompgroupOps>(term, Parabolic::identity(N), extended);
		REQUIRE(is_identity(at_identity));
	}

	SECTION("alpha is invariant and the defining identity holds")
	{
		for (int i = 0; i < 50; ++i) {
			Term t = random_term(rng, 3);
			auto f = random_parabolic(rng, N);
			auto [shifted, extended] = shift<CompgroupOps>(t, f, tab);
			REQUIRE(alpha(shifted) == alpha(t));

			auto g = random_parabolic(rng, N);
			// eval(t_f, g) = t(f)^-1 t(f g)
			auto lhs = eval_term<CompgroupOps>(shifted, g, extended);
			auto rhs = compose(inverse(eval_term<CompgroupOps>(t, f, tab)),
			                   eval_term<CompgroupOps>(t, compose(f, g), tab));
			REQUIRE(lhs == rhs);
		}
	}
}

TEST_CASE("symbol table rules")
{
	SymbolTable<Parabolic> tab;
	tab.bind("g", Parabolic::identity(N));
	REQUIRE_THROWS_AS(tab.bind("g", Parabolic::identity(N)), std::invalid_argument);
	REQUIRE_THROWS_AS(tab.bind("y", Parabolic::identity(N)), std::invalid_argument);
	REQUIRE_THROWS_AS(tab.bind("$shift_0", Parabolic::identity(N)), std::invalid_argument);
	REQUIRE(tab.contains("g"));
	REQUIRE_THROWS_AS(tab.lookup("h"), std::invalid_argument);
}

TEST_CASE("pathological nesting is rejected cleanly")
{
	std::string deep(500, '(');
	deep += "y";
	deep += std::string(500, ')');
	REQUIRE_THROWS_WITH(parse_term(deep), Catch::Matchers::ContainsSubstring("nesting"));
	REQUIRE(parse_term("((((y))))") == Term::y());
}
