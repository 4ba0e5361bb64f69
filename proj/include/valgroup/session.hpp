#pragma once

#include "valgroup/models.hpp"
#include "valgroup/nil_solve.hpp"
#include "valgroup/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <iostream>
#include <memory>
#include <sstream>

namespace valgroup {

using Json = nlohmann::ordered_json;

inline Json probe_report_json(const ProbeReport &report)
{
	return Json{{"schema", 1},
	            {"kind", "probe"},
	            {"probe", report.probe},
	            {"verdict", report.verdict()},
	            {"trials", report.trials},
	            {"seed", report.seed},
	            {"counterexamples", report.counterexamples}};
}

template <typename Elem> Json trace_json(const SolveTrace<Elem> &trace)
{
	Json steps = Json::array();
	for (const auto &[rho, c] : trace.steps)
		steps.push_back(Json::array({rho, to_string(c)}));
	return Json{{"schema", 1},
	            {"kind", "trace"},
	            {"iterations", trace.iterations},
	            {"trace", std::move(steps)}};
}

// Batch session shared by scripts and one-shot commands. The truncation
// order is fixed once bindings or commands exist; identifiers bind once;
// output is deterministic under a fixed seed.
class Session {
public:
	Session(std::ostream &out, bool json_mode) : out_(out), json_(json_mode) {}

	void set_order(int order)
	{
		if (order < 4 || order > 64)
			throw std::invalid_argument("order must be between 4 and 64");
		if (touched_)
			throw std::invalid_argument("order is fixed once the session has state");
		order_ = order;
	}

	void set_seed(std::uint64_t seed) { seed_ = seed; }
	int order() const { return order_; }

	// ----- script interface -----

	// Statements separated by ';'. The first error aborts; the caller
	// reports position information from the exception message.
	void run_script(const std::string &text)
	{
		std::size_t pos = 0;
		int statement = 0;
		while (pos < text.size()) {
			std::size_t end = text.find(';', pos);
			if (end == std::string::npos) {
				if (trim(text.substr(pos)).empty())
					break;
				throw std::invalid_argument("statement " + std::to_string(statement + 1) +
				                            ": missing ';'");
			}
			std::string stmt = trim(text.substr(pos, end - pos));
			pos = end + 1;
			if (stmt.empty())
				continue;
			++statement;
			try {
				execute(stmt);
			} catch (const std::invalid_argument &e) {
				throw std::invalid_argument("statement " + std::to_string(statement) +
				                            ": " + e.what());
			}
		}
	}

	void execute(const std::string &statement)
	{
		auto [head, rest] = split_word(statement);
		if (head == "set") {
			auto [what, value] = split_word(rest);
			if (what == "order")
				set_order(parse_int(value));
			else if (what == "seed")
				set_seed(static_cast<std::uint64_t>(parse_int(value)));
			else
				throw std::invalid_argument("unknown setting '" + what + "'");
			return;
		}
		if (head == "let") {
			auto eq = rest.find('=');
			if (eq == std::string::npos)
				throw std::invalid_argument("let needs '='");
			bind(trim(rest.substr(0, eq)), trim(rest.substr(eq + 1)));
			return;
		}
		command(head, split_args(rest));
	}

	// ----- bindings -----

	void bind(const std::string &name, const std::string &rhs)
	{
		touched_ = true;
		if (looks_like_coords(rhs)) {
			require_algebra();
			check_bindable(name);
			nil_symbols_.emplace(name, parse_coords(rhs));
			return;
		}
		TruncatedSeries value = parse_series(rhs, order_);
		check_bindable(name);
		series_symbols_.emplace(name, value);
	}

	// comma-separated argument splitting, exposed for one-shot front ends
	static std::vector<std::string> split_command_args(const std::string &s)
	{
		return split_args(s);
	}

	void command(const std::string &name, const std::vector<std::string> &args)
	{
		touched_ = true;
		if (name == "eval")
			cmd_eval(args);
		else if (name == "solve")
			cmd_solve(args);
		else if (name == "compose")
			cmd_binary_series(args, name);
		else if (name == "invert" || name == "log" || name == "exp" || name == "decompose")
			cmd_unary_series(args, name);
		else if (name == "flow" || name == "root")
			cmd_flow_like(args, name);
		else if (name == "bch")
			cmd_binary_series(args, name);
		else if (name == "laws")
			cmd_laws(args);
		else if (name == "nil")
			cmd_nil(args);
		else
			throw std::invalid_argument("unknown command '" + name + "'");
	}

	void cmd_laws_full(const std::string &model_name, const std::string &only_law, int samples,
	                   std::uint64_t seed)
	{
		touched_ = true;
		auto registry = builtin_models(order_);
		const ModelRunner &model = find_model(registry, model_name);
		if (!only_law.empty() &&
		    std::find(model.laws.begin(), model.laws.end(), only_law) == model.laws.end())
			throw std::invalid_argument("law '" + only_law + "' is not applicable to model '" +
			                            model_name + "'");
		Json reports = Json::array();
		for (const auto &law : model.laws) {
			if (!only_law.empty() && law != only_law)
				continue;
			LawReport r = model.run(law, samples, seed);
			if (json_) {
				Json j{{"model", r.model},       {"law", r.law},
				       {"verdict", r.verdict()}, {"samples", r.samples},
				       {"effective", r.effective}, {"seed", r.seed}};
				j["counterexample"] = r.counterexample;
				reports.push_back(std::move(j));
			} else {
				out_ << print_law_report(r) << "\n";
			}
		}
		if (json_)
			emit_json(Json{{"schema", 1}, {"kind", "laws"}, {"reports", std::move(reports)}});
	}

private:
	std::ostream &out_;
	bool json_;
	int order_ = 16;
	std::uint64_t seed_ = 0;
	bool touched_ = false;
	std::map<std::string, TruncatedSeries> series_symbols_;
	std::map<std::string, NilElement> nil_symbols_;
	std::shared_ptr<FreeNilAlgebra> algebra_;

	// ----- helpers -----

	static std::string trim(const std::string &s)
	{
		std::size_t a = s.find_first_not_of(" \t\r\n");
		if (a == std::string::npos)
			return {};
		std::size_t b = s.find_last_not_of(" \t\r\n");
		return s.substr(a, b - a + 1);
	}

	static std::pair<std::string, std::string> split_word(const std::string &s)
	{
		std::string t = trim(s);
		std::size_t sp = t.find_first_of(" \t");
		if (sp == std::string::npos)
			return {t, ""};
		return {t.substr(0, sp), trim(t.substr(sp + 1))};
	}

	static std::vector<std::string> split_args(const std::string &s)
	{
		std::vector<std::string> args;
		std::size_t pos = 0;
		std::string t = trim(s);
		if (t.empty())
			return args;
		while (true) {
			std::size_t comma = t.find(',', pos);
			if (comma == std::string::npos) {
				args.push_back(trim(t.substr(pos)));
				return args;
			}
			args.push_back(trim(t.substr(pos, comma - pos)));
			pos = comma + 1;
		}
	}

	static int parse_int(const std::string &s)
	{
		try {
			std::size_t used = 0;
			int v = std::stoi(s, &used);
			if (used != s.size())
				throw std::invalid_argument(s);
			return v;
		} catch (const std::exception &) {
			throw std::invalid_argument("expected an integer, got '" + s + "'");
		}
	}

	static bool looks_like_coords(const std::string &s)
	{
		return s.find(',') != std::string::npos && s.find('t') == std::string::npos &&
		       s.find('^') == std::string::npos;
	}

	void check_bindable(const std::string &name) const
	{
		if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
			throw std::invalid_argument("invalid identifier '" + name + "'");
		if (name == "y" || name == "inv" || name == "t")
			throw std::invalid_argument("'" + name + "' is reserved and cannot be bound");
		if (series_symbols_.count(name) || nil_symbols_.count(name))
			throw std::invalid_argument("'" + name + "' is already bound");
	}

	void require_algebra() const
	{
		if (!algebra_)
			throw std::invalid_argument(
			    "no nilpotent algebra selected; run 'nil algebra <k>, <c>' first");
	}

	NilElement parse_coords(const std::string &s) const
	{
		std::map<std::size_t, Coefficient> coords;
		std::vector<std::string> parts = split_args(s);
		if (parts.size() > algebra_->dimension())
			throw std::invalid_argument("more coordinates than basis elements");
		for (std::size_t i = 0; i < parts.size(); ++i) {
			Coefficient c = parse_rational(parts[i]);
			if (!c.is_zero())
				coords.emplace(i, c);
		}
		return NilElement(*algebra_, std::move(coords));
	}

	// series argument: an identifier or a literal
	TruncatedSeries series_arg(const std::string &arg) const
	{
		auto it = series_symbols_.find(arg);
		if (it != series_symbols_.end())
			return it->second;
		bool identifier_shaped =
		    !arg.empty() && std::isalpha(static_cast<unsigned char>(arg[0])) &&
		    arg.find_first_of(" +-^/") == std::string::npos && arg != "t";
		if (identifier_shaped)
			throw std::invalid_argument("unbound identifier '" + arg + "'");
		return parse_series(arg, order_);
	}

	Parabolic parabolic_arg(const std::string &arg) const
	{
		return Parabolic(series_arg(arg));
	}

	DerivationElement derivation_arg(const std::string &arg) const
	{
		return series_arg(arg).with_order(order_ - 2);
	}

	NilElement nil_arg(const std::string &arg) const
	{
		auto it = nil_symbols_.find(arg);
		if (it != nil_symbols_.end())
			return it->second;
		require_algebra();
		return parse_coords(arg);
	}

	SymbolTable<Parabolic> parabolic_table() const
	{
		SymbolTable<Parabolic> tab;
		for (const auto &[name, value] : series_symbols_)
			tab.bind(name, Parabolic(value));
		return tab;
	}

	SymbolTable<NilElement> nil_table() const
	{
		SymbolTable<NilElement> tab;
		for (const auto &[name, value] : nil_symbols_)
			tab.bind(name, value);
		return tab;
	}

	static void require_argc(const std::vector<std::string> &args, std::size_t n,
	                         const std::string &what)
	{
		if (args.size() != n)
			throw std::invalid_argument(what + " expects " + std::to_string(n) +
			                            " argument(s), got " + std::to_string(args.size()));
	}

	// ----- output -----

	void emit_json(Json j) { out_ << j.dump() << "\n"; }

	Json series_json(const TruncatedSeries &s) const
	{
		Json coeffs = Json::array();
		for (const auto &[e, c] : s.coeffs())
			coeffs.push_back(Json::array({e, to_string(c)}));
		return Json{{"coeffs", std::move(coeffs)}, {"order", s.order()}};
	}

	void emit_series(const TruncatedSeries &s)
	{
		if (json_) {
			Json body = series_json(s);
			emit_json(Json{{"schema", 1},
			               {"kind", "series"},
			               {"coeffs", std::move(body["coeffs"])},
			               {"order", s.order()}});
		} else {
			out_ << print_series(s) << "\n";
		}
	}

	Json nil_json(const NilElement &a) const
	{
		Json basis = Json::array();
		for (std::size_t i = 0; i < algebra_->dimension(); ++i)
			basis.push_back(algebra_->basis_name(i));
		Json coords = Json::object();
		for (const auto &[i, c] : a.coords())
			coords[algebra_->basis_name(i)] = to_string(c);
		return Json{{"schema", 1},
		            {"kind", "nil"},
		            {"basis", std::move(basis)},
		            {"coords", std::move(coords)}};
	}

	void emit_nil(const NilElement &a)
	{
		if (json_)
			emit_json(nil_json(a));
		else
			out_ << nil_to_string(a) << "\n";
	}

	// ----- commands -----

	void cmd_eval(const std::vector<std::string> &args)
	{
		require_argc(args, 1, "eval");
		Term t = parse_term(args[0]);
		if (contains_y(t))
			throw std::invalid_argument("eval needs a ground word; use solve for terms in y");
		emit_series(eval_term<CompgroupOps>(t, Parabolic::identity(order_), parabolic_table())
		                .body());
	}

	void cmd_solve(const std::vector<std::string> &args)
	{
		require_argc(args, 1, "solve");
		Term t = parse_term(args[0]);
		auto trace = solve_regular<CompgroupOps>(t, parabolic_table(), order_);
		if (json_) {
			Json steps = Json::array();
			for (const auto &[rho, c] : trace.steps)
				steps.push_back(Json::array({rho, to_string(c)}));
			Json j{{"schema", 1},
			       {"kind", "solve"},
			       {"solution", series_json(trace.solution.body())},
			       {"iterations", trace.iterations},
			       {"trace", std::move(steps)}};
			emit_json(std::move(j));
		} else {
			out_ << print_series(trace.solution.body()) << "\n";
		}
	}

	void cmd_binary_series(const std::vector<std::string> &args, const std::string &name)
	{
		require_argc(args, 2, name);
		if (name == "compose") {
			emit_series(compose(parabolic_arg(args[0]), parabolic_arg(args[1])).body());
		} else { // bch
			emit_series(bch(derivation_arg(args[0]), derivation_arg(args[1])));
		}
	}

	void cmd_unary_series(const std::vector<std::string> &args, const std::string &name)
	{
		require_argc(args, 1, name);
		if (name == "invert") {
			emit_series(inverse(parabolic_arg(args[0])).body());
		} else if (name == "log") {
			emit_series(log(parabolic_arg(args[0])));
		} else if (name == "exp") {
			emit_series(exp(derivation_arg(args[0])).body());
		} else { // decompose
			auto factors = decompose(parabolic_arg(args[0]));
			if (json_) {
				Json out = Json::array();
				for (const auto &[rho, mu] : factors)
					out.push_back(Json::array({rho, to_string(mu)}));
				emit_json(Json{{"schema", 1},
				               {"kind", "decomposition"},
				               {"factors", std::move(out)}});
			} else {
				if (factors.empty())
					out_ << "identity\n";
				for (const auto &[rho, mu] : factors)
					out_ << "(" << rho << ", " << to_string(mu) << ")\n";
			}
		}
	}

	void cmd_flow_like(const std::vector<std::string> &args, const std::string &name)
	{
		require_argc(args, 2, name);
		Parabolic f = parabolic_arg(args[0]);
		if (name == "flow") {
			emit_series(flow(f, parse_rational(args[1])).body());
		} else {
			int n = parse_int(args[1]);
			if (n < 1)
				throw std::invalid_argument("root index must be a positive integer");
			emit_series(nth_root(f, n).body());
		}
	}

	void cmd_laws(const std::vector<std::string> &args)
	{
		if (args.empty() || args.size() > 2)
			throw std::invalid_argument("laws expects: laws <model> [, <law>]");
		cmd_laws_full(args[0], args.size() == 2 ? args[1] : "", 200, seed_);
	}

	// Comma-separated coordinates collide with the comma argument
	// separator in scripts, so nil arguments are regrouped by arity:
	// a run of bare rationals is one coordinate vector.
	static std::string rejoin(const std::vector<std::string> &parts, std::size_t from,
	                          std::size_t to)
	{
		std::string out;
		for (std::size_t i = from; i < to; ++i) {
			if (!out.empty())
				out += ",";
			out += parts[i];
		}
		return out;
	}

	void cmd_nil(const std::vector<std::string> &args)
	{
		if (args.empty())
			throw std::invalid_argument("nil expects a subcommand");
		auto [sub, first_rest] = split_word(args[0]);
		std::vector<std::string> rest = args;
		rest[0] = first_rest;
		if (rest[0].empty())
			rest.erase(rest.begin());

		if (sub == "val" || sub == "res") {
			if (rest.size() > 1)
				rest = {rejoin(rest, 0, rest.size())};
		} else if (sub == "pow" && rest.size() > 2) {
			rest = {rejoin(rest, 0, rest.size() - 1), rest.back()};
		} else if (sub == "mul" && rest.size() > 2) {
			if (rest.size() % 2 != 0)
				throw std::invalid_argument(
				    "nil mul with inline coordinates needs two full vectors");
			rest = {rejoin(rest, 0, rest.size() / 2),
			        rejoin(rest, rest.size() / 2, rest.size())};
		}

		if (sub == "algebra") {
			require_argc(rest, 2, "nil algebra");
			if (algebra_)
				throw std::invalid_argument("the nilpotent algebra is fixed per session");
			int k = parse_int(rest[0]), c = parse_int(rest[1]);
			if (k < 1 || k > 4 || c < 1 || c > 6)
				throw std::invalid_argument("supported sizes are k <= 4, c <= 6");
			algebra_ = std::make_shared<FreeNilAlgebra>(k, c);
		} else if (sub == "basis") {
			require_algebra();
			if (json_) {
				Json basis = Json::array();
				for (std::size_t i = 0; i < algebra_->dimension(); ++i)
					basis.push_back(algebra_->basis_name(i));
				emit_json(Json{{"schema", 1}, {"kind", "basis"}, {"basis", basis}});
			} else {
				for (std::size_t i = 0; i < algebra_->dimension(); ++i)
					out_ << algebra_->basis_name(i)
					     << " (weight " << algebra_->basis()[i].weight << ")\n";
			}
		} else if (sub == "mul") {
			require_argc(rest, 2, "nil mul");
			emit_nil(nil_mul(nil_arg(rest[0]), nil_arg(rest[1])));
		} else if (sub == "pow") {
			require_argc(rest, 2, "nil pow");
			emit_nil(nil_pow(nil_arg(rest[0]), parse_rational(rest[1])));
		} else if (sub == "val") {
			require_argc(rest, 1, "nil val");
			auto v = lc_val(nil_arg(rest[0]));
			if (json_)
				emit_json(Json{{"schema", 1},
				               {"kind", "weight"},
				               {"value", v ? Json(*v) : Json(nullptr)}});
			else
				out_ << (v ? std::to_string(*v) : std::string("trivial")) << "\n";
		} else if (sub == "res") {
			require_argc(rest, 1, "nil res");
			emit_nil(nil_res(nil_arg(rest[0])));
		} else if (sub == "solve") {
			require_argc(rest, 1, "nil solve");
			require_algebra();
			Term t = parse_term(rest[0]);
			auto trace = solve_nilpotent(t, nil_table(), *algebra_);
			if (json_) {
				Json steps = Json::array();
				for (const auto &[rho, c] : trace.steps)
					steps.push_back(Json::array({rho, to_string(c)}));
				Json j = nil_json(trace.solution);
				j["kind"] = "solve";
				j["iterations"] = trace.iterations;
				j["trace"] = std::move(steps);
				emit_json(std::move(j));
			} else {
				emit_nil(trace.solution);
			}
		} else {
			throw std::invalid_argument("unknown nil subcommand '" + sub + "'");
		}
	}

	static bool contains_y(const Term &t)
	{
		if (t.kind == Term::Kind::variable)
			return true;
		for (const Term &c : t.children)
			if (contains_y(c))
				return true;
		return false;
	}
};

} // namespace valgroup
