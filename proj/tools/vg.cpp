// vg - batch front end for the valued-group library.
//
// One-shot:  vg <command> [args...] [flags]
// Scripts:   vg run <path> [flags]
//
// Exit codes: 0 success, 1 user error, 2 internal assertion.

#include "valgroup/session.hpp"
#include "valgroup/solver.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace valgroup;

namespace {

const char *usage_text = R"(usage: vg <command> [args...] [flags]

commands:
  compose <f> <g>        group product f(g) of two parabolic series
  invert <f>             compositional inverse
  flow <f> <mu>          rational flow through f
  root <f> <n>           n-th compositional root
  log <f>                contracting derivation with exp = f
  exp <u>                parabolic series exp(u d), d = t^2 d/dt
  bch <u> <w>            Baker-Campbell-Hausdorff product of derivations
  decompose <f>          canonical scaling-flow factors of f
  eval <word>            evaluate a ground word over bound constants
  solve <term>           unique solution of term(y) = 1
  laws <model>           run the axiom harness on a builtin model
  nil <sub> [args...]    nilpotent group operations (basis, mul, pow,
                         val, res, solve; needs --k and --c)
  run <path>             execute a session script

flags:
  --order N      truncation order (default 16)
  --seed S       sampling seed (default 0)
  --json         machine-readable output (schema 1)
  --let id=expr  bind an identifier (repeatable)
  --law ID       restrict `laws` to one law
  --samples K    sample count for `laws` (default 200)
  --k K --c C    nilpotent generators and class for `nil`

series literals use the grammar `t + 2 t^3 - 1/2 t^4`; terms use
`g1 * y^2 * inv(g2)` with rational exponents `y^(1/2)`.

models: trivial, affine, compgroup, derivations, nilpotent, product,
nilproduct
)";

struct Options {
	std::string command;
	std::vector<std::string> positional;
	std::vector<std::pair<std::string, std::string>> lets;
	int order = 16;
	long samples = 200;
	std::uint64_t seed = 0;
	std::string law;
	int nil_generators = 0, nil_class = 0;
	bool json = false;
};

Options parse_argv(int argc, char **argv)
{
	Options opt;
	auto need_value = [&](int &i, const std::string &flag) -> std::string {
		if (i + 1 >= argc)
			throw std::invalid_argument(flag + " needs a value");
		return argv[++i];
	};
	for (int i = 1; i < argc; ++i) {
		std::string arg = argv[i];
		if (arg == "--help" || arg == "-h") {
			std::cout << usage_text;
			std::exit(0);
		} else if (arg == "--json") {
			opt.json = true;
		} else if (arg == "--order") {
			opt.order = std::stoi(need_value(i, arg));
		} else if (arg == "--seed") {
			opt.seed = std::stoull(need_value(i, arg));
		} else if (arg == "--samples") {
			opt.samples = std::stol(need_value(i, arg));
		} else if (arg == "--law") {
			opt.law = need_value(i, arg);
		} else if (arg == "--k") {
			opt.nil_generators = std::stoi(need_value(i, arg));
		} else if (arg == "--c") {
			opt.nil_class = std::stoi(need_value(i, arg));
		} else if (arg == "--let") {
			std::string binding = need_value(i, arg);
			auto eq = binding.find('=');
			if (eq == std::string::npos)
				throw std::invalid_argument("--let needs id=expr");
			opt.lets.emplace_back(binding.substr(0, eq), binding.substr(eq + 1));
		} else if (arg.rfind("--", 0) == 0) {
			throw std::invalid_argument("unknown flag '" + arg + "'");
		} else if (opt.command.empty()) {
			opt.command = arg;
		} else {
			opt.positional.push_back(arg);
		}
	}
	if (opt.command.empty())
		throw std::invalid_argument("no command given (try --help)");
	return opt;
}

int dispatch(const Options &opt)
{
	Session session(std::cout, opt.json);
	session.set_order(opt.order);
	session.set_seed(opt.seed);

	if (opt.command == "run") {
		if (opt.positional.size() != 1)
			throw std::invalid_argument("run expects one script path");
		std::ifstream in(opt.positional[0]);
		if (!in.good())
			throw std::invalid_argument("cannot open script '" + opt.positional[0] + "'");
		std::ostringstream text;
		text << in.rdbuf();
		for (const auto &[name, rhs] : opt.lets)
			session.bind(name, rhs);
		session.run_script(text.str());
		return 0;
	}

	if (opt.nil_generators || opt.nil_class)
		session.command("nil", {"algebra " + std::to_string(opt.nil_generators),
		                        std::to_string(opt.nil_class)});
	for (const auto &[name, rhs] : opt.lets)
		session.bind(name, rhs);

	if (opt.command == "laws") {
		if (opt.positional.size() != 1)
			throw std::invalid_argument("laws expects one model name");
		session.cmd_laws_full(opt.positional[0], opt.law, static_cast<int>(opt.samples),
		                      opt.seed);
		return 0;
	}

	// remaining commands take their positionals as comma-joined session args
	std::string args;
	for (const auto &p : opt.positional) {
		if (!args.empty())
			args += ", ";
		args += p;
	}
	if (opt.command == "nil") {
		// `vg nil mul a b` -> session args ["mul a", "b"], leaving commas
		// inside coordinate literals untouched
		if (opt.positional.empty())
			throw std::invalid_argument("nil expects a subcommand");
		std::vector<std::string> args;
		args.push_back(opt.positional.size() > 1
		                   ? opt.positional[0] + " " + opt.positional[1]
		                   : opt.positional[0]);
		for (std::size_t i = 2; i < opt.positional.size(); ++i)
			args.push_back(opt.positional[i]);
		session.command("nil", args);
		return 0;
	}
	session.command(opt.command, Session::split_command_args(args));
	return 0;
}

} // namespace

int main(int argc, char **argv)
{
	try {
		Options opt = parse_argv(argc, argv);
		long warnings_before = mixed_order_warnings();
		int rc = dispatch(opt);
		if (mixed_order_warnings() != warnings_before)
			std::cerr << "warning: operands of different truncation orders were "
			             "combined; results use the smaller order\n";
		return rc;
	} catch (const SolverBoundError &e) {
		std::cerr << "internal error: " << e.what() << "\n";
		return 2;
	} catch (const std::invalid_argument &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	} catch (const std::logic_error &e) {
		std::cerr << "internal error: " << e.what() << "\n";
		return 2;
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	}
}
