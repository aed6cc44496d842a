#pragma once

// Command-line front end: request parsing and execution, kept separate from main()
// so that tests can drive it in-process.
//
//   norm   --fn F                              seminorm and norm of F
//   calc   --fn F --matrix M [--method] [--out] f(M) as matrix JSON
//   dgsf   --matrix M [--form]                 dGSF constant with its bracket
//   ritt   --matrix M                          Ritt constant with its bracket
//   decay  --fn F --matrix M [--nmax] [--out]  decay CSV and verdict
//   verify                                     the verification suite
//
// Exit codes: 0 success, 1 verification failure, 2 input or module error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besov/calculus.hpp"
#include "besov/disc_functions.hpp"
#include "besov/kt_experiments.hpp"
#include "besov/matrix_io.hpp"
#include "besov/operators.hpp"
#include "besov/parse.hpp"
#include "besov/verify.hpp"

namespace besov::cli {

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Thrown by parse_request for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

struct CommandRequest {
  std::string subcommand;
  std::string fn_spec;
  std::string matrix_path;
  std::optional<Method> method;
  double tol = 1e-8;
  int nmax = 500;
  std::string out_path;
  DgsfForm form = DgsfForm::TimesT;
};

inline DgsfForm parse_form(const std::string& s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "timest") return DgsfForm::TimesT;
  if (lower == "plain") return DgsfForm::Plain;
  if (lower == "exterior") return DgsfForm::Exterior;
  throw UsageError("--form: expected TimesT, Plain or Exterior, got '" + s + "'");
}

/// Validates flags, the function spec (parse errors keep their column) and the
/// matrix argument (an existing JSON file or an operator spec string).
inline CommandRequest parse_request(const std::vector<std::string>& argv) {
  CLI::App app{"Analytic Besov functions and the B-calculus for matrices", "besov"};
  app.require_subcommand(1, 1);
  CommandRequest req;
  std::string method, form;

  auto add_fn = [&](CLI::App* s) { s->add_option("--fn", req.fn_spec, "function spec, e.g. rho[0.5]")->required(); };
  auto add_matrix = [&](CLI::App* s) {
    s->add_option("--matrix", req.matrix_path, "matrix JSON file or operator spec, e.g. jordan[0.5,2]")->required();
  };
  auto add_tol = [&](CLI::App* s) { s->add_option("--tol", req.tol, "tolerance (default 1e-8)"); };

  auto* norm = app.add_subcommand("norm", "seminorm and B-norm of a function");
  add_fn(norm);
  add_tol(norm);
  auto* calc = app.add_subcommand("calc", "f(T) as matrix JSON");
  add_fn(calc);
  add_matrix(calc);
  calc->add_option("--method", method, "taylor, abel or integral (default: taylor if r(T) < 1, else abel)");
  add_tol(calc);
  calc->add_option("--out", req.out_path, "output JSON path (default stdout)");
  auto* dgsf = app.add_subcommand("dgsf", "dGSF constant estimate");
  add_matrix(dgsf);
  dgsf->add_option("--form", form, "TimesT, Plain or Exterior (default TimesT)");
  add_tol(dgsf);
  auto* ritt = app.add_subcommand("ritt", "Ritt constant estimate");
  add_matrix(ritt);
  auto* decay = app.add_subcommand("decay", "decay of ||T^n f(T)||");
  add_fn(decay);
  add_matrix(decay);
  decay->add_option("--method", method, "taylor, abel or integral");
  add_tol(decay);
  decay->add_option("--nmax", req.nmax, "largest power N (default 500)");
  decay->add_option("--out", req.out_path, "output CSV path (default stdout)");
  app.add_subcommand("verify", "run the verification suite");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  req.subcommand = app.get_subcommands().front()->get_name();
  if (!(req.tol > 0.0)) throw UsageError("--tol: must be positive");
  if (req.nmax < 1) throw UsageError("--nmax: must be >= 1");
  if (!method.empty()) {
    try {
      req.method = parse_method(method);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--method: ") + e.what());
    }
  }
  if (!form.empty()) req.form = parse_form(form);
  if (!req.fn_spec.empty()) parse_function(req.fn_spec);
  if (!req.matrix_path.empty()) load_operator(req.matrix_path);
  return req;
}

namespace detail {

template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw SpecError("cannot write '" + path + "'");
  fn(f);
}

}  // namespace detail

inline int execute(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  QuadratureConfig cfg;
  cfg.tol = req.tol;
  const auto& cmd = req.subcommand;
  if (cmd == "norm") {
    const auto b = besov_norm(parse_function(req.fn_spec), cfg);
    out << verify::format("seminorm=%.6f norm=%.6f", b.seminorm, b.norm) << '\n';
    return 0;
  }
  if (cmd == "calc") {
    const OperatorMatrix t = load_operator(req.matrix_path);
    const Method m = req.method.value_or(default_method(t));
    const auto result = functional_calculus(t, parse_function(req.fn_spec), m, req.tol, cfg);
    detail::with_output(req.out_path, out, [&](std::ostream& os) { os << result_to_json(result).dump() << '\n'; });
    return 0;
  }
  if (cmd == "dgsf") {
    const auto e = dgsf_constant(load_operator(req.matrix_path), req.form, cfg);
    out << verify::format("form=%s value=%.10g bracket=[%.10g, %.10g] functional_lower=%.10g depth=%d theta_points=%d%s",
                          to_string(e.form).c_str(), e.value, std::min(e.coarse_value, e.value),
                          std::max(e.coarse_value, e.value), e.functional_lower, e.r_grid_depth, e.theta_points,
                          e.truncated ? " truncated" : "")
        << '\n';
    return 0;
  }
  if (cmd == "ritt") {
    const OperatorMatrix t = load_operator(req.matrix_path);
    const RittGrid fine = RittGrid::standard();
    RittGrid coarse = fine;
    coarse.theta_points /= 4;
    const double c_fine = ritt_constant(t, fine), c_coarse = ritt_constant(t, coarse);
    out << verify::format("ritt_constant=%.10g bracket=[%.10g, %.10g]", c_fine, std::min(c_coarse, c_fine),
                          std::max(c_coarse, c_fine))
        << '\n';
    return 0;
  }
  if (cmd == "decay") {
    const OperatorMatrix t = load_operator(req.matrix_path);
    const auto rec = decay_sequence(t, parse_function(req.fn_spec), req.nmax, req.method, req.tol, cfg);
    detail::with_output(req.out_path, out, [&](std::ostream& os) { write_decay_csv(os, rec); });
    std::ostream& note = req.out_path.empty() ? err : out;
    note << verify::format("verdict=%s f_on_unitary=%.6e norms[N]=%.6e necessity=%s", to_string(rec.verdict).c_str(),
                           rec.f_on_unitary, rec.norms.back(), necessity_bound(rec) ? "true" : "false")
         << '\n';
    return 0;
  }
  if (cmd == "verify") {
    int passed = 0, failed = 0;
    for (const auto& c : verify::acceptance_suite()) {
      const auto r = verify::timed(c.name, c.run);
      out << verify::report_line(r) << std::endl;
      (r.passed ? passed : failed)++;
    }
    out << "passed=" << passed << " failed=" << failed << '\n';
    return failed == 0 ? 0 : 1;
  }
  throw UsageError("unknown subcommand '" + cmd + "'");
}

/// parse_request + execute with the exit-code contract.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  try {
    return execute(parse_request(argv), out, err);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace besov::cli
