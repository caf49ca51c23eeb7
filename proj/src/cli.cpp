#include "widzard/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "widzard/atp.hpp"
#include "widzard/errors.hpp"
#include "widzard/kernel.hpp"
#include "widzard/pace.hpp"

namespace widzard {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Prefixes parse errors with the file they came from.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FileError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F> auto parse_file(const std::string &path, F &&parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError &e) {
    throw FileError(path + ": " + e.what());
  }
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw FileError(path + ": cannot write file");
}

unsigned long parse_count(const std::string &flag, const std::string &value) {
  unsigned long v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || p != value.data() + value.size())
    throw UsageError(flag + " expects a non-negative integer, got '" + value + "'");
  return v;
}

void print_banner(std::ostream &err) {
  err << "Loaded DP-cores:\n";
  for (const auto &d : CoreRegistry::builtin().descriptors())
    err << "  " << d.name << " (CoreType: " << to_string(d.core_type)
        << ", ParameterType: " << to_string(d.parameter_type) << ")\n";
}

int model_check(const std::vector<std::string> &args, std::ostream &out) {
  if (args.size() < 2)
    throw UsageError("-modelcheck expects PACE or ITD");
  const std::string &format = args[1];
  RunReport report;
  if (format == "PACE") {
    if (args.size() != 5)
      throw UsageError("-modelcheck PACE <property> <graph.gr> <decomposition.td>");
    PropertySpec spec = parse_file(args[2], parse_property);
    MultiGraph g = parse_file(args[3], parse_gr);
    TreeDecomposition td = parse_file(args[4], parse_td);
    if (auto bad = validate_td(g, td))
      throw ValidationError(args[4] + ": " + bad->message);
    const unsigned k = static_cast<unsigned>(td.width());
    report = run(spec, td_to_itd(g, td, k), k);
  } else if (format == "ITD") {
    if (args.size() != 4)
      throw UsageError("-modelcheck ITD <property> <term.itd>");
    PropertySpec spec = parse_file(args[2], parse_property);
    ItdTerm term = parse_file(args[3], parse_itd);
    const Label top = term.max_label();
    report = run(spec, term, top == 0 ? 0 : top - 1);
  } else {
    throw UsageError("unknown model-checking input format '" + format + "'");
  }
  out << format_report(report);
  return report.satisfied ? kExitSatisfied : kExitNotSatisfied;
}

void export_counterexample(const std::string &property_path, const Counterexample &ce,
                           std::ostream &err) {
  const std::string stem =
      std::filesystem::path(property_path).stem().string() + "_counterexample";
  const ItdEvaluation eval = evaluate(ce.term);
  write_file(stem + ".gr", write_gr(eval.graph));
  write_file(stem + ".td", write_td(itd_to_td(ce.term, eval)));
  write_file(stem + ".itd", serialize_itd(ce.term));
  err << "Counterexample written to " << stem << ".gr, " << stem << ".td, " << stem
      << ".itd\n";
}

int theorem_prove(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  if (args.size() < 2)
    throw UsageError("-atp expects tw=<k> or pw=<k>");
  SearchOptions opt;
  AtpReportInfo info;
  const std::string &width = args[1];
  if (width.rfind("tw=", 0) == 0)
    opt.width = WidthKind::Tree;
  else if (width.rfind("pw=", 0) == 0)
    opt.width = WidthKind::Path;
  else
    throw UsageError("width must be tw=<k> or pw=<k>, got '" + width + "'");
  opt.k = static_cast<unsigned>(parse_count(width.substr(0, 2), width.substr(3)));
  if (opt.k + 1 > kMaxLabel)
    throw UsageError("width too large (at most " + std::to_string(kMaxLabel - 1) + ")");

  bool files = false;
  unsigned long nthreads = 1;
  std::vector<std::string> positional;
  for (std::size_t i = 2; i < args.size(); ++i) {
    const std::string &a = args[i];
    auto value = [&]() -> const std::string & {
      if (i + 1 >= args.size())
        throw UsageError(a + " expects a value");
      return args[++i];
    };
    if (a == "-pl")
      info.print_loop = true;
    else if (a == "-premise")
      opt.premise = true;
    else if (a == "-files")
      files = true;
    else if (a == "-nthreads") {
      nthreads = parse_count(a, value());
      if (nthreads == 0)
        throw UsageError("-nthreads must be at least 1");
    }
    else if (a == "-maxiter")
      opt.max_iterations = parse_count(a, value());
    else if (a == "-maxstates")
      opt.max_states = parse_count(a, value());
    else if (!a.empty() && a[0] == '-')
      throw UsageError("unknown option '" + a + "'");
    else
      positional.push_back(a);
  }
  if (positional.size() != 2)
    throw UsageError("-atp expects a search strategy and a property file");
  const std::string &strategy = positional[0];
  if (strategy == "BreadthFirstSearch") {
    opt.threads = 1;
  } else if (strategy == "ParallelBreadthFirstSearch") {
    opt.threads = static_cast<unsigned>(nthreads);
  } else if (strategy == "IsomorphismBreadthFirstSearch") {
    opt.isomorphism = true;
    opt.threads = 1;
  } else if (strategy == "ParallelIsomorphismBreadthFirstSearch") {
    opt.isomorphism = true;
    opt.threads = static_cast<unsigned>(nthreads);
  } else {
    throw UsageError("unknown search strategy '" + strategy + "'");
  }
  PropertySpec spec = parse_file(positional[1], parse_property);
  instantiate_cores(spec);
  if (opt.premise && !premise_of(spec.formula))
    err << "warning: -premise given but the formula is not an implication; no pruning\n";

  info.strategy = strategy;
  info.width = opt.width;
  info.k = opt.k;
  info.premise = opt.premise;
  out << format_atp_header(spec, info) << std::flush;
  if (info.print_loop)
    opt.on_row = [&out](const IterationRow &row) { out << format_iteration_row(row) << std::flush; };

  SearchResult result = search(spec, opt);
  out << format_atp_result(result);
  if (files && result.counterexample)
    export_counterexample(positional[1], *result.counterexample, err);
  switch (result.verdict) {
  case Verdict::Satisfied:
    return kExitSatisfied;
  case Verdict::NotSatisfied:
    return kExitNotSatisfied;
  case Verdict::Undecided:
    return kExitUndecided;
  }
  return kExitUndecided;
}

} // namespace

std::string usage() {
  return "usage:\n"
         "  widzard -modelcheck PACE <property> <graph.gr> <decomposition.td>\n"
         "  widzard -modelcheck ITD <property> <term.itd>\n"
         "  widzard -atp tw=<k>|pw=<k> [-pl] [-nthreads N] [-premise] [-files]\n"
         "          [-maxiter N] [-maxstates N] <strategy> <property>\n"
         "strategies: BreadthFirstSearch, ParallelBreadthFirstSearch,\n"
         "            IsomorphismBreadthFirstSearch, ParallelIsomorphismBreadthFirstSearch\n";
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  try {
    if (args.empty())
      throw UsageError("missing command");
    if (args[0] == "-h" || args[0] == "--help") {
      out << usage();
      return kExitSatisfied;
    }
    if (args[0] == "-modelcheck") {
      print_banner(err);
      return model_check(args, out);
    }
    if (args[0] == "-atp") {
      print_banner(err);
      return theorem_prove(args, out, err);
    }
    throw UsageError("unknown command '" + args[0] + "'");
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n" << usage();
  } catch (const FileError &e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError &e) {
    err << "error: " << e.what() << "\n";
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << "\n";
  } catch (const CoreError &e) {
    err << "error: " << e.what() << "\n";
  } catch (const FormulaDomainError &e) {
    err << "error: formula evaluation failed: " << e.what() << "\n";
  }
  return kExitUsage;
}

} // namespace widzard
