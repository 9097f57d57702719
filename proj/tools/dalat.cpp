#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"
#include "dalat/function_io.hpp"
#include "dalat/lattice_io.hpp"
#include "dalat/rational.hpp"
#include "dalat/realization.hpp"
#include "dalat/verify.hpp"

using namespace dalat;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) fail(ErrorCode::InvalidParameter, "not a number: '" + text + "'");
  return x;
}

// "RE" or "RE,IM".
Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return parse_real(text);
  return {parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1))};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

// "c0,c1,..." of reals, or "c0;c1;..." where each entry is RE or RE,IM.
std::vector<Complex> parse_coefficients(const std::string& text) {
  std::vector<Complex> out;
  if (text.find(';') != std::string::npos) {
    for (const auto& part : split(text, ';')) out.push_back(parse_complex(part));
  } else {
    for (const auto& part : split(text, ',')) out.push_back(parse_real(part));
  }
  if (out.empty()) fail(ErrorCode::InvalidParameter, "empty coefficient list");
  return out;
}

ordered_json complex_json(Complex c) { return {c.real(), c.imag()}; }

ordered_json matrix_json(const CMatrix& m) {
  auto rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Output {
  std::string path;

  void emit(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
    } else {
      write_text_file(path, text);
    }
  }
  void emit(const ordered_json& doc) const { emit(doc.dump(2) + "\n"); }

  void function(const DAFunction& f, const std::string& format, const std::string& name) const {
    if (format != "csv" && format != "json") fail(ErrorCode::InvalidParameter, "unknown export format " + format);
    if (path.empty()) {
      emit(format == "csv" ? functions_to_csv({{name, f}}) : function_to_json(f).dump() + "\n");
    } else {
      export_values(f, format, path, name);
    }
  }
};

LatticePtr open_lattice(const std::string& path) { return std::make_shared<const Lattice>(load_lattice(path)); }

CLI::App* format_option(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format: csv or json")->capture_default_str();
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete analytic functions on rhombic lattices"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = 1e-9;
  std::uint64_t seed = 1;
  Output out;
  app.add_option("--tol", tol, "Relative tolerance")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("-o,--out", out.path, "Output file (default: stdout)");

  std::string lattice_file, fn_file, r1_file, r2_file, format = "csv";

  // lattice
  auto* lattice_cmd = app.add_subcommand("lattice", "Generate or validate lattice patches");
  lattice_cmd->require_subcommand(1);
  auto* gen = lattice_cmd->add_subcommand("gen", "Generate a square or rhombic patch");
  std::string kind = "square";
  int radius = 2;
  double alpha = M_PI / 3;
  gen->add_option("--kind", kind, "square or rhombic")->check(CLI::IsMember({"square", "rhombic"}))->capture_default_str();
  gen->add_option("--radius", radius, "Patch radius R")->required();
  gen->add_option("--alpha", alpha, "Rhombus angle in radians")->capture_default_str();
  auto* validate_cmd = lattice_cmd->add_subcommand("validate", "Check lattice invariants");
  validate_cmd->add_option("file", lattice_file, "Lattice JSON")->required();

  auto* basis = app.add_subcommand("basis", "Export z^(0..N)");
  int basis_n = 4;
  basis->add_option("--lattice", lattice_file)->required();
  basis->add_option("--n", basis_n, "Highest degree")->required()->check(CLI::NonNegativeNumber);

  auto* eigen = app.add_subcommand("eigen", "Export the eigenfunction e_t");
  std::string t_text;
  eigen->add_option("--lattice", lattice_file)->required();
  eigen->add_option("--t", t_text, "Parameter RE[,IM]")->required();
  format_option(eigen, format);

  auto* shift = app.add_subcommand("shift", "Forward or backward shift of a function");
  std::string direction;
  shift->add_option("direction", direction, "fwd or bwd")->required()->check(CLI::IsMember({"fwd", "bwd"}));
  shift->add_option("--fn", fn_file, "Function JSON")->required();
  shift->add_option("--lattice", lattice_file, "Lattice the function lives on")->required();
  std::string shift_format = "json";
  format_option(shift, shift_format);

  auto* real = app.add_subcommand("real", "Realization calculus");
  std::string real_op;
  real->add_option("op", real_op, "eval, sum, mul or inv")->required()->check(CLI::IsMember({"eval", "sum", "mul", "inv"}));
  real->add_option("--lattice", lattice_file)->required();
  real->add_option("-r", r1_file, "Realization JSON")->required();
  real->add_option("-s", r2_file, "Second realization JSON (sum, mul)");
  format_option(real, format);

  auto* tau = app.add_subcommand("tau", "The tau map and its inverse");
  std::string tau_op, num_text, den_text;
  tau->add_option("op", tau_op, "fwd or inv")->required()->check(CLI::IsMember({"fwd", "inv"}));
  tau->add_option("-r", r1_file, "Realization JSON (fwd)");
  tau->add_option("--t", t_text, "Parameter RE[,IM] (fwd)");
  tau->add_option("--num", num_text, "Numerator coefficients (inv)");
  tau->add_option("--den", den_text, "Denominator coefficients (inv)");
  tau->add_option("--lattice", lattice_file, "Lattice (inv)");

  auto* kernel_cmd = app.add_subcommand("kernel", "Export the reproducing kernel K_w");
  long long w_id = 0;
  double M = 2.0;
  kernel_cmd->add_option("--lattice", lattice_file)->required();
  kernel_cmd->add_option("--w", w_id, "Vertex id")->required();
  kernel_cmd->add_option("--m", M, "Kernel parameter M > 1")->capture_default_str();
  format_option(kernel_cmd, format);

  auto* certify = app.add_subcommand("certify", "Polynomial quotient certificate of a realization");
  certify->add_option("-r", r1_file, "Realization JSON")->required();
  certify->add_option("--lattice", lattice_file)->required();

  auto* rank = app.add_subcommand("rank", "Rank of the backward shift chain");
  int rank_k = 5;
  rank->add_option("--fn", fn_file, "Function JSON")->required();
  rank->add_option("--k", rank_k, "Chain length K")->required()->check(CLI::NonNegativeNumber);
  rank->add_option("--lattice", lattice_file, "Lattice the function lives on")->required();

  auto* verify = app.add_subcommand("verify", "Run the property suite");
  VerifyConfig config;
  std::string groups;
  bool serial = false;
  verify->add_option("--lattice", lattice_file)->required();
  verify->add_option("--n", config.N, "Basis depth of random DA functions")->capture_default_str();
  verify->add_option("--ntr", config.N_tr, "Series truncation")->capture_default_str();
  verify->add_option("--groups", groups, "Comma-separated: lattice,calculus,realization,rational");
  verify->add_flag("--serial", serial, "Use the serial kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const Tolerance tolerance{tol, std::min(1e-12, tol)};
  try {
    if (*gen) {
      const auto k = kind == "square" ? LatticeKind::square : LatticeKind::rhombic;
      out.emit(lattice_to_json(generate(k, radius, alpha)).dump() + "\n");
      return kOk;
    }
    if (*validate_cmd) {
      const auto report = validate(read_lattice(lattice_file));
      for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
      }
      return report.ok() ? kOk : kFailure;
    }
    if (*basis) {
      const auto lat = open_lattice(lattice_file);
      const auto zs = monomial_basis(lat, basis_n);
      std::vector<NamedFunction> named;
      for (int n = 0; n <= basis_n; ++n) named.emplace_back("z" + std::to_string(n), zs[std::size_t(n)]);
      out.emit(functions_to_csv(named));
      return kOk;
    }
    if (*eigen) {
      out.function(exp_basis(open_lattice(lattice_file), parse_complex(t_text)), format, "e");
      return kOk;
    }
    if (*shift) {
      const auto lat = open_lattice(lattice_file);
      const auto f = load_function(fn_file, lat);
      const auto g = direction == "fwd" ? forward_shift(f, tolerance) : backward_shift(f, tolerance);
      out.function(g, shift_format, "f");
      return kOk;
    }
    if (*real) {
      const auto lat = open_lattice(lattice_file);
      const auto r1 = load_realization(r1_file);
      if (real_op == "eval") {
        out.function(evaluate(r1, lat), format, "f");
        return kOk;
      }
      if (real_op == "inv") {
        out.emit(realization_to_json(inverse(r1, lat->directions())));
        return kOk;
      }
      if (r2_file.empty()) fail(ErrorCode::InvalidParameter, real_op + " needs -s");
      const auto r2 = load_realization(r2_file);
      out.emit(realization_to_json(real_op == "sum" ? sum(r1, r2) : product(r1, r2)));
      return kOk;
    }
    if (*tau) {
      if (tau_op == "fwd") {
        if (r1_file.empty() || t_text.empty()) fail(ErrorCode::InvalidParameter, "tau fwd needs -r and --t");
        const Complex t = parse_complex(t_text);
        out.emit(ordered_json{{"t", complex_json(t)}, {"value", matrix_json(tau_eval(load_realization(r1_file), t))}});
        return kOk;
      }
      if (num_text.empty() || den_text.empty() || lattice_file.empty()) {
        fail(ErrorCode::InvalidParameter, "tau inv needs --num, --den and --lattice");
      }
      const auto lat = open_lattice(lattice_file);
      const RationalScalarFunction f{parse_coefficients(num_text), parse_coefficients(den_text)};
      out.emit(realization_to_json(tau_inverse(f, lat->directions())));
      return kOk;
    }
    if (*kernel_cmd) {
      const auto lat = open_lattice(lattice_file);
      out.function(kernel(lat, lat->index(w_id), M).values, format, "K");
      return kOk;
    }
    if (*certify) {
      const auto lat = open_lattice(lattice_file);
      const auto f = RationalDA::from(load_realization(r1_file), lat);
      const auto cert = quotient_certificate(f);
      const double threshold = 10.0 * tol * std::max(1.0, max_magnitude(f.values));
      auto p = ordered_json::array();
      for (const auto& c : cert.p.coefficients()) p.push_back(complex_json(c(0, 0)));
      auto q = ordered_json::array();
      for (const auto& c : cert.q.coefficients()) q.push_back(matrix_json(c));
      const bool ok = cert.pole_free && cert.residual <= threshold;
      out.emit(ordered_json{{"p", p}, {"q", q}, {"residual", cert.residual}, {"threshold", threshold},
                            {"pole_free", cert.pole_free}, {"ok", ok}});
      return ok ? kOk : kFailure;
    }
    if (*rank) {
      const auto lat = open_lattice(lattice_file);
      out.emit(std::to_string(shift_rank(load_function(fn_file, lat), rank_k, tolerance)) + "\n");
      return kOk;
    }
    if (*verify) {
      config.lattice_file = lattice_file;
      config.tol = tolerance;
      config.seed = seed;
      if (!groups.empty()) config.groups = split(groups, ',');
      const auto report = run_verify(config, serial ? Exec::serial : Exec::parallel);
      out.emit(report.to_json());
      std::cerr << report.summary();
      return report.all_passed() ? kOk : kFailure;
    }
  } catch (const Error& e) {
    std::cerr << "dalat: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "dalat: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
