#include "dalat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"
#include "dalat/lattice_io.hpp"
#include "dalat/oracles.hpp"
#include "dalat/polynomial.hpp"
#include "dalat/rational.hpp"
#include "dalat/realization.hpp"

namespace dalat {

namespace {

using Rng = std::mt19937_64;
using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Complex random_in_disk(Rng& rng, double radius) {
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(r, uniform(rng, -M_PI, M_PI));
}

CMatrix random_matrix(Rng& rng, Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
  }
  return m;
}

CMatrix random_with_norm(Rng& rng, Index rows, Index cols, double frobenius) {
  CMatrix m = random_matrix(rng, rows, cols);
  return m.norm() == 0.0 ? m : CMatrix(m * (frobenius / m.norm()));
}

// A with Frobenius norm <= 0.7 lies strictly inside the unit disk, which the
// forbidden set never enters.
Realization random_realization(Rng& rng, Index l, Index m, Index n) {
  return Realization(random_with_norm(rng, l, l, uniform(rng, 0.2, 0.7)), random_matrix(rng, l, n),
                     random_matrix(rng, m, l), random_matrix(rng, m, n));
}

// Invertible D close to I and small B, C keep A - B D^{-1} C admissible too.
Realization random_invertible(Rng& rng, Index l, Index m) {
  CMatrix D = CMatrix::Identity(m, m) + random_with_norm(rng, m, m, 0.2);
  return Realization(random_with_norm(rng, l, l, 0.6), random_with_norm(rng, l, m, 0.3),
                     random_with_norm(rng, m, l, 0.3), std::move(D));
}

double relative(double err, double scale) { return err / std::max(1.0, scale); }

double rel_diff(const DAFunction& a, const DAFunction& b) {
  return relative(max_difference(a, b), std::max(max_magnitude(a), max_magnitude(b)));
}

double rel_diff(const CMatrix& a, const CMatrix& b) {
  return relative(max_abs(a - b), std::max(max_abs(a), max_abs(b)));
}

double relative_cr(const DAFunction& f) { return relative(cr_residual(f), max_magnitude(f)); }

int numerical_rank(CMatrix M, double threshold) {
  for (Index j = 0; j < M.cols(); ++j) {
    const double n = M.col(j).cwiseAbs().maxCoeff();
    if (n > 0.0) M.col(j) /= n;
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(M);
  qr.setThreshold(threshold);
  return static_cast<int>(qr.rank());
}

// Column k holds the values of functions[k] over all vertices.
CMatrix value_matrix(const std::vector<DAFunction>& functions) {
  const auto n = functions.front().lattice().vertex_count();
  CMatrix M(Index(n), Index(functions.size()));
  for (std::size_t k = 0; k < functions.size(); ++k) {
    for (std::size_t v = 0; v < n; ++v) M(Index(v), Index(k)) = functions[k].scalar_at(v);
  }
  return M;
}

std::optional<std::size_t> vertex_at(const Lattice& lat, Complex z) {
  for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
    if (near(lat.coord(v), z)) return v;
  }
  return std::nullopt;
}

struct Measured {
  double residual;
  std::string detail;
};

class Group {
 public:
  Group(VerifyReport& report, std::string name, const Tolerance& tol)
      : report_(report), name_(std::move(name)), tol_(tol) {}

  /// Threshold multiplier * tol.rel.
  void tolerance(const std::string& property, double multiplier, const std::function<Measured()>& body) {
    run(property, multiplier * tol_.rel, body);
  }
  /// Residual is a count of violations; must be zero.
  void exact(const std::string& property, const std::function<Measured()>& body) { run(property, 0.0, body); }

 private:
  void run(const std::string& property, double threshold, const std::function<Measured()>& body) {
    PropertyResult r{name_, property, kNaN, threshold, false, ""};
    try {
      const auto m = body();
      r.residual = m.residual;
      r.detail = m.detail;
      r.passed = m.residual <= threshold;
    } catch (const Error& e) {
      r.detail = e.what();
    }
    report_.results.push_back(std::move(r));
  }

  VerifyReport& report_;
  std::string name_;
  Tolerance tol_;
};

struct Context {
  LatticePtr lattice;
  const VerifyConfig& config;
  Exec exec;
  Rng rng;
  std::vector<DAFunction> basis;  // z^(0..N_tr)

  const Lattice& lat() const { return *lattice; }
  std::size_t origin() const { return lattice->origin(); }

  DAFunction random_function(Shape s = {1, 1}) {
    std::vector<CMatrix> values(lattice->vertex_count(), CMatrix::Zero(s.rows, s.cols));
    for (int n = 0; n <= config.N; ++n) {
      const CMatrix c = random_matrix(rng, s.rows, s.cols);
      for (std::size_t v = 0; v < values.size(); ++v) values[v] += basis[std::size_t(n)].scalar_at(v) * c;
    }
    return DAFunction(lattice, s, std::move(values));
  }
};

void lattice_group(Context& ctx, VerifyReport& report) {
  Group g(report, "lattice", ctx.config.tol);
  const auto& lat = ctx.lat();

  g.exact("validate", [&] {
    const auto failures = validate(lat).failures();
    std::string names;
    for (const auto& f : failures) names += (names.empty() ? "" : ", ") + f;
    return Measured{double(failures.size()), names};
  });
  g.exact("V - E + F = 1", [&] {
    const double chi = double(lat.vertex_count()) - double(lat.edge_count()) + double(lat.face_count());
    return Measured{std::abs(chi - 1.0), "V=" + std::to_string(lat.vertex_count()) + " E=" +
                                             std::to_string(lat.edge_count()) + " F=" + std::to_string(lat.face_count())};
  });
  g.tolerance("faces close (a - b + c - d = 0)", 1.0, [&] {
    double worst = 0.0;
    for (const auto& f : lat.faces()) {
      if (f.size() != 4) return Measured{kNaN, "face with " + std::to_string(f.size()) + " vertices"};
      worst = std::max(worst, std::abs(lat.coord(f[0]) - lat.coord(f[1]) + lat.coord(f[2]) - lat.coord(f[3])));
    }
    return Measured{worst, ""};
  });
  g.tolerance("forbidden set outside the unit disk", 1e-3, [&] {
    double smallest = std::numeric_limits<double>::infinity();
    for (auto s : lat.directions().forbidden) smallest = std::min(smallest, std::abs(s));
    std::ostringstream msg;
    msg << "min |s| = " << smallest;
    return Measured{std::max(0.0, 1.0 - smallest), msg.str()};
  });
  g.exact("find_path length equals BFS distance", [&] {
    int bad = 0;
    for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
      if (find_path(lat, ctx.origin(), v).size() - 1 != lat.tree().depth[v]) ++bad;
    }
    return Measured{double(bad), ""};
  });
  g.exact("two distinct paths beyond distance 1", [&] {
    int bad = 0;
    for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
      if (lat.tree().depth[v] >= 2 && oracles::distinct_paths(lat, ctx.origin(), v, 2).size() < 2) ++bad;
    }
    return Measured{double(bad), ""};
  });
}

void calculus_group(Context& ctx, VerifyReport& report) {
  Group g(report, "calculus", ctx.config.tol);
  const auto& lat = ctx.lat();
  const auto& tol = ctx.config.tol;
  const auto& basis = ctx.basis;

  std::vector<DAFunction> samples;
  for (int k = 0; k < 20; ++k) samples.push_back(ctx.random_function(k % 4 == 3 ? Shape{2, 2} : Shape{1, 1}));
  std::vector<Complex> ts;
  for (int k = 0; k < 10; ++k) ts.push_back(random_in_disk(ctx.rng, 0.8));

  g.tolerance("z^(0..10) are DA", 1.0, [&] {
    double worst = 0.0;
    for (int n = 0; n <= std::min(10, int(basis.size()) - 1); ++n) worst = std::max(worst, relative_cr(basis[std::size_t(n)]));
    return Measured{worst, ""};
  });
  g.tolerance("e_t is DA", 1.0, [&] {
    double worst = 0.0;
    for (auto t : ts) worst = std::max(worst, relative_cr(exp_basis(ctx.lattice, t, ctx.exec)));
    return Measured{worst, "10 random |t| <= 0.8"};
  });
  g.tolerance("primitive of a DA function is DA", 1.0, [&] {
    double worst = 0.0;
    for (const auto& f : samples) worst = std::max(worst, relative_cr(primitive(f, ctx.exec)));
    return Measured{worst, ""};
  });
  g.tolerance("Z- Z+ f = f", 1.0, [&] {
    double worst = 0.0;
    for (const auto& f : samples) worst = std::max(worst, rel_diff(backward_shift(forward_shift(f, tol, ctx.exec), tol), f));
    return Measured{worst, "20 random f in span z^(0..N)"};
  });
  g.tolerance("Z+ Z- f = f - f(0)", 1.0, [&] {
    double worst = 0.0;
    for (const auto& f : samples) {
      const auto lhs = forward_shift(backward_shift(f, tol), tol, ctx.exec);
      const auto rhs = f - DAFunction::constant(ctx.lattice, f.at(ctx.origin()));
      worst = std::max(worst, rel_diff(lhs, rhs));
    }
    return Measured{worst, ""};
  });
  g.tolerance("Z- e_t = t e_t", 1.0, [&] {
    double worst = 0.0;
    for (auto t : ts) {
      const auto e = exp_basis(ctx.lattice, t, ctx.exec);
      worst = std::max(worst, rel_diff(backward_shift(e, tol), e * t));
    }
    return Measured{worst, ""};
  });

  // Three simple paths from the origin to every other vertex.
  std::vector<std::vector<Path>> paths(lat.vertex_count());
  std::size_t shortage = 0;
  for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
    if (v == ctx.origin()) continue;
    paths[v] = oracles::distinct_paths(lat, ctx.origin(), v, 3);
    if (paths[v].size() < 3) ++shortage;
  }
  g.exact("three distinct paths per vertex", [&] { return Measured{double(shortage), ""}; });
  g.tolerance("integral is path independent", 1.0, [&] {
    double worst = 0.0;
    for (const auto& f : samples) {
      for (const auto& ps : paths) {
        for (std::size_t k = 1; k < ps.size(); ++k) {
          worst = std::max(worst, rel_diff(discrete_integral(f, ps[k]), discrete_integral(f, ps[0])));
        }
      }
    }
    return Measured{worst, ""};
  });
  g.tolerance("e_t product is path independent", 1.0, [&] {
    double worst = 0.0;
    for (auto t : ts) {
      const auto e = exp_basis(ctx.lattice, t, ctx.exec);
      for (std::size_t v = 0; v < paths.size(); ++v) {
        for (const auto& p : paths[v]) {
          worst = std::max(worst, rel_diff(scalar_matrix(exp_along(lat, t, p)), e.at(v)));
        }
      }
    }
    return Measured{worst, ""};
  });
  g.tolerance("z^(n) match Taylor coefficients of e_t (n <= 12)", 1.0, [&] {
    const int N = std::min(12, int(basis.size()) - 1);
    double worst = 0.0;
    for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
      const auto coeffs = oracles::exp_taylor_along(lat, find_path(lat, ctx.origin(), v), N);
      for (int n = 0; n <= N; ++n) {
        worst = std::max(worst, relative(std::abs(coeffs[std::size_t(n)] - basis[std::size_t(n)].scalar_at(v)),
                                         std::abs(coeffs[std::size_t(n)])));
      }
    }
    return Measured{worst, ""};
  });
  g.tolerance("z^(1) = z", 1e-3, [&] {
    double worst = 0.0;
    for (std::size_t v = 0; v < lat.vertex_count(); ++v) worst = std::max(worst, std::abs(basis[1].scalar_at(v) - lat.coord(v)));
    return Measured{worst, ""};
  });
  g.exact("z^(0..N) linearly independent", [&] {
    const int N = std::min(ctx.config.N, 8);
    std::vector<DAFunction> fs(basis.begin(), basis.begin() + N + 1);
    const int r = numerical_rank(value_matrix(fs), 1e-10);
    return Measured{double(std::abs(r - (N + 1))), "rank " + std::to_string(r) + " of " + std::to_string(N + 1)};
  });
  g.tolerance("sum t^n z^(n) = e_t at t = 0.5", 10.0, [&] {
    std::vector<CMatrix> acc(lat.vertex_count(), CMatrix::Zero(1, 1));
    double power = 1.0;
    for (const auto& zn : basis) {
      for (std::size_t v = 0; v < acc.size(); ++v) acc[v](0, 0) += power * zn.scalar_at(v);
      power *= 0.5;
    }
    const DAFunction partial(ctx.lattice, {1, 1}, std::move(acc));
    return Measured{rel_diff(partial, exp_basis(ctx.lattice, 0.5, ctx.exec)),
                    "truncation " + std::to_string(basis.size() - 1)};
  });
  g.tolerance("z^(m) . z^(n) = z^(m+n)", 1.0, [&] {
    double worst = 0.0;
    for (int m = 0; m <= 10; ++m) {
      for (int n = 0; m + n <= 10; ++n) {
        const auto p = convolve_poly(DAPolynomial::monomial(m), DAPolynomial::monomial(n));
        worst = std::max(worst, rel_diff(apply_poly(DAPolynomial::monomial(m), basis[std::size_t(n)], tol, ctx.exec),
                                         basis[std::size_t(m + n)]));
        worst = std::max(worst, rel_diff(to_function(p, ctx.lattice, ctx.exec), basis[std::size_t(m + n)]));
      }
    }
    return Measured{worst, ""};
  });
  g.exact("Duffin basis spans the same space", [&] {
    int bad = 0;
    std::string detail;
    const auto duffin = duffin_basis(ctx.lattice, 6, ctx.exec);
    for (int N = 0; N <= 6; ++N) {
      std::vector<DAFunction> fs(duffin.begin(), duffin.begin() + N + 1);
      const int alone = numerical_rank(value_matrix(fs), 1e-10);
      fs.insert(fs.end(), basis.begin(), basis.begin() + N + 1);
      const int both = numerical_rank(value_matrix(fs), 1e-10);
      if (alone != N + 1 || both != N + 1) {
        ++bad;
        detail += "N=" + std::to_string(N) + " ranks " + std::to_string(alone) + "/" + std::to_string(both) + " ";
      }
    }
    return Measured{double(bad), detail};
  });
}

void realization_group(Context& ctx, VerifyReport& report) {
  Group g(report, "realization", ctx.config.tol);
  const auto& lat = ctx.lat();
  const auto& dirs = lat.directions();
  const auto& tol = ctx.config.tol;

  std::vector<Realization> samples;
  for (int k = 0; k < 5; ++k) {
    const Index io = k % 2 == 0 ? 1 : 2;
    samples.push_back(random_realization(ctx.rng, 1 + k % 3, io, io));
  }
  std::vector<Complex> ts;
  for (int k = 0; k < 20; ++k) ts.push_back(random_in_disk(ctx.rng, 0.5));

  g.tolerance("realization evaluations are DA", 1.0, [&] {
    double worst = 0.0;
    for (const auto& r : samples) worst = std::max(worst, relative_cr(evaluate(r, ctx.lattice, ctx.exec)));
    return Measured{worst, ""};
  });
  g.tolerance("R - Z+(R) A = I", 1.0, [&] {
    double worst = 0.0;
    for (const auto& r : samples) {
      const auto R = resolvent(r.A, ctx.lattice, ctx.exec);
      const auto lhs = R - forward_shift(R, tol, ctx.exec).right_multiply(r.A);
      worst = std::max(worst, rel_diff(lhs, DAFunction::constant(ctx.lattice, CMatrix::Identity(r.A.rows(), r.A.rows()))));
    }
    return Measured{worst, ""};
  });
  g.tolerance("scalar resolvent equals e_a", 1.0, [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const Complex a = random_in_disk(ctx.rng, 0.9);
      worst = std::max(worst, rel_diff(resolvent(scalar_matrix(a), ctx.lattice, ctx.exec), exp_basis(ctx.lattice, a, ctx.exec)));
    }
    return Measured{worst, "10 random |a| <= 0.9"};
  });
  g.tolerance("tau(sum) = tau + tau", 0.1, [&] {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
      if (samples[k].shape() != samples[k + 1].shape()) continue;
      const auto s = sum(samples[k], samples[k + 1]);
      for (auto t : ts) worst = std::max(worst, rel_diff(tau_eval(s, t), tau_eval(samples[k], t) + tau_eval(samples[k + 1], t)));
    }
    for (const auto& r : samples) {
      for (auto t : ts) worst = std::max(worst, rel_diff(tau_eval(sum(r, r), t), 2.0 * tau_eval(r, t)));
    }
    return Measured{worst, "20 random |t| <= 0.5"};
  });
  g.tolerance("tau(product) = tau . tau", 0.1, [&] {
    double worst = 0.0;
    for (std::size_t a = 0; a < samples.size(); ++a) {
      for (std::size_t b = 0; b < samples.size(); ++b) {
        if (samples[a].shape().cols != samples[b].shape().rows) continue;
        const auto p = product(samples[a], samples[b]);
        for (auto t : ts) worst = std::max(worst, rel_diff(tau_eval(p, t), tau_eval(samples[a], t) * tau_eval(samples[b], t)));
      }
    }
    return Measured{worst, ""};
  });
  g.tolerance("tau_markov of tau_inverse matches Taylor coefficients", 1.0, [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      std::vector<Complex> den{1.0};
      for (int j = 0; j < 1 + k % 3; ++j) den = oracles::series_mul(den, {1.0, -random_in_disk(ctx.rng, 0.7)}, int(den.size()));
      std::vector<Complex> num;
      for (int j = 0; j <= k % 4; ++j) num.push_back(Complex(uniform(ctx.rng, -1, 1), uniform(ctx.rng, -1, 1)));
      const auto markov = tau_markov(tau_inverse({num, den}, dirs), 20);
      const auto taylor = oracles::rational_taylor(num, den, 20);
      double scale = 0.0;
      for (auto c : taylor) scale = std::max(scale, std::abs(c));
      for (int n = 0; n <= 20; ++n) {
        worst = std::max(worst, relative(std::abs(markov[std::size_t(n)](0, 0) - taylor[std::size_t(n)]), scale));
      }
    }
    return Measured{worst, "order 20"};
  });
  g.exact("tau_inverse rejects denominators vanishing on the pole set", [&] {
    int accepted = 0;
    for (auto p : dirs.poles) {
      const std::vector<Complex> den = p == 0.0 ? std::vector<Complex>{0.0, 1.0} : std::vector<Complex>{1.0, -1.0 / p};
      try {
        tau_inverse({{1.0}, den}, dirs);
        ++accepted;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotRealizable) ++accepted;
      }
    }
    return Measured{double(accepted), std::to_string(dirs.poles.size()) + " pole-set points"};
  });
  g.tolerance("f . f^{-1} = I", 10.0, [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Index m = 1 + k % 2;
      const auto r = random_invertible(ctx.rng, 1 + k % 3, m);
      const auto ri = inverse(r, dirs);
      const auto I = DAFunction::constant(ctx.lattice, CMatrix::Identity(m, m));
      worst = std::max(worst, rel_diff(evaluate(product(r, ri), ctx.lattice, ctx.exec), I));
      worst = std::max(worst, rel_diff(evaluate(product(ri, r), ctx.lattice, ctx.exec), I));
    }
    return Measured{worst, ""};
  });
  g.tolerance("sum z^(n) A^n = resolvent for rho(A) <= 0.5", 10.0, [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const CMatrix A = random_with_norm(ctx.rng, 2 + k % 2, 2 + k % 2, 0.5);
      if (spectral_radius_estimate(A) > 0.5 + 1e-9) return Measured{kNaN, "spectral radius above 0.5"};
      const auto R = resolvent(A, ctx.lattice, ctx.exec);
      for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
        worst = std::max(worst, rel_diff(oracles::resolvent_series(ctx.basis, A, v), R.at(v)));
      }
    }
    return Measured{worst, "truncation " + std::to_string(ctx.basis.size() - 1)};
  });
  g.tolerance("tau_markov agrees with Z- chain at the origin", 1.0, [&] {
    double worst = 0.0;
    int depth = 0;
    for (const auto& r : samples) {
      const auto markov = tau_markov(r, 6);
      auto f = evaluate(r, ctx.lattice, ctx.exec);
      worst = std::max(worst, rel_diff(f.at(ctx.origin()), markov[0]));
      for (int k = 1; k <= 6; ++k) {
        f = backward_shift(f, tol);
        if (!f.defined(ctx.origin())) break;
        depth = std::max(depth, k);
        worst = std::max(worst, rel_diff(f.at(ctx.origin()), markov[std::size_t(k)]));
      }
    }
    return Measured{worst, "depth " + std::to_string(depth)};
  });
  g.tolerance("Ho-Kalman reproduces Markov parameters", 10.0, [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Index io = 1 + k % 2;
      const auto r = random_realization(ctx.rng, 2, io, io);
      const auto markov = tau_markov(r, 12);
      const auto h = minimal_realization(markov, 1e-9);
      if (h.state_dim() > 2) return Measured{kNaN, "state dimension " + std::to_string(h.state_dim())};
      const auto again = tau_markov(h, 12);
      for (std::size_t n = 0; n < markov.size(); ++n) worst = std::max(worst, rel_diff(again[n], markov[n]));
    }
    return Measured{worst, ""};
  });
}

void rational_group(Context& ctx, VerifyReport& report) {
  Group g(report, "rational", ctx.config.tol);
  const auto& lat = ctx.lat();
  const double M = 2.0;

  g.tolerance("K_0 = 1", 1e-3, [&] {
    const auto K = kernel(ctx.lattice, ctx.origin(), M, ctx.exec);
    return Measured{max_difference(K.values, DAFunction::constant(ctx.lattice, scalar_matrix(1.0))), ""};
  });
  g.tolerance("K_w(0) = 1", 1.0, [&] {
    double worst = 0.0;
    for (std::size_t w = 0; w < lat.vertex_count(); ++w) {
      worst = std::max(worst, std::abs(kernel(ctx.lattice, w, M, ctx.exec).values.scalar_at(ctx.origin()) - 1.0));
    }
    return Measured{worst, ""};
  });
  if (const auto one = vertex_at(lat, 1.0)) {
    g.tolerance("K_1(1) = 1.5 at M = 2", 0.1, [&] {
      return Measured{std::abs(kernel(ctx.lattice, *one, M, ctx.exec).values.scalar_at(*one) - 1.5), ""};
    });
  }
  g.tolerance("kernel matches truncated series", 10.0, [&] {
    double worst = 0.0;
    for (std::size_t w = 0; w < lat.vertex_count(); ++w) {
      worst = std::max(worst, rel_diff(kernel(ctx.lattice, w, M, ctx.exec).values, oracles::kernel_series(ctx.basis, w, M)));
    }
    return Measured{worst, "M = 2, truncation " + std::to_string(ctx.basis.size() - 1)};
  });

  std::vector<GramSpectrum> grams;
  for (int k = 0; k < 6; ++k) {
    std::vector<std::size_t> all(lat.vertex_count());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    std::shuffle(all.begin(), all.end(), ctx.rng);
    all.resize(std::min<std::size_t>(all.size(), 3 + std::size_t(k)));
    grams.push_back(gram_spectrum(gram_matrix(ctx.lattice, all, M, ctx.exec)));
  }
  g.tolerance("Gram matrices are Hermitian", 1.0, [&] {
    double worst = 0.0;
    for (const auto& s : grams) worst = std::max(worst, relative(s.hermitian_defect, s.norm));
    return Measured{worst, ""};
  });
  g.tolerance("Gram matrices are positive semidefinite", 10.0, [&] {
    double worst = 0.0;
    for (const auto& s : grams) worst = std::max(worst, std::max(0.0, -s.min_eigenvalue) / s.norm);
    return Measured{worst, "-min eigenvalue / norm over 6 subsets"};
  });

  std::vector<RationalDA> samples;
  for (int k = 0; k < 5; ++k) {
    const Index io = k % 2 == 0 ? 1 : 2;
    samples.push_back(RationalDA::from(random_realization(ctx.rng, 1 + k % 3, io, io), ctx.lattice, ctx.exec));
  }
  g.tolerance("quotient certificate residual", 10.0, [&] {
    double worst = 0.0;
    std::string detail;
    for (const auto& f : samples) {
      const auto cert = quotient_certificate(f, ctx.exec);
      worst = std::max(worst, relative(cert.residual, max_magnitude(f.values)));
      if (!cert.pole_free) detail = "denominator meets the pole set";
    }
    return Measured{detail.empty() ? worst : kNaN, detail};
  });
  g.exact("shift rank <= l + 1", [&] {
    int bad = 0;
    std::string detail;
    for (const auto& f : samples) {
      const auto l = int(f.realization.state_dim());
      const int r = shift_rank(f.values, l + 3, ctx.config.tol);
      detail += std::to_string(r) + "/" + std::to_string(l + 1) + " ";
      if (r > l + 1) ++bad;
    }
    return Measured{double(bad), "rank/bound " + detail};
  });
  g.exact("shift rank of e_0.3 is 1", [&] {
    const int r = shift_rank(exp_basis(ctx.lattice, 0.3, ctx.exec), 5, ctx.config.tol);
    return Measured{double(std::abs(r - 1)), "rank " + std::to_string(r)};
  });
}

ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

ordered_json VerifyReport::to_json() const {
  ordered_json doc;
  doc["lattice"] = config.lattice_file.string();
  doc["lattice_hash"] = lattice_hash;
  doc["config"] = {{"tol_rel", config.tol.rel}, {"tol_abs", config.tol.abs}, {"N", config.N},
                   {"N_tr", config.N_tr}, {"seed", config.seed},
                   {"groups", config.groups.empty() ? kVerifyGroups : config.groups}};
  auto props = ordered_json::array();
  std::size_t failed = 0;
  for (const auto& r : results) {
    props.push_back({{"group", r.group}, {"name", r.name}, {"residual", number_or_null(r.residual)},
                     {"threshold", r.threshold}, {"passed", r.passed}, {"detail", r.detail}});
    if (!r.passed) ++failed;
  }
  doc["properties"] = std::move(props);
  doc["passed"] = results.size() - failed;
  doc["failed"] = failed;
  doc["ok"] = failed == 0;
  return doc;
}

std::string VerifyReport::summary() const {
  std::ostringstream out;
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.group << ": " << r.name << "  residual=" << r.residual
        << " threshold=" << r.threshold;
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << "\n";
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << "/" << results.size() << " properties passed\n";
  return out.str();
}

void check_config(const VerifyConfig& config) {
  if (!(config.tol.rel > 0.0) || !(config.tol.abs >= 0.0)) fail(ErrorCode::InvalidParameter, "tolerance must be positive");
  if (config.N < 1) fail(ErrorCode::InvalidParameter, "N must be at least 1");
  if (config.N_tr < 12) fail(ErrorCode::InvalidParameter, "N_tr must be at least 12");
  if (config.N > config.N_tr) fail(ErrorCode::InvalidParameter, "N must not exceed N_tr");
  for (const auto& g : config.groups) {
    if (std::find(kVerifyGroups.begin(), kVerifyGroups.end(), g) == kVerifyGroups.end()) {
      fail(ErrorCode::InvalidParameter, "unknown property group " + g);
    }
  }
}

VerifyReport run_verify(const VerifyConfig& config, Exec exec) {
  check_config(config);
  auto lattice = std::make_shared<const Lattice>(load_lattice(config.lattice_file));
  return run_verify(lattice, config, exec);
}

VerifyReport run_verify(const LatticePtr& lattice, const VerifyConfig& config, Exec exec) {
  check_config(config);
  VerifyReport report{config, lattice_hash(*lattice), {}};
  Context ctx{lattice, config, exec, Rng(config.seed), monomial_basis(lattice, config.N_tr, exec)};
  auto enabled = [&](const char* name) {
    return config.groups.empty() || std::find(config.groups.begin(), config.groups.end(), name) != config.groups.end();
  };
  // Every group draws from the same stream in a fixed order.
  if (enabled("lattice")) lattice_group(ctx, report);
  if (enabled("calculus")) calculus_group(ctx, report);
  if (enabled("realization")) realization_group(ctx, report);
  if (enabled("rational")) rational_group(ctx, report);
  return report;
}

}  // namespace dalat
