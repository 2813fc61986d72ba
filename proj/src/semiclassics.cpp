#include "magtrace/semiclassics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "magtrace/quadrature.hpp"
#include "magtrace/quantize.hpp"

namespace magtrace {

namespace {

double radial_cd(int d) { return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d); }

// int_0^umax f(u) u^{d/2-1} du; the d=1 endpoint singularity is removed by u = r^2.
// Composite panels: f is typically a high derivative of a bump profile, sharply
// peaked near the support edge, and a single Gauss rule under-resolves it badly.
constexpr int kRadialPanels = 6;

double radial_u_integral(const std::function<double(double)>& f, double umax, int d, int ngl) {
  if (umax <= 0.0) return 0.0;
  if (d == 1)
    return 2.0 * gauss_integrate_composite([&](double r) { return f(r * r); }, 0.0,
                                           std::sqrt(umax), ngl, kRadialPanels);
  return gauss_integrate_composite(f, 0.0, umax, ngl, kRadialPanels);
}

// trapezoid over [-L, L]^d with a boundary-leak check on the integrand
double x_box_integral(const std::function<double(const Vec&)>& w, int d, const QuadSpec& q,
                      Execution exec) {
  int n = q.nx;
  double h = 2.0 * q.L / (n - 1);
  long total = (d == 1) ? n : (long)n * n;
  std::vector<double> vals(total);
  auto point = [&](long idx) {
    Vec x{0.0, 0.0};
    if (d == 1) {
      x[0] = -q.L + h * idx;
    } else {
      x[0] = -q.L + h * (idx / n);
      x[1] = -q.L + h * (idx % n);
    }
    return x;
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) vals[i] = w(point(i));
  } else {
    for (long i = 0; i < total; ++i) vals[i] = w(point(i));
  }

  double sum = 0.0, vmax = 0.0, bmax = 0.0;
  for (long i = 0; i < total; ++i) {
    double tw = 1.0;
    bool boundary = false;
    if (d == 1) {
      if (i == 0 || i == n - 1) {
        tw = 0.5;
        boundary = true;
      }
    } else {
      int i0 = (int)(i / n), i1 = (int)(i % n);
      if (i0 == 0 || i0 == n - 1) {
        tw *= 0.5;
        boundary = true;
      }
      if (i1 == 0 || i1 == n - 1) {
        tw *= 0.5;
        boundary = true;
      }
    }
    sum += tw * vals[i];
    vmax = std::max(vmax, std::abs(vals[i]));
    if (boundary) bmax = std::max(bmax, std::abs(vals[i]));
  }
  if (bmax > 1e-12 * std::max(vmax, 1e-300))
    throw std::runtime_error("quadrature box too small: integrand nonzero at the boundary");
  return sum * std::pow(h, d);
}

}  // namespace

double T0(const TestFunction& g, const ScalarPotential& V, const QuadSpec& quad, Execution exec) {
  if (g.support_hi() >= V.sigma_inf)
    throw std::runtime_error("T0: test function support reaches Sigma_V");
  double cd = radial_cd(V.d);
  double hi = g.support_hi();
  return cd * x_box_integral(
                  [&](const Vec& x) {
                    double v = V(x);
                    return radial_u_integral([&](double u) { return g(u + v); }, hi - v, V.d,
                                             quad.ngl);
                  },
                  V.d, quad, exec);
}

double T2(const TestFunction& g, const ScalarPotential& V, const MagneticField& B,
          const QuadSpec& quad, Execution exec) {
  if (g.support_hi() >= V.sigma_inf)
    throw std::runtime_error("T2: test function support reaches Sigma_V");
  double cd = radial_cd(V.d);
  double hi = g.support_hi();
  return -cd / 12.0 *
         x_box_integral(
             [&](const Vec& x) {
               double v = V(x);
               double pre = V.laplacian(x) + norm_sq(B, x);
               if (pre == 0.0) return 0.0;
               return pre * radial_u_integral([&](double u) { return g.deriv(u + v, 2); },
                                              hi - v, V.d, quad.ngl);
             },
             V.d, quad, exec);
}

double phase_space_integral(const std::function<double(const Vec&, const Vec&)>& f, int d,
                            const QuadSpec& quad, double xi_max, Execution exec) {
  const GaussRule& r = gauss_legendre(quad.ngl);
  // xi quadrature per x-point, tensorized
  auto xi_int = [&](const Vec& x) {
    double s = 0.0;
    if (d == 1) {
      for (int a = 0; a < quad.ngl; ++a)
        s += xi_max * r.weights[a] * f(x, Vec{xi_max * r.nodes[a], 0.0});
    } else {
      for (int a = 0; a < quad.ngl; ++a)
        for (int b = 0; b < quad.ngl; ++b)
          s += xi_max * xi_max * r.weights[a] * r.weights[b] * f(x, Vec{xi_max * r.nodes[a], xi_max * r.nodes[b]});
    }
    return s;
  };
  return x_box_integral(xi_int, d, quad, exec);
}

double T2_hr(const TestFunction& g, const ScalarPotential& V, const QuadSpec& quad,
             Execution exec) {
  PolySymbol F = hamiltonian_symbol(V);
  int d = V.d;
  // precompute the second-derivative symbols once; evaluating them per node is
  // far cheaper than re-deriving inside the integrand
  std::vector<PolySymbol> Fxixi(d * d), Fxx(d * d), Fxxi(d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      MultiIndex ej = MultiIndex::unit(d, j), ek = MultiIndex::unit(d, k);
      Fxixi[j * d + k] = F.dxi(ej + ek);
      Fxx[j * d + k] = F.dx(ej + ek);
      Fxxi[j * d + k] = F.dx(ej).dxi(ek);
    }
  auto integrand = [&](const Vec& x, const Vec& xi) {
    double f0 = F.evaluate(x, xi);
    double g2 = g.deriv(f0, 2);
    if (g2 == 0.0) return 0.0;
    double contr = 0.0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        contr += Fxixi[j * d + k].evaluate(x, xi) * Fxx[j * d + k].evaluate(x, xi) -
                 Fxxi[j * d + k].evaluate(x, xi) * Fxxi[k * d + j].evaluate(x, xi);
    return g2 * contr;
  };

  // The xi-support at each x is the ball |xi|^2 <= supp_hi(g) - V(x), which
  // shrinks as V grows; a fixed global xi grid cannot resolve the sharply
  // peaked g'' there, so integrate per x over the exact ball, composite-graded
  // in the radial direction.
  double hi = g.support_hi();
  auto xi_int = [&](const Vec& x) {
    double rmax = std::sqrt(std::max(hi - V(x), 0.0));
    if (rmax == 0.0) return 0.0;
    if (d == 1)  // the interval spans both edge spikes, so double the panels
      return gauss_integrate_composite([&](double xi) { return integrand(x, Vec{xi, 0.0}); },
                                       -rmax, rmax, quad.ngl, 2 * kRadialPanels);
    const GaussRule& rt = gauss_legendre(8);  // angular rule
    double s = 0.0;
    for (int a = 0; a < 8; ++a) {
      double th = M_PI * (rt.nodes[a] + 1.0);  // [0, 2pi]
      double c = std::cos(th), sn = std::sin(th);
      s += M_PI * rt.weights[a] *
           gauss_integrate_composite(
               [&](double r) { return r * integrand(x, Vec{r * c, r * sn}); }, 0.0, rmax,
               quad.ngl, kRadialPanels);
    }
    return s;
  };
  return -x_box_integral(xi_int, d, quad, exec) / 24.0;
}

GridSpec resolve_grid(const GridPolicy& pol, int d, double hbar, double E_cap,
                      const ScalarPotential& V) {
  GridSpec grid;
  grid.d = d;
  grid.L = pol.L;
  grid.stencil_order = pol.stencil_order;
  if (pol.N > 0) {
    grid.N = pol.N;
  } else {
    double pmax = std::sqrt(std::max(E_cap + V.lower_bound, 1e-12));
    double h_target = hbar / (pol.resolve_factor * pmax);
    int N = (int)std::ceil(2.0 * pol.L / h_target) + 1;
    grid.N = std::clamp(N, 64, pol.max_N);
  }
  return grid;
}

SweepTable hbar_sweep(const ScalarPotential& V, const VectorPotential& A, const TestFunction& g,
                      const std::vector<double>& hbar_list, double E_cap, const GridPolicy& pol,
                      Execution exec) {
  SweepTable table;
  table.rows.resize(hbar_list.size());
  auto run_row = [&](size_t i, Execution inner) {
    SweepRow& row = table.rows[i];
    row.hbar = hbar_list[i];
    try {
      GridSpec grid = resolve_grid(pol, V.d, row.hbar, E_cap, V);
      row.grid_N = grid.N;
      if (g.support_hi() > E_cap)
        throw std::runtime_error("hbar_sweep: test function support exceeds E_cap");
      if (V.d == 1 && is_zero_gauge(A)) {
        // band storage avoids the dense matrix for the large 1D grids
        double pmax = std::sqrt(std::max(E_cap + V.lower_bound, 1e-12));
        row.resolution_warning = grid.hx() > 0.5 * row.hbar / pmax;
        std::vector<double> evals = eigensolve_banded(build_hamiltonian_banded(V, row.hbar, grid));
        double tr = 0.0;
        for (double e : evals) {
          tr += g(e);
          if (std::abs(e - E_cap) < 1e-6) row.cap_flag = true;
        }
        row.value = 2.0 * M_PI * row.hbar * tr;
      } else {
        MagneticOperatorMatrix H = build_hamiltonian(V, A, row.hbar, grid, E_cap, inner);
        row.resolution_warning = H.resolution_warning;
        SpectralData s = eigensolve(H, E_cap);
        row.cap_flag = s.cap_boundary_flag;
        row.value = std::pow(2.0 * M_PI * row.hbar, V.d) * trace_g(s, g);
      }
    } catch (const std::exception& e) {
      row.failed = true;
      std::cerr << "sweep row hbar=" << row.hbar << " failed: " << e.what() << "\n";
    }
  };
  if (exec == Execution::parallel) {
    // rows are independent; keep the per-row kernels serial inside the row loop
#pragma omp parallel for schedule(dynamic, 1)
    for (size_t i = 0; i < hbar_list.size(); ++i) run_row(i, Execution::serial);
  } else {
    for (size_t i = 0; i < hbar_list.size(); ++i) run_row(i, Execution::serial);
  }
  return table;
}

FitResult fit_expansion(const SweepTable& table, int J, bool even_only) {
  std::vector<const SweepRow*> rows;
  for (const auto& r : table.rows)
    if (!r.failed) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow* a, const SweepRow* b) { return a->hbar > b->hbar; });

  std::vector<int> powers;
  for (int j = 0; j <= J; ++j)
    if (!even_only || j % 2 == 0) powers.push_back(j);

  FitResult fit;
  if ((int)rows.size() < (int)powers.size() + 1)
    throw std::runtime_error("fit_expansion: need at least J+2 usable rows");

  size_t drop = 0;
  Eigen::VectorXd sol;
  while (true) {
    int m = (int)(rows.size() - drop);
    int p = (int)powers.size();
    Eigen::MatrixXd A(m, p);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      double hb = rows[drop + i]->hbar;
      for (int j = 0; j < p; ++j) A(i, j) = std::pow(hb, powers[j]);
      b(i) = rows[drop + i]->value;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    fit.cond = svd.singularValues()(0) / svd.singularValues()(p - 1);
    sol = svd.solve(b);
    fit.residual = (A * sol - b).norm();
    fit.rows_used = m;
    if (fit.cond <= 1e10 || m <= p + 1) break;
    // ill-conditioned: drop the largest-hbar row and retry
    fit.cond_warning = true;
    ++drop;
  }

  fit.coeffs.assign(J + 1, 0.0);
  for (size_t j = 0; j < powers.size(); ++j) fit.coeffs[powers[j]] = sol(j);

  // empirical remainder order of |value - T0 - hbar^2 T2|
  double t0 = fit.coeffs[0];
  double t2 = J >= 2 ? fit.coeffs[2] : 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto* r : rows) {
    double rem = std::abs(r->value - t0 - r->hbar * r->hbar * t2);
    if (rem < 1e-14) continue;
    double x = std::log(r->hbar), y = std::log(rem);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  if (m >= 2) fit.remainder_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

AgmonReport agmon_compare(const ScalarPotential& V, const VectorPotential& A, double E,
                          const TestFunction& g, const std::vector<double>& hbar_list,
                          const GridPolicy& pol, double sigma_ceiling, Execution exec) {
  if (g.support_hi() > E)
    throw std::runtime_error("agmon_compare: supp g must stay below the cutoff energy E");
  ScalarPotential Vm = cutoff_modify(V, E, sigma_ceiling);
  bool banded = V.d == 1 && is_zero_gauge(A);
  AgmonReport rep;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (double hb : hbar_list) {
    GridSpec grid = resolve_grid(pol, V.d, hb, E, V);
    double t0, t1;
    if (banded) {
      auto tr = [&](const ScalarPotential& W) {
        double s = 0.0;
        for (double e : eigensolve_banded(build_hamiltonian_banded(W, hb, grid))) s += g(e);
        return s;
      };
      t0 = tr(V);
      t1 = tr(Vm);
    } else {
      t0 = trace_g(eigensolve(build_hamiltonian(V, A, hb, grid, 0.0, exec), 0.0), g);
      t1 = trace_g(eigensolve(build_hamiltonian(Vm, A, hb, grid, 0.0, exec), 0.0), g);
    }
    double delta = std::abs(t0 - t1);
    rep.rows.push_back({hb, t0, t1, delta});
    if (delta > 0.0) {
      double x = 1.0 / hb, y = std::log(delta);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++m;
    }
  }
  if (m >= 2) {
    double den = m * sxx - sx * sx;
    rep.slope = (m * sxy - sx * sy) / den;
    rep.intercept = (sy - rep.slope * sx) / m;
  }
  return rep;
}

}  // namespace magtrace
