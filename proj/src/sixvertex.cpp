#include "rcm/sixvertex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rcm/loops.hpp"

namespace rcm {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<uint64_t> block_states(int L, int m) {
  std::vector<uint64_t> states;
  for (uint64_t mask = 0; mask < (uint64_t(1) << L); ++mask)
    if (__builtin_popcountll(mask) == m) states.push_back(mask);
  return states;
}

// weight of the transition x -> xp summed over the two horizontal seeds
double transition_weight(int L, uint64_t x, uint64_t xp, double c) {
  double total = 0.0;
  for (int seed = 0; seed < 2; ++seed) {
    int h = seed;  // 1 = rightward
    int cs = 0;
    bool alive = true;
    for (int j = 0; j < L && alive; ++j) {
      int b = (x >> j) & 1;
      int t = (xp >> j) & 1;
      int in = b + (1 - t) + h;
      int needed = 2 - in;  // 1 if the right edge must point inward (left)
      if (needed < 0 || needed > 1) {
        alive = false;
        break;
      }
      if (b != t) ++cs;
      h = needed == 1 ? 0 : 1;
    }
    if (alive && h == seed) total += std::pow(c, cs);
  }
  return total;
}

}  // namespace

void TransferBlock::apply(const std::vector<double>& x, std::vector<double>& y) const {
  std::vector<std::complex<double>> xc(x.begin(), x.end()), yc;
  apply(xc, yc);
  y.resize(yc.size());
  for (size_t i = 0; i < yc.size(); ++i) y[i] = yc[i].real();
}

void TransferBlock::apply(const std::vector<std::complex<double>>& x,
                          std::vector<std::complex<double>>& y) const {
  int n = dim();
  y.assign(n, 0.0);
  if (!dense.empty()) {
    for (int row = 0; row < n; ++row) {
      std::complex<double> acc = 0.0;
      const double* r = &dense[static_cast<size_t>(row) * n];
      for (int col = 0; col < n; ++col) acc += r[col] * x[col];
      y[row] = acc;
    }
    return;
  }
  // matrix-free: depth-first completion of the horizontal arrows pushes each
  // input state onto all reachable output states
  for (int col = 0; col < n; ++col) {
    if (x[col] == 0.0) continue;
    uint64_t from = states[col];
    struct Frame {
      int j;
      int h;
      uint64_t out;
      int cs;
      int ups;
    };
    for (int seed = 0; seed < 2; ++seed) {
      std::vector<Frame> stack;
      stack.push_back({0, seed, 0, 0, 0});
      while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.j == L) {
          if (f.h == seed && f.ups == m) {
            auto it = std::lower_bound(states.begin(), states.end(), f.out);
            int row = static_cast<int>(it - states.begin());
            y[row] += std::pow(c, f.cs) * x[col];
          }
          continue;
        }
        if (f.ups > m || f.ups + (L - f.j) < m) continue;
        int b = (from >> f.j) & 1;
        for (int t = 0; t < 2; ++t) {
          int in = b + (1 - t) + f.h;
          int needed = 2 - in;
          if (needed < 0 || needed > 1) continue;
          stack.push_back({f.j + 1, needed == 1 ? 0 : 1, f.out | (uint64_t(t) << f.j),
                           f.cs + (b != t ? 1 : 0), f.ups + t});
        }
      }
    }
  }
}

TransferBlock build_block(int L, int m, double c) {
  if (L < 2 || L % 2 != 0) throw std::invalid_argument("row width must be even and >= 2");
  if (m < 0 || m > L) throw std::invalid_argument("up-arrow count must lie in [0, L]");
  if (!(c > 0)) throw std::invalid_argument("vertex weight c must be positive");
  TransferBlock block;
  block.L = L;
  block.m = m;
  block.c = c;
  block.states = block_states(L, m);
  size_t n = block.states.size();
  if (n <= 5000) {
    block.dense.assign(n * n, 0.0);
    for (size_t row = 0; row < n; ++row)
      for (size_t col = 0; col < n; ++col)
        block.dense[row * n + col] =
            transition_weight(L, block.states[col], block.states[row], c);
  }
  return block;
}

std::vector<double> full_transfer_matrix(int L, double c) {
  if (L > 8) throw std::invalid_argument("full matrix limited to L <= 8");
  size_t n = size_t(1) << L;
  std::vector<double> v(n * n);
  for (size_t row = 0; row < n; ++row)
    for (size_t col = 0; col < n; ++col) v[row * n + col] = transition_weight(L, col, row, c);
  return v;
}

PowerIterationResult leading_eigenvalue(const TransferBlock& block, double tol,
                                        int max_iterations) {
  int n = block.dim();
  if (n == 0) throw std::invalid_argument("empty block");
  std::vector<double> x(n, 1.0 / std::sqrt(double(n))), y;
  double lambda = 0.0, prev = -1.0;
  int it = 0;
  bool converged = false;
  for (; it < max_iterations && !converged; ++it) {
    block.apply(x, y);
    double rq = 0.0;
    for (int i = 0; i < n; ++i) rq += x[i] * y[i];
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::runtime_error("transfer block annihilated the iterate");
    for (auto& v : y) v /= norm;
    for (double v : y)
      if (v < -1e-9) throw std::runtime_error("power iterate lost positivity");
    lambda = rq;
    if (it > 0 && std::abs(lambda - prev) <= tol * std::abs(lambda)) converged = true;
    prev = lambda;
    x.swap(y);
  }
  if (!converged)
    throw std::runtime_error("power iteration did not converge; last gap estimate " +
                             std::to_string(std::abs(lambda - prev)));
  PowerIterationResult res;
  res.eigenvalue = lambda;
  res.eigenvector = x;
  res.iterations = it;
  return res;
}

double trace_power(const TransferBlock& block, int M) {
  if (block.dense.empty()) throw std::invalid_argument("trace needs a dense block");
  size_t n = block.dim();
  std::vector<double> a = block.dense, b(n * n);
  for (int step = 1; step < M; ++step) {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        double acc = 0;
        for (size_t k = 0; k < n; ++k) acc += a[i * n + k] * block.dense[k * n + j];
        b[i * n + j] = acc;
      }
    a.swap(b);
  }
  double tr = 0;
  for (size_t i = 0; i < n; ++i) tr += a[i * n + i];
  return tr;
}

TraceCheckReport trace_power_check(int L, int M, int k, double c) {
  TraceCheckReport rep;
  rep.L = L;
  rep.M = M;
  rep.k = k;
  rep.c = c;
  int m = L / 2 + k;
  if (m < 0 || m > L) throw std::invalid_argument("sector out of range");
  double z = 0.0;
  enumerate_arrow_configs(L, M, [&](const ArrowConfig& arrows) {
    if (arrows.row_up_counts()[0] != m) return;
    z += six_vertex_weight(arrows, c);
  });
  rep.z_sector = z;
  TransferBlock block = build_block(L, m, c);
  rep.trace = trace_power(block, M);
  rep.relative_error = std::abs(rep.z_sector - rep.trace) / std::max(1.0, std::abs(rep.trace));
  return rep;
}

// --- the angle function -------------------------------------------------------------

double domain_margin(double delta) {
  if (delta >= 1.0) throw std::invalid_argument("delta must be < 1");
  return delta >= -1.0 ? std::acos(-delta) : 0.0;
}

namespace {

std::complex<double> theta_core(double x, double y, double delta, double t) {
  return std::exp(std::complex<double>(0, -t * x)) +
         std::exp(std::complex<double>(0, t * y)) - 2.0 * delta;
}

double unwrap_arg(double x, double y, double delta, double t0, double t1,
                  const std::complex<double>& n0, const std::complex<double>& n1, int depth) {
  double d = std::arg(n1 / n0);
  if (std::abs(d) <= 0.5) return d;
  if (depth > 60) throw std::runtime_error("angle unwrapping failed to converge");
  double tm = 0.5 * (t0 + t1);
  std::complex<double> nm = theta_core(x, y, delta, tm);
  return unwrap_arg(x, y, delta, t0, tm, n0, nm, depth + 1) +
         unwrap_arg(x, y, delta, tm, t1, nm, n1, depth + 1);
}

}  // namespace

double theta(double x, double y, double delta) {
  if (delta == 0.0) return 0.0;  // the defining ratio is identically 1
  double mu = domain_margin(delta);
  double half = kPi - mu;
  if (!(x > -half && x < half && y > -half && y < half))
    throw std::invalid_argument("theta arguments outside the admissible interval");
  std::complex<double> n0 = theta_core(x, y, delta, 0.0);
  std::complex<double> n1 = theta_core(x, y, delta, 1.0);
  double arg_n = unwrap_arg(x, y, delta, 0.0, 1.0, n0, n1, 0);
  double th = -(x - y) - 2.0 * arg_n;
  std::complex<double> lhs = std::exp(std::complex<double>(0, -th));
  std::complex<double> rhs = std::exp(std::complex<double>(0, x - y)) * n1 / std::conj(n1);
  if (std::abs(lhs - rhs) > 1e-12)
    throw std::runtime_error("continuous angle branch lost the defining ratio");
  return th;
}

double theta_dx(double x, double y, double delta) {
  const double h = 1e-6;
  return (theta(x + h, y, delta) - theta(x - h, y, delta)) / (2 * h);
}

// --- root solving ------------------------------------------------------------------

BetheRoots solve_bethe(int L, int n, double delta, double tol, int max_iterations) {
  if (n < 1 || n > L / 2) throw std::invalid_argument("particle number must lie in [1, L/2]");
  BetheRoots out;
  out.n = n;
  out.delta = delta;
  double half = kPi - domain_margin(delta);
  double cap = half - 1e-9;
  std::vector<double> idx(n), p(n);
  for (int j = 0; j < n; ++j) idx[j] = (j + 1) - (n + 1) / 2.0;
  for (int j = 0; j < n; ++j) p[j] = 2 * kPi * idx[j] / L;

  auto residual_vec = [&](const std::vector<double>& pv) {
    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += theta(pv[j], pv[k], delta);
      f[j] = L * pv[j] - 2 * kPi * idx[j] + s;
    }
    return f;
  };
  auto clamp_sym = [&](std::vector<double>& pv) {
    for (int j = 0; j < n; ++j) pv[j] = std::clamp(pv[j], -cap, cap);
    for (int j = 0; j < n / 2; ++j) {
      double a = 0.5 * (pv[j] - pv[n - 1 - j]);
      pv[j] = a;
      pv[n - 1 - j] = -a;
    }
    if (n % 2 == 1) pv[n / 2] = 0.0;
  };

  double damping = 0.5;
  double res = 1e300;
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<double> f = residual_vec(p);
    res = 0;
    for (double v : f) res = std::max(res, std::abs(v));
    if (res < 1e-13 * L) break;
    for (int j = 0; j < n; ++j) p[j] -= damping * f[j] / L;
    clamp_sym(p);
  }

  for (int it = 0; it < 60 && res > 1e-14 * L; ++it) {
    std::vector<double> f = residual_vec(p);
    res = 0;
    for (double v : f) res = std::max(res, std::abs(v));
    if (res < 1e-14 * L) break;
    const double h = 1e-7;
    std::vector<double> jac(n * n);
    for (int kcol = 0; kcol < n; ++kcol) {
      std::vector<double> pp = p, pm = p;
      pp[kcol] = std::min(pp[kcol] + h, cap);
      pm[kcol] = std::max(pm[kcol] - h, -cap);
      auto fp = residual_vec(pp), fm = residual_vec(pm);
      for (int j = 0; j < n; ++j)
        jac[j * n + kcol] = (fp[j] - fm[j]) / (pp[kcol] - pm[kcol]);
    }
    std::vector<double> rhs = f;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (std::abs(jac[r * n + col]) > std::abs(jac[piv * n + col])) piv = r;
      for (int cc = 0; cc < n; ++cc) std::swap(jac[col * n + cc], jac[piv * n + cc]);
      std::swap(rhs[col], rhs[piv]);
      double d = jac[col * n + col];
      if (std::abs(d) < 1e-14) throw std::runtime_error("singular jacobian in root solve");
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        double factor = jac[r * n + col] / d;
        for (int cc = 0; cc < n; ++cc) jac[r * n + cc] -= factor * jac[col * n + cc];
        rhs[r] -= factor * rhs[col];
      }
    }
    for (int j = 0; j < n; ++j) p[j] -= rhs[j] / jac[j * n + j];
    clamp_sym(p);
  }

  std::vector<double> f = residual_vec(p);
  res = 0;
  for (double v : f) res = std::max(res, std::abs(v));
  out.roots = p;
  std::sort(out.roots.begin(), out.roots.end());
  out.residual = res;
  if (res > 1e-10)
    throw std::runtime_error("root equations did not converge; residual " +
                             std::to_string(res));
  for (int i = 0; i + 1 < n; ++i)
    if (std::abs(out.roots[i + 1] - out.roots[i]) < 1e-12)
      throw std::runtime_error("coinciding roots");
  (void)tol;
  return out;
}

// --- eigenvectors and eigenvalues ---------------------------------------------------

std::vector<std::complex<double>> bethe_vector(const BetheRoots& roots, int L) {
  int n = roots.n;
  if (n > 7) throw std::invalid_argument("eigenvector assembly limited to 7 particles");
  double delta = roots.delta;
  auto states = block_states(L, n);
  std::vector<std::complex<double>> psi(states.size(), 0.0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<std::vector<int>, int>> perms;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    perms.push_back({perm, inversions % 2 == 0 ? 1 : -1});
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::complex<double>> amp(perms.size());
  for (size_t s = 0; s < perms.size(); ++s) {
    const auto& sigma = perms[s].first;
    std::complex<double> a = double(perms[s].second);
    for (int kk = 0; kk < n; ++kk)
      for (int ll = kk + 1; ll < n; ++ll) {
        double pk = roots.roots[sigma[kk]], pl = roots.roots[sigma[ll]];
        a *= std::exp(std::complex<double>(0, pk)) *
             (std::exp(std::complex<double>(0, -pk)) +
              std::exp(std::complex<double>(0, pl)) - 2.0 * delta);
      }
    amp[s] = a;
  }
  for (size_t si = 0; si < states.size(); ++si) {
    std::vector<int> pos;
    for (int b = 0; b < L; ++b)
      if ((states[si] >> b) & 1) pos.push_back(b + 1);
    std::complex<double> acc = 0.0;
    for (size_t s = 0; s < perms.size(); ++s) {
      const auto& sigma = perms[s].first;
      std::complex<double> term = amp[s];
      for (int kk = 0; kk < n; ++kk)
        term *= std::exp(std::complex<double>(0, roots.roots[sigma[kk]] * pos[kk]));
      acc += term;
    }
    psi[si] = acc;
  }
  double norm = 0;
  for (const auto& v : psi) norm += std::norm(v);
  if (std::sqrt(norm) < 1e-10)
    throw std::runtime_error("root set produced a null eigenvector");
  return psi;
}

double bethe_eigenvalue(const BetheRoots& roots, double c, int L) {
  double delta = 1.0 - c * c / 2.0;
  if (std::abs(delta - roots.delta) > 1e-12)
    throw std::invalid_argument("weight c inconsistent with the root system");
  int n = roots.n;
  int zero_idx = -1;
  for (int j = 0; j < n; ++j)
    if (std::abs(roots.roots[j]) < 1e-9) zero_idx = j;
  auto lfun = [&](std::complex<double> z) { return 1.0 + c * c * z / (1.0 - z); };
  auto mfun = [&](std::complex<double> z) { return 1.0 - c * c / (1.0 - z); };
  std::complex<double> lam;
  if (zero_idx < 0) {
    std::complex<double> pl = 1.0, pm = 1.0;
    for (int j = 0; j < n; ++j) {
      std::complex<double> z = std::exp(std::complex<double>(0, roots.roots[j]));
      if (std::abs(z - 1.0) < 1e-12)
        throw std::runtime_error("root at the singular point z = 1");
      pl *= lfun(z);
      pm *= mfun(z);
    }
    lam = pl + pm;
  } else {
    double corr = 0;
    std::complex<double> pm = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == zero_idx) continue;
      corr += theta_dx(0.0, roots.roots[j], delta);
      pm *= mfun(std::exp(std::complex<double>(0, roots.roots[j])));
    }
    lam = (2.0 + c * c * (L - 1) + c * c * corr) * pm;
  }
  if (std::abs(lam.imag()) > 1e-10 * std::max(1.0, std::abs(lam.real())))
    throw std::runtime_error("eigenvalue acquired an imaginary part");
  return lam.real();
}

BetheEigenpair bethe_eigenpair(const BetheRoots& roots, double c, int L) {
  BetheEigenpair pair;
  pair.psi = bethe_vector(roots, L);
  pair.eigenvalue = bethe_eigenvalue(roots, c, L);
  pair.zero_root_branch = false;
  for (double p : roots.roots)
    if (std::abs(p) < 1e-9) pair.zero_root_branch = true;
  TransferBlock block = build_block(L, roots.n, c);
  std::vector<std::complex<double>> vy;
  block.apply(pair.psi, vy);
  double num = 0, den = 0;
  for (size_t i = 0; i < pair.psi.size(); ++i) {
    num += std::norm(vy[i] - pair.eigenvalue * pair.psi[i]);
    den += std::norm(pair.psi[i]);
  }
  pair.residual = std::sqrt(num / den);
  return pair;
}

std::vector<FreeEnergyRow> free_energy_table(int L, double c, int k_max) {
  if (k_max < 0 || k_max > L / 2) throw std::invalid_argument("sector range out of bounds");
  std::vector<FreeEnergyRow> rows;
  for (int k = 0; k <= k_max; ++k) {
    int m = L / 2 + k;
    int m_small = std::min(m, L - m);
    FreeEnergyRow row;
    row.k = k;
    row.m = m;
    if (m_small == 0) {
      row.lambda_max = 2.0;  // single all-equal state with two horizontal seeds
    } else {
      TransferBlock block = build_block(L, m_small, c);
      row.lambda_max = leading_eigenvalue(block).eigenvalue;
    }
    row.log_lambda_over_l = std::log(row.lambda_max) / L;
    rows.push_back(row);
  }
  for (const auto& row : rows)
    if (row.lambda_max > rows[0].lambda_max + 1e-9 * rows[0].lambda_max)
      throw std::runtime_error("sector eigenvalues not dominated by the balanced sector");
  return rows;
}

}  // namespace rcm
