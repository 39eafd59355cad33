#include "molspin/open_system.hpp"

#include "molspin/diagnostics.hpp"
#include "molspin/gates.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace molspin {

namespace {
constexpr cplx I{0.0, 1.0};
constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace

DensityMatrix density_from_state(const State& psi) { return psi * psi.adjoint(); }

void check_density_matrix(const DensityMatrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("density matrix is not hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw std::invalid_argument("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw std::invalid_argument("density matrix has a negative eigenvalue");
}

double purity(const DensityMatrix& rho) { return (rho * rho).trace().real(); }

Operator lindblad_rhs(const Operator& h, const std::vector<LindbladTerm>& terms, const DensityMatrix& rho) {
  Operator d = (-two_pi * I) * (h * rho - rho * h);
  for (const auto& t : terms) {
    if (t.rate == 0.0) continue;
    const Operator xd = t.x.adjoint();
    const Operator xdx = xd * t.x;
    d += t.rate * (2.0 * t.x * rho * xd - xdx * rho - rho * xdx);
  }
  return d;
}

namespace {

DensityMatrix rk4_step(const Operator& h, const std::vector<LindbladTerm>& terms, const DensityMatrix& rho, double dt) {
  const Operator k1 = lindblad_rhs(h, terms, rho);
  const Operator k2 = lindblad_rhs(h, terms, rho + 0.5 * dt * k1);
  const Operator k3 = lindblad_rhs(h, terms, rho + 0.5 * dt * k2);
  const Operator k4 = lindblad_rhs(h, terms, rho + dt * k3);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_terms(const std::vector<LindbladTerm>& terms, int dim) {
  for (const auto& t : terms) {
    if (t.rate < 0.0) throw std::invalid_argument("lindblad: negative rate");
    if (t.x.rows() != dim || t.x.cols() != dim) throw std::invalid_argument("lindblad: jump operator size mismatch");
  }
}

double generator_scale(const Operator& h, const std::vector<LindbladTerm>& terms) {
  double s = 2.0 * two_pi * operator_norm(h);
  for (const auto& t : terms) s += 4.0 * t.rate * std::pow(operator_norm(t.x), 2);
  return s;
}

// Largest step, from a 0.25/scale start, whose one-step and two-half-step results agree to tol.
double probe_step(const Operator& h, const std::vector<LindbladTerm>& terms, const DensityMatrix& rho, double span,
                  double tol) {
  const double scale = generator_scale(h, terms);
  double dt = scale > 0.0 ? std::min(span, 0.25 / scale) : span;
  for (int it = 0; it < 40; ++it) {
    const DensityMatrix one = rk4_step(h, terms, rho, dt);
    const DensityMatrix two = rk4_step(h, terms, rk4_step(h, terms, rho, 0.5 * dt), 0.5 * dt);
    const double delta = (one - two).norm();
    const double inc = std::max((two - rho).norm(), 1e-300);
    if (delta <= tol * inc || delta < 1e-15) return dt;
    dt *= 0.5;
  }
  return dt;
}

DensityMatrix integrate(const Operator& h, const std::vector<LindbladTerm>& terms, DensityMatrix rho, double span,
                        double dt) {
  if (span <= 0.0) return rho;
  const long n = std::max<long>(1, static_cast<long>(std::ceil(span / dt - 1e-9)));
  const double step = span / static_cast<double>(n);
  for (long k = 0; k < n; ++k) rho = rk4_step(h, terms, rho, step);
  return rho;
}

}  // namespace

DensityMatrix lindblad_evolve(const Operator& h, const std::vector<LindbladTerm>& terms, const DensityMatrix& rho0,
                              double t, const LindbladOptions& opts) {
  if (t < 0.0) throw std::invalid_argument("lindblad_evolve: negative time");
  check_terms(terms, static_cast<int>(rho0.rows()));
  if (t == 0.0) return rho0;
  const double dt = opts.dt > 0.0 ? opts.dt : probe_step(h, terms, rho0, t, opts.tol);
  return integrate(h, terms, rho0, t, dt);
}

std::vector<DensityMatrix> lindblad_trajectory(const Operator& h, const std::vector<LindbladTerm>& terms,
                                               const DensityMatrix& rho0, const std::vector<double>& times,
                                               const LindbladOptions& opts) {
  check_terms(terms, static_cast<int>(rho0.rows()));
  std::vector<DensityMatrix> out;
  if (times.empty()) return out;
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
    throw std::invalid_argument("lindblad_trajectory: times must be ascending and non-negative");
  }
  const double dt = opts.dt > 0.0 ? opts.dt : probe_step(h, terms, rho0, times.back() > 0 ? times.back() : 1.0, opts.tol);
  DensityMatrix rho = rho0;
  double now = 0.0;
  for (double t : times) {
    rho = integrate(h, terms, rho, t - now, dt);
    now = t;
    out.push_back(rho);
  }
  return out;
}

std::vector<DensityMatrix> lindblad_trajectory_driven(const HamiltonianFn& h, const std::vector<LindbladTerm>& terms,
                                                      const DensityMatrix& rho0, const std::vector<double>& times,
                                                      double dt, const std::vector<double>& breakpoints) {
  if (!(dt > 0.0)) throw std::invalid_argument("lindblad_trajectory_driven: dt must be positive");
  check_terms(terms, static_cast<int>(rho0.rows()));
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw std::invalid_argument("lindblad_trajectory_driven: times must be ascending and non-negative");
  }
  std::vector<double> stops(breakpoints.begin(), breakpoints.end());
  stops.insert(stops.end(), times.begin(), times.end());
  std::sort(stops.begin(), stops.end());
  if (!times.empty()) std::erase_if(stops, [&](double x) { return x > times.back(); });
  std::vector<DensityMatrix> out;
  DensityMatrix rho = rho0;
  double now = 0.0;
  std::size_t next_time = 0;
  for (double stop : stops) {
    if (stop > now) {
      const int n = std::max(1, static_cast<int>(std::ceil((stop - now) / dt - 1e-9)));
      const double step = (stop - now) / n;
      for (int k = 0; k < n; ++k) {
        const double t = now + k * step;
        const Operator h0 = h(t), hm = h(t + 0.5 * step), h1 = h(t + step);
        const Operator k1 = lindblad_rhs(h0, terms, rho);
        const Operator k2 = lindblad_rhs(hm, terms, rho + 0.5 * step * k1);
        const Operator k3 = lindblad_rhs(hm, terms, rho + 0.5 * step * k2);
        const Operator k4 = lindblad_rhs(h1, terms, rho + step * k3);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      now = stop;
    }
    while (next_time < times.size() && times[next_time] <= now) {
      out.push_back(rho);
      ++next_time;
    }
  }
  return out;
}

double KrausChannel::completeness_error() const {
  if (ops.empty()) return 1.0;
  Operator s = Operator::Zero(ops[0].cols(), ops[0].cols());
  for (const auto& e : ops) s += e.adjoint() * e;
  return (s - Operator::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

DensityMatrix kraus_apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.completeness_error() > 1e-10) throw std::invalid_argument("kraus_apply: channel is not trace preserving");
  if (ch.ops[0].cols() != rho.rows()) throw std::invalid_argument("kraus_apply: dimension mismatch");
  DensityMatrix out = DensityMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : ch.ops) out += e * rho * e.adjoint();
  return out;
}

KrausChannel dephasing_channel(double t, double T2) {
  if (!(T2 > 0.0) || t < 0.0) throw std::invalid_argument("dephasing_channel: need T2 > 0 and t >= 0");
  const double p = std::exp(-t / T2);
  return {{std::sqrt((1.0 + p) / 2.0) * identity(2), std::sqrt((1.0 - p) / 2.0) * pauli_z()}};
}

KrausChannel relaxation_channel(double t, double T1) {
  if (!(T1 > 0.0) || t < 0.0) throw std::invalid_argument("relaxation_channel: need T1 > 0 and t >= 0");
  const double keep = std::exp(-t / T1);
  Operator e0 = Operator::Zero(2, 2), e1 = Operator::Zero(2, 2);
  e0(1, 1) = 1.0;
  e0(0, 0) = std::sqrt(keep);
  e1(1, 0) = std::sqrt(1.0 - keep);
  return {{e0, e1}};
}

KrausChannel embed_channel(const KrausChannel& ch, std::size_t site, const SpinRegister& reg) {
  KrausChannel out;
  for (const auto& e : ch.ops) out.ops.push_back(embed(e, site, reg));
  return out;
}

std::vector<LindbladTerm> NoiseModel::terms(const SpinRegister& reg) const {
  if (T1 && T2 && *T2 > 2.0 * *T1 * (1.0 + 1e-12)) {
    warn("NoiseModel: T2 exceeds 2 T1, which no physical channel allows");
  }
  std::vector<std::size_t> targets = sites;
  if (targets.empty()) {
    for (std::size_t k = 0; k < reg.size(); ++k) {
      if (reg.site(k).kind != SiteKind::mode) targets.push_back(k);
    }
  }
  std::vector<LindbladTerm> out;
  for (std::size_t k : targets) {
    const auto ops = spin_operators(reg.site(k).s);
    if (T2) {
      if (!(*T2 > 0.0)) throw std::invalid_argument("NoiseModel: T2 must be positive");
      out.push_back({embed(ops.Sz, k, reg), 1.0 / *T2});
    }
    if (T1) {
      if (!(*T1 > 0.0)) throw std::invalid_argument("NoiseModel: T1 must be positive");
      out.push_back({embed(ops.Sminus, k, reg), 1.0 / (2.0 * *T1)});
    }
  }
  for (const auto& c : custom) {
    if (c.rate < 0.0) throw std::invalid_argument("NoiseModel: negative rate");
    out.push_back(c);
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SpinRegister& reg, const std::set<std::size_t>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  for (std::size_t k : keep) {
    if (k >= reg.size()) throw std::out_of_range("partial_trace: site index out of range");
  }
  const int n = reg.total_dim();
  if (rho.rows() != n) throw std::invalid_argument("partial_trace: dimension mismatch");
  int dk = 1;
  for (std::size_t k : keep) dk *= reg.site_dim(k);
  auto reduced_index = [&](const std::vector<int>& lv) {
    int idx = 0;
    for (std::size_t k : keep) idx = idx * reg.site_dim(k) + lv[k];
    return idx;
  };
  auto traced_key = [&](const std::vector<int>& lv) {
    int idx = 0;
    for (std::size_t k = 0; k < reg.size(); ++k) {
      if (!keep.count(k)) idx = idx * reg.site_dim(k) + lv[k];
    }
    return idx;
  };
  std::vector<int> red(n), env(n);
  for (int a = 0; a < n; ++a) {
    const auto lv = reg.levels_of(a);
    red[a] = reduced_index(lv);
    env[a] = traced_key(lv);
  }
  DensityMatrix out = DensityMatrix::Zero(dk, dk);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (env[a] == env[b]) out(red[a], red[b]) += rho(a, b);
    }
  }
  return out;
}

DensityMatrix dephasing_toy_model(cplx alpha, cplx beta, double p) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
    throw std::invalid_argument("dephasing_toy_model: state is not normalized");
  }
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("dephasing_toy_model: p must lie in [0, 1]");
  DensityMatrix rho(2, 2);
  const double c = std::sqrt(1.0 - p);
  rho << std::norm(alpha), alpha * std::conj(beta) * c, std::conj(alpha) * beta * c, std::norm(beta);
  return rho;
}

namespace {

Operator level_projector(const SpinRegister& reg, std::size_t site, int level) {
  Operator p = Operator::Zero(reg.site_dim(site), reg.site_dim(site));
  p(level, level) = 1.0;
  return embed(p, site, reg);
}

}  // namespace

MeasurementResult measure_z(const DensityMatrix& rho, const SpinRegister& reg, std::size_t site) {
  if (site >= reg.size()) throw std::out_of_range("measure_z: site out of range");
  MeasurementResult r;
  for (int k = 0; k < reg.site_dim(site); ++k) {
    const Operator p = level_projector(reg, site, k);
    const DensityMatrix branch = p * rho * p;
    const double prob = branch.trace().real();
    r.probabilities.push_back(prob);
    r.post_states.push_back(prob > 1e-14 ? DensityMatrix(branch / prob) : DensityMatrix::Zero(rho.rows(), rho.cols()));
  }
  return r;
}

DensityMatrix project(const DensityMatrix& rho, const SpinRegister& reg, std::size_t site, int outcome) {
  if (site >= reg.size()) throw std::out_of_range("project: site out of range");
  if (outcome < 0 || outcome >= reg.site_dim(site)) throw std::out_of_range("project: outcome out of range");
  const Operator p = level_projector(reg, site, outcome);
  const DensityMatrix branch = p * rho * p;
  const double prob = branch.trace().real();
  if (prob <= 1e-14) throw std::invalid_argument("project: outcome has zero probability");
  return branch / prob;
}

double expectation_pauli(const DensityMatrix& rho, const SpinRegister& reg, std::size_t site, char axis) {
  if (site >= reg.size()) throw std::out_of_range("expectation_pauli: site out of range");
  if (reg.site_dim(site) != 2) throw std::invalid_argument("expectation_pauli: site is not a spin 1/2");
  auto z_difference = [&](const DensityMatrix& r) {
    const auto m = measure_z(r, reg, site);
    return m.probabilities[0] - m.probabilities[1];
  };
  switch (axis) {
    case 'z': return z_difference(rho);
    case 'x': {
      const Operator u = embed(rotation('y', std::numbers::pi / 2), site, reg);
      return -z_difference(u * rho * u.adjoint());
    }
    case 'y': {
      const Operator u = embed(rotation('x', std::numbers::pi / 2), site, reg);
      return z_difference(u * rho * u.adjoint());
    }
    default: throw std::invalid_argument(std::string("expectation_pauli: unknown axis '") + axis + "'");
  }
}

Quadrature gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  q.nodes = es.eigenvalues();
  q.weights = std::sqrt(std::numbers::pi) * es.eigenvectors().row(0).transpose().array().square();
  return q;
}

EchoSignal hahn_echo_signal(double tau, const EchoOptions& opts) {
  if (!(tau > 0.0)) throw std::invalid_argument("hahn_echo_signal: tau must be positive");
  if (opts.sigma_f < 0.0) throw std::invalid_argument("hahn_echo_signal: negative detuning spread");
  const Quadrature q = gauss_hermite(opts.sigma_f > 0.0 ? opts.nodes : 1);
  const auto ops = spin_operators(0.5);
  std::vector<LindbladTerm> terms;
  if (opts.T2 > 0.0) terms.push_back({ops.Sz, 1.0 / opts.T2});
  const Operator half = rotation('x', std::numbers::pi / 2);
  const Operator full = rotation('x', std::numbers::pi);
  DensityMatrix rho0 = DensityMatrix::Zero(2, 2);
  rho0(0, 0) = 1.0;
  DensityMatrix at_tau = DensityMatrix::Zero(2, 2), at_echo = DensityMatrix::Zero(2, 2);
  const double wsum = q.weights.sum();
  for (int k = 0; k < q.nodes.size(); ++k) {
    const double detuning = std::sqrt(2.0) * opts.sigma_f * q.nodes(k);
    const Operator h = detuning * ops.Sz;
    DensityMatrix rho = half * rho0 * half.adjoint();
    rho = terms.empty() ? DensityMatrix(matexp_unitary(h, tau) * rho * matexp_unitary(h, tau).adjoint())
                        : lindblad_evolve(h, terms, rho, tau);
    at_tau += (q.weights(k) / wsum) * rho;
    rho = full * rho * full.adjoint();
    rho = terms.empty() ? DensityMatrix(matexp_unitary(h, tau) * rho * matexp_unitary(h, tau).adjoint())
                        : lindblad_evolve(h, terms, rho, tau);
    at_echo += (q.weights(k) / wsum) * rho;
  }
  auto transverse = [](const DensityMatrix& r) {
    const double sx = 2.0 * r(0, 1).real(), sy = -2.0 * r(0, 1).imag();
    return std::hypot(sx, sy);
  };
  return {transverse(at_tau), transverse(at_echo)};
}

}  // namespace molspin
