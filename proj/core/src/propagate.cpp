#include "molspin/diagnostics.hpp"
#include "molspin/pulse.hpp"
#include "molspin/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace molspin {

namespace {

constexpr cplx I{0.0, 1.0};

double spectral_width(const Operator& h) {
  const auto es = eigendecompose(h);
  return es.values(es.values.size() - 1) - es.values(0);
}

// Splits [t0, t1] at breakpoints and calls step(t_mid, dt) for every midpoint step.
template <typename Step>
void midpoint_steps(double t0, double t1, double dt, std::vector<double> breaks, Step&& step) {
  breaks.push_back(t0);
  breaks.push_back(t1);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               breaks.end());
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = std::max(breaks[k], t0), b = std::min(breaks[k + 1], t1);
    if (b - a <= 1e-15) continue;
    const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / dt - 1e-9)));
    const double h = (b - a) / static_cast<double>(n);
    for (long j = 0; j < n; ++j) step(a + (static_cast<double>(j) + 0.5) * h, h);
  }
}

double resolve_dt(const TimeDependentHamiltonian& h, double t0, double t1, const PropagationOptions& opts) {
  double f_max = opts.f_max;
  if (f_max <= 0.0) f_max = std::max(spectral_width(h(t0)), spectral_width(h(0.5 * (t0 + t1))));
  if (f_max <= 0.0) return t1 - t0;
  const double limit = 1.0 / (20.0 * f_max);
  if (opts.dt <= 0.0) return limit;
  if (opts.dt > limit * (1.0 + 1e-9)) {
    const double phase_err = std::pow(2.0 * std::numbers::pi * f_max * opts.dt, 2) / 12.0;
    std::ostringstream msg;
    msg << "propagate: dt=" << opts.dt << " ns exceeds 1/(20 f_max)=" << limit
        << " ns; estimated relative rate error " << phase_err;
    warn(msg.str());
  }
  return opts.dt;
}

Operator step_unitary(const Operator& h, double dt) { return expm((-2.0 * std::numbers::pi * dt * I) * h); }

}  // namespace

State propagate(const TimeDependentHamiltonian& h, const State& psi0, double t0, double t1,
                const PropagationOptions& opts) {
  if (t1 < t0) throw std::invalid_argument("propagate: t1 < t0");
  State psi = psi0;
  if (t1 == t0) return psi;
  const double dt = resolve_dt(h, t0, t1, opts);
  midpoint_steps(t0, t1, dt, opts.breakpoints, [&](double tm, double step) { psi = step_unitary(h(tm), step) * psi; });
  return psi;
}

Operator propagate_unitary(const TimeDependentHamiltonian& h, int dim, double t0, double t1,
                           const PropagationOptions& opts) {
  if (t1 < t0) throw std::invalid_argument("propagate_unitary: t1 < t0");
  Operator u = identity(dim);
  if (t1 == t0) return u;
  const double dt = resolve_dt(h, t0, t1, opts);
  midpoint_steps(t0, t1, dt, opts.breakpoints, [&](double tm, double step) { u = step_unitary(h(tm), step) * u; });
  return u;
}

DrivenSystem::DrivenSystem(SpinRegister reg, Operator h_static, PulseSchedule schedule, HardwareCalibration hw)
    : reg_(std::move(reg)), h0_(std::move(h_static)), schedule_(std::move(schedule)), hw_(std::move(hw)) {
  if (h0_.rows() != reg_.total_dim()) throw std::invalid_argument("DrivenSystem: Hamiltonian does not match register");
  schedule_.validate();
  double max_freq = 0.0, rabi_sum = 0.0;
  for (const auto& seg : schedule_.segments) {
    const std::size_t site = reg_.index_of(seg.target);
    const auto ops = spin_operators(reg_.site(site).s);
    target_sites_.push_back(site);
    splus_.push_back(embed(ops.Splus, site, reg_));
    sminus_.push_back(embed(ops.Sminus, site, reg_));
    max_freq = std::max(max_freq, std::abs(seg.freq));
    rabi_sum += hw_.rabi_for(seg.amp, seg.target) * reg_.site(site).s * 2.0;
  }
  f_max_ = std::max(spectral_width(h0_), max_freq) + rabi_sum;
}

Operator DrivenSystem::hamiltonian(double t) const {
  Operator h = h0_;
  for (std::size_t k = 0; k < schedule_.segments.size(); ++k) {
    const auto& seg = schedule_.segments[k];
    if (!seg.active(t) || seg.amp == 0.0) continue;
    const double gamma = hw_.rabi_for(seg.amp, seg.target);
    const double theta = 2.0 * std::numbers::pi * seg.freq * t + seg.phase;
    const cplx e = std::polar(1.0, -theta);
    h += (0.5 * gamma) * (e * splus_[k] + std::conj(e) * sminus_[k]);
  }
  return h;
}

double DrivenSystem::max_frequency() const { return f_max_; }

std::vector<double> DrivenSystem::breakpoints() const {
  std::vector<double> b;
  for (const auto& seg : schedule_.segments) {
    b.push_back(seg.start());
    b.push_back(seg.end());
  }
  return b;
}

State DrivenSystem::evolve(const State& psi0, double dt) const {
  PropagationOptions opts;
  opts.dt = dt;
  opts.f_max = f_max_;
  opts.breakpoints = breakpoints();
  return propagate([this](double t) { return hamiltonian(t); }, psi0, 0.0, schedule_.total_time, opts);
}

Operator DrivenSystem::evolve_unitary(double dt) const {
  PropagationOptions opts;
  opts.dt = dt;
  opts.f_max = f_max_;
  opts.breakpoints = breakpoints();
  return propagate_unitary([this](double t) { return hamiltonian(t); }, reg_.total_dim(), 0.0, schedule_.total_time,
                           opts);
}

Operator DrivenSystem::interaction_frame_unitary(double dt) const {
  return matexp_unitary(h0_, -schedule_.total_time) * evolve_unitary(dt);
}

std::vector<std::pair<double, State>> DrivenSystem::trace(const State& psi0, int n_samples, double dt) const {
  if (n_samples < 1) throw std::invalid_argument("DrivenSystem::trace: need at least one sample interval");
  PropagationOptions opts;
  opts.dt = dt;
  opts.f_max = f_max_;
  opts.breakpoints = breakpoints();
  std::vector<std::pair<double, State>> out;
  State psi = psi0;
  out.emplace_back(0.0, psi);
  const double span = schedule_.total_time / n_samples;
  auto h = [this](double t) { return hamiltonian(t); };
  for (int k = 0; k < n_samples; ++k) {
    const double a = k * span, b = (k + 1) * span;
    psi = propagate(h, psi, a, b, opts);
    out.emplace_back(b, psi);
  }
  return out;
}

}  // namespace molspin
