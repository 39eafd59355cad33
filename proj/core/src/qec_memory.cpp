#include "molspin/diagnostics.hpp"
#include "molspin/qec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace molspin {

namespace {

struct NoisyRunner {
  SpinRegister reg;
  std::vector<LindbladTerm> noise;
  QecTiming timing;

  double rabi_for(const std::string& target) const {
    return target == "electron" ? timing.ancilla_rabi_ghz : timing.qudit_rabi_ghz;
  }

  // Every tone finishes together: tone k runs at theta_k / (2 pi tau) for the layer duration tau.
  DensityMatrix apply(const RotationLayer& layer, const DensityMatrix& rho) const {
    const int dim = reg.total_dim();
    if (timing.instantaneous) {
      const Operator u = layer_unitary(layer, dim);
      return u * rho * u.adjoint();
    }
    double tau = 0.0;
    for (const auto& r : layer) {
      const std::size_t site = reg.index_of(r.target);
      const Operator sp = embed(spin_operators(reg.site(site).s).Splus, site, reg);
      const double m = std::abs(sp(r.upper, r.lower));
      if (m < 1e-12) throw std::invalid_argument("qec memory: rotation is not a single-quantum transition");
      tau = std::max(tau, r.theta / (2.0 * std::numbers::pi * rabi_for(r.target) * m));
    }
    Operator h = Operator::Zero(dim, dim);
    for (const auto& r : layer) {
      const double w = r.theta / (4.0 * std::numbers::pi * tau);
      h(r.upper, r.lower) += w * std::polar(1.0, -r.phi);
      h(r.lower, r.upper) += w * std::polar(1.0, r.phi);
    }
    return lindblad_evolve(h, noise, rho, tau);
  }

  DensityMatrix apply(const std::vector<RotationLayer>& layers, DensityMatrix rho) const {
    for (const auto& l : layers) rho = apply(l, rho);
    return rho;
  }

  DensityMatrix idle(double t, const DensityMatrix& rho) const {
    if (t <= 0.0 || noise.empty()) return rho;
    const int dim = reg.total_dim();
    return lindblad_evolve(Operator::Zero(dim, dim), noise, rho, t);
  }
};

}  // namespace

MemoryPoint qec_memory_point(double t_mem, double T2, const QecTiming& timing) {
  if (t_mem < 0.0) throw std::invalid_argument("qec_memory_point: negative memory time");
  if (!(T2 > 0.0)) throw std::invalid_argument("qec_memory_point: T2 must be positive");
  NoisyRunner run;
  run.reg = hyperfine_register(spin32_hyperfine());
  run.timing = timing;
  NoiseModel nm;
  nm.T2 = T2;
  nm.sites = {0};
  run.noise = nm.terms(run.reg);
  const int dim = run.reg.total_dim();

  // alpha = beta = 1/sqrt 2 on |-3/2>, |-1/2>, ancilla down.
  State in = State::Zero(dim);
  in(run.reg.flat_index({3, 1})) = 1.0 / std::sqrt(2.0);
  in(run.reg.flat_index({2, 1})) = 1.0 / std::sqrt(2.0);
  DensityMatrix rho = density_from_state(in);
  rho = run.apply(spin32_encoding_layers(), rho);
  rho = run.idle(t_mem, rho);

  const Spin32Protocol p = spin32_protocol();
  rho = run.apply(p.map, rho);
  rho = run.apply(p.ancilla_flip, rho);
  // Non-selective ancilla readout: each branch gets its own feedback.
  Operator up = Operator::Zero(2, 2), down = Operator::Zero(2, 2);
  up(0, 0) = 1.0;
  down(1, 1) = 1.0;
  const Operator pu = embed(up, 1, run.reg), pd = embed(down, 1, run.reg);
  DensityMatrix flagged = pu * rho * pu, clean = pd * rho * pd;
  flagged = run.apply(p.ancilla_flip, flagged);
  flagged = run.apply(p.unmap, flagged);
  flagged = run.apply(p.recovery, flagged);
  clean = run.apply(p.unmap, clean);
  rho = flagged + clean;

  const CodeSpec bare = spin32_code();
  const State target = (bare.zero_l + bare.one_l) / std::sqrt(2.0);
  const DensityMatrix nuc = partial_trace(rho, run.reg, {0});

  MemoryPoint pt;
  pt.t_mem = t_mem;
  pt.e_corrected = 1.0 - target.dot(nuc * target).real();

  const State plus = State::Constant(2, 1.0 / std::sqrt(2.0));
  const DensityMatrix ref = lindblad_evolve(Operator::Zero(2, 2), {{spin_operators(0.5).Sz, 1.0 / T2}},
                                            density_from_state(plus), t_mem);
  pt.e_reference = 1.0 - plus.dot(ref * plus).real();
  return pt;
}

std::vector<MemoryPoint> qec_memory_experiment(const std::vector<double>& t_mem, double T2, const QecTiming& timing) {
  std::vector<MemoryPoint> out(t_mem.size());
  parallel_for(t_mem.size(), [&](std::size_t i) { out[i] = qec_memory_point(t_mem[i], T2, timing); });
  return out;
}

}  // namespace molspin
