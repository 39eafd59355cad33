#include "molspin/algorithms.hpp"

#include "molspin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace molspin {

namespace {

constexpr double pi = std::numbers::pi;
const std::string kTarget = "qudit";

void check_spec(const GroverSpec& spec) {
  if (spec.d < 3) throw std::invalid_argument("grover: d must be >= 3");
  if (spec.marked < 0 || spec.marked >= spec.d) throw std::invalid_argument("grover: marked level out of range");
  if (spec.initial >= spec.d) throw std::invalid_argument("grover: initial level out of range");
}

std::vector<double> populations(const State& psi) {
  std::vector<double> p(psi.size());
  for (int k = 0; k < psi.size(); ++k) p[k] = std::norm(psi(k));
  return p;
}

// The qudit seen from the frame of its static Hamiltonian. Tone k at
// frequency w_k couples every transition j with phase 2 pi (f_j - w_k) t.
class InteractionModel {
 public:
  InteractionModel(int d, const GroverHardware& hw) : d_(d), freqs_(grover_transition_freqs(d, hw)) {
    const auto ops = spin_operators(0.5 * (d - 1));
    for (int j = 0; j + 1 < d; ++j) elements_.push_back(ops.Splus(j, j + 1).real());
  }

  State run(const GroverStage& stage, const State& psi, double t0) const {
    double f_int = 0.0, rabi_sum = 0.0;
    for (std::size_t k = 0; k < stage.tones.size(); ++k) {
      const double w = freqs_[k] + stage.tones[k].detuning;
      for (double f : freqs_) f_int = std::max(f_int, std::abs(f - w));
      rabi_sum += stage.tones[k].rabi;
    }
    PropagationOptions opts;
    opts.dt = std::min(0.5, 1.0 / (20.0 * (f_int + rabi_sum) + 1e-12));
    auto h = [&](double t) {
      Operator m = Operator::Zero(d_, d_);
      for (std::size_t k = 0; k < stage.tones.size(); ++k) {
        const auto& tone = stage.tones[k];
        if (tone.rabi == 0.0) continue;
        const double w = freqs_[k] + tone.detuning;
        for (int j = 0; j + 1 < d_; ++j) {
          const cplx c = 0.5 * tone.rabi * elements_[j] * std::polar(1.0, 2.0 * pi * (freqs_[j] - w) * t - tone.phase);
          m(j, j + 1) += c;
          m(j + 1, j) += std::conj(c);
        }
      }
      return m;
    };
    return propagate(h, psi, t0, t0 + stage.tau, opts);
  }

 private:
  int d_;
  std::vector<double> freqs_;
  std::vector<double> elements_;
};

// Parameters: (rabi, detuning, phase) per tone, then tau.
struct Bounds {
  std::vector<double> lo, hi;
};

Bounds stage_bounds(int d, const GroverHardware& hw) {
  Bounds b;
  for (int k = 0; k + 1 < d; ++k) {
    b.lo.insert(b.lo.end(), {0.0, -hw.max_detuning, -pi});
    b.hi.insert(b.hi.end(), {hw.max_rabi, hw.max_detuning, pi});
  }
  b.lo.push_back(hw.min_tau);
  b.hi.push_back(hw.max_tau);
  return b;
}

GroverStage unpack(const std::vector<double>& x) {
  GroverStage s;
  for (std::size_t i = 0; i + 3 < x.size(); i += 3) s.tones.push_back({x[i], x[i + 1], x[i + 2]});
  s.tau = x.back();
  return s;
}

std::vector<double> pack(const GroverStage& s) {
  std::vector<double> x;
  for (const auto& t : s.tones) x.insert(x.end(), {t.rabi, t.detuning, t.phase});
  x.push_back(s.tau);
  return x;
}

// Bounded coordinate search: probes +-step on each coordinate (order shuffled
// per sweep), halves all steps after a sweep without improvement.
template <class Cost>
std::vector<double> coordinate_search(std::vector<double> x, const Bounds& b, Cost&& cost, double target,
                                      int max_evaluations, std::mt19937_64& rng) {
  const std::size_t n = x.size();
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i) step[i] = 0.25 * (b.hi[i] - b.lo[i]);
  double best = cost(x);
  int evals = 1;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  while (evals < max_evaluations && best > target) {
    std::shuffle(order.begin(), order.end(), rng);
    bool improved = false;
    for (std::size_t i : order) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> trial = x;
        trial[i] = std::clamp(x[i] + sign * step[i], b.lo[i], b.hi[i]);
        if (trial[i] == x[i]) continue;
        const double c = cost(trial);
        ++evals;
        if (c < best) {
          best = c;
          x = std::move(trial);
          improved = true;
          break;
        }
      }
      if (evals >= max_evaluations || best <= target) break;
    }
    if (!improved) {
      double largest = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        step[i] *= 0.5;
        largest = std::max(largest, step[i] / (b.hi[i] - b.lo[i]));
      }
      if (largest < 1e-5) break;
    }
  }
  return x;
}

void check_resolved(int d, const GroverHardware& hw) {
  const auto f = grover_transition_freqs(d, hw);
  double sep = std::numeric_limits<double>::infinity();
  int a = 0, b = 1;
  for (int i = 0; i < d - 1; ++i) {
    for (int j = i + 1; j < d - 1; ++j) {
      if (std::abs(f[i] - f[j]) < sep) {
        sep = std::abs(f[i] - f[j]);
        a = i;
        b = j;
      }
    }
  }
  if (!is_selective(hw.max_tau, sep)) {
    throw CompileError("grover: transitions " + std::to_string(a + 1) + "->" + std::to_string(a) + " and " +
                       std::to_string(b + 1) + "->" + std::to_string(b) + " are " + std::to_string(sep) +
                       " GHz apart; not resolvable within " + std::to_string(hw.max_tau) + " ns");
  }
}

}  // namespace

Operator grover_iterate(int d, int marked) {
  if (d < 2 || marked < 0 || marked >= d) throw std::invalid_argument("grover_iterate: invalid size or marked level");
  Operator oracle = identity(d);
  oracle(marked, marked) = -1.0;
  const Operator diffusion = Operator::Constant(d, d, 2.0 / d) - identity(d);
  return diffusion * oracle;
}

int grover_optimal_iterations(int d) {
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(d)));
  return std::max(1, static_cast<int>(std::lround(pi / (4.0 * theta) - 0.5)));
}

SpinRegister grover_register(int d) {
  SpinRegister reg;
  reg.add(SpinSite::nucleus(0.5 * (d - 1), kTarget));
  return reg;
}

Operator grover_static_hamiltonian(int d, const GroverHardware& hw) {
  const auto o = spin_operators(0.5 * (d - 1));
  return hw.f0 * o.Sz + hw.p * o.Sz * o.Sz;
}

std::vector<double> grover_transition_freqs(int d, const GroverHardware& hw) {
  const double I = 0.5 * (d - 1);
  std::vector<double> f;
  for (int k = 0; k + 1 < d; ++k) {
    const double m = I - k - 1;  // lower level of the pair
    f.push_back(hw.f0 + hw.p * (2.0 * m + 1.0));
  }
  return f;
}

PulseSchedule grover_schedule(int d, const std::vector<GroverStage>& stages, const GroverHardware& hw) {
  const auto freqs = grover_transition_freqs(d, hw);
  HardwareCalibration cal;
  ScheduleBuilder b;
  for (const auto& stage : stages) {
    if (stage.tones.size() != freqs.size()) throw std::invalid_argument("grover: one tone per transition expected");
    std::vector<PulseSegment> tones;
    for (std::size_t k = 0; k < stage.tones.size(); ++k) {
      PulseSegment seg;
      seg.target = kTarget;
      seg.freq = freqs[k] + stage.tones[k].detuning;
      seg.amp = cal.amp_for(stage.tones[k].rabi, kTarget);
      seg.phase = stage.tones[k].phase;
      seg.tau = stage.tau;
      seg.t0 = 0.5 * stage.tau;
      tones.push_back(seg);
    }
    b.tones(tones);
  }
  return b.build();
}

GroverResult grover_qudit(const GroverSpec& spec, GroverMode mode, const GroverHardware& hw, std::uint64_t seed) {
  check_spec(spec);
  const int d = spec.d;
  GroverResult out;
  if (mode == GroverMode::unitary) {
    State psi = State::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    out.iterations = grover_optimal_iterations(d);
    const Operator g = grover_iterate(d, spec.marked);
    for (int i = 0; i < out.iterations; ++i) psi = g * psi;
    out.populations = populations(psi);
    return out;
  }

  check_resolved(d, hw);
  const InteractionModel model(d, hw);
  const int start = spec.initial < 0 ? d - 1 : spec.initial;
  const State psi0 = basis_state(d, start);
  std::vector<GroverStage> stages = spec.drive;
  if (!stages.empty() && stages.size() != 2) throw std::invalid_argument("grover: pulse mode expects two stages");

  if (stages.empty()) {
    std::mt19937_64 rng(seed);
    const Bounds bounds = stage_bounds(d, hw);
    const auto ops = spin_operators(0.5 * (d - 1));
    // Equal Rabi frequency on every transition, a quarter turn in total.
    GroverStage guess;
    double worst_element = 0.0;
    for (int j = 0; j + 1 < d; ++j) worst_element = std::max(worst_element, ops.Splus(j, j + 1).real());
    for (int j = 0; j + 1 < d; ++j) guess.tones.push_back({0.5 * hw.max_rabi * worst_element / ops.Splus(j, j + 1).real(), 0.0, 0.0});
    guess.tau = std::clamp(1.0 / (4.0 * 0.5 * hw.max_rabi * worst_element), hw.min_tau, hw.max_tau);

    auto uniformity = [&](const std::vector<double>& x) {
      const auto p = populations(model.run(unpack(x), psi0, 0.0));
      double c = 0.0;
      for (double v : p) c += std::pow(v - 1.0 / d, 2);
      return c;
    };
    const GroverStage s1 = unpack(coordinate_search(pack(guess), bounds, uniformity, 1e-6, hw.max_evaluations, rng));
    const State mid = model.run(s1, psi0, 0.0);

    GroverStage guess2 = s1;
    for (auto& t : guess2.tones) t.phase = std::remainder(t.phase + 0.5 * pi, 2.0 * pi);
    auto amplification = [&](const std::vector<double>& x) {
      return 1.0 - std::norm(model.run(unpack(x), mid, s1.tau)(spec.marked));
    };
    const GroverStage s2 = unpack(coordinate_search(pack(guess2), bounds, amplification, 1e-4, hw.max_evaluations, rng));
    stages = {s1, s2};
  }

  const State mid = model.run(stages[0], psi0, 0.0);
  const State fin = model.run(stages[1], mid, stages[0].tau);
  out.stage1_populations = populations(mid);
  out.populations = populations(fin);
  out.drive = stages;
  out.schedule = grover_schedule(d, stages, hw);
  out.schedule.metadata["marked"] = spec.marked;
  out.schedule.metadata["initial_level"] = start;
  return out;
}

}  // namespace molspin
