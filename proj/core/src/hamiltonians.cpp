#include "molspin/hamiltonians.hpp"

#include "molspin/diagnostics.hpp"
#include "molspin/units.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace molspin {

namespace {

constexpr cplx I{0.0, 1.0};

std::array<Operator, 3> cartesian(double s) {
  auto ops = spin_operators(s);
  return {ops.Sx, ops.Sy, ops.Sz};
}

std::mutex& stevens_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<int, int>, StevensProvider>& stevens_registry() {
  static std::map<std::pair<int, int>, StevensProvider> r;
  return r;
}

Operator rank2_stevens(int q, double s) {
  const auto o = spin_operators(s);
  const int d = o.Sz.rows();
  switch (q) {
    case 0: return 3.0 * o.Sz * o.Sz - s * (s + 1.0) * identity(d);
    case 1: return o.Sz * o.Sx + o.Sx * o.Sz;
    case -1: return o.Sz * o.Sy + o.Sy * o.Sz;
    case 2: return 0.5 * (o.Splus * o.Splus + o.Sminus * o.Sminus);
    case -2: return -0.5 * I * (o.Splus * o.Splus - o.Sminus * o.Sminus);
    default: throw std::invalid_argument("rank-2 Stevens operator needs |q| <= 2");
  }
}

void check_site(std::size_t site, const SpinRegister& reg, const char* who) {
  if (site >= reg.size()) {
    throw std::out_of_range(std::string(who) + ": site index " + std::to_string(site) + " out of range");
  }
}

}  // namespace

Eigen::Matrix3d euler_zyz(double alpha, double beta, double gamma) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(alpha, Vector3d::UnitZ()) * AngleAxisd(beta, Vector3d::UnitY()) *
          AngleAxisd(gamma, Vector3d::UnitZ()))
      .toRotationMatrix();
}

Eigen::Matrix3d g_tensor(const Eigen::Vector3d& principal, const Eigen::Vector3d& euler) {
  if ((principal.array() <= 0.0).any()) throw std::invalid_argument("g_tensor: principal values must be positive");
  const Eigen::Matrix3d r = euler_zyz(euler(0), euler(1), euler(2));
  return r * principal.asDiagonal() * r.transpose();
}

Eigen::Matrix3d g_tensor(double isotropic) { return g_tensor(Eigen::Vector3d::Constant(isotropic)); }

void register_stevens_operator(int k, int q, StevensProvider provider) {
  std::lock_guard lock(stevens_mutex());
  stevens_registry()[{k, q}] = std::move(provider);
}

Operator stevens_operator(int k, int q, double s) {
  if (k < 0 || k % 2 != 0) throw std::invalid_argument("Stevens operator rank k must be even, got " + std::to_string(k));
  if (k > static_cast<int>(std::lround(2.0 * s))) {
    throw std::invalid_argument("Stevens operator rank k=" + std::to_string(k) + " exceeds 2s");
  }
  if (std::abs(q) > k) throw std::invalid_argument("Stevens operator needs |q| <= k");
  if (k == 0) return identity(static_cast<int>(std::lround(2.0 * s)) + 1);
  if (k == 2) return rank2_stevens(q, s);
  std::lock_guard lock(stevens_mutex());
  auto it = stevens_registry().find({k, q});
  if (it == stevens_registry().end()) {
    throw std::invalid_argument("no Stevens operator registered for k=" + std::to_string(k) +
                                ", q=" + std::to_string(q));
  }
  return it->second(s);
}

Operator build_zeeman(const ZeemanTerm& term, const SpinRegister& reg) {
  check_site(term.site, reg, "build_zeeman");
  const auto s = cartesian(reg.site(term.site).s);
  const Eigen::Vector3d h = units::bohr_magneton_ghz_per_tesla * term.g * term.B;
  Operator local = Operator::Zero(s[0].rows(), s[0].cols());
  for (int a = 0; a < 3; ++a) local += h(a) * s[a];
  return embed(local, term.site, reg);
}

Operator build_exchange(const ExchangeTerm& term, const SpinRegister& reg) {
  if (term.i == term.j) throw std::invalid_argument("build_exchange: pair must join two distinct sites");
  check_site(term.i, reg, "build_exchange");
  check_site(term.j, reg, "build_exchange");
  const auto si = cartesian(reg.site(term.i).s);
  const auto sj = cartesian(reg.site(term.j).s);
  std::array<Operator, 3> ei, ej;
  for (int a = 0; a < 3; ++a) {
    ei[a] = embed(si[a], term.i, reg);
    ej[a] = embed(sj[a], term.j, reg);
  }
  const int d = reg.total_dim();
  Operator h = Operator::Zero(d, d);
  for (int a = 0; a < 3; ++a) {
    const double diag = term.J_iso + term.J_diag(a);
    if (diag != 0.0) h += diag * ei[a] * ej[a];
    for (int b = 0; b < 3; ++b) {
      if (term.D_aniso(a, b) != 0.0) h += term.D_aniso(a, b) * ei[a] * ej[b];
    }
  }
  // G . (s_i x s_j)
  for (int a = 0; a < 3; ++a) {
    if (term.G_dm(a) == 0.0) continue;
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    h += term.G_dm(a) * (ei[b] * ej[c] - ei[c] * ej[b]);
  }
  return h;
}

Operator build_zfs(const ZfsTerm& term, const SpinRegister& reg) {
  check_site(term.site, reg, "build_zfs");
  const double s = reg.site(term.site).s;
  const auto o = spin_operators(s);
  Operator local = term.d * o.Sz * o.Sz + term.e * (o.Sx * o.Sx - o.Sy * o.Sy);
  for (const auto& st : term.stevens) local += st.b * stevens_operator(st.k, st.q, s);
  return embed(local, term.site, reg);
}

Operator build_hamiltonian(const HamiltonianSpec& spec) {
  const int d = spec.reg.total_dim();
  Operator h = Operator::Zero(d, d);
  for (const auto& t : spec.zeeman) h += build_zeeman(t, spec.reg);
  for (const auto& t : spec.exchange) h += build_exchange(t, spec.reg);
  for (const auto& t : spec.zfs) h += build_zfs(t, spec.reg);
  return h;
}

SpinRegister hyperfine_register(const HyperfineQuditSpec& spec) {
  SpinRegister reg;
  reg.add(SpinSite::nucleus(spec.I, "nucleus"));
  reg.add(SpinSite::electron(spec.s, "electron"));
  return reg;
}

Operator build_hyperfine_qudit(const HyperfineQuditSpec& spec, const SpinRegister& reg) {
  std::size_t n = reg.size(), e = reg.size();
  for (std::size_t k = 0; k < reg.size(); ++k) {
    if (reg.site(k).kind == SiteKind::nuclear && n == reg.size()) n = k;
    if (reg.site(k).kind == SiteKind::electronic && e == reg.size()) e = k;
  }
  if (n == reg.size() || e == reg.size()) {
    throw std::invalid_argument("build_hyperfine_qudit: register needs one nuclear and one electronic site");
  }
  if (std::abs(reg.site(n).s - spec.I) > 1e-12 || std::abs(reg.site(e).s - spec.s) > 1e-12) {
    throw std::invalid_argument("build_hyperfine_qudit: register spins do not match the spec");
  }
  ExchangeTerm hf;
  hf.i = n;
  hf.j = e;
  hf.D_aniso = spec.A;
  Operator h = build_exchange(hf, reg);
  const auto on = spin_operators(spec.I);
  h += spec.p * embed(on.Sz * on.Sz, n, reg);
  h += build_zeeman({e, spec.g, spec.B}, reg);
  return h;
}

TrimerSpec cr7ni_co_trimer(double B_tesla) {
  TrimerSpec t;
  t.g1 = {1.74, 1.78, 1.78};
  t.g3 = t.g1;
  t.g2 = {2.0, 4.25, 6.5};
  t.J1 = Eigen::Vector3d(-0.14, 0.34, 0.17) * units::ghz_per_inverse_cm;
  t.J2 = Eigen::Vector3d(-0.07, 0.17, 0.34) * units::ghz_per_inverse_cm;
  t.B = B_tesla;
  return t;
}

SpinRegister trimer_register() {
  return SpinRegister({SpinSite::electron(0.5, "q1"), SpinSite::electron(0.5, "switch"),
                       SpinSite::electron(0.5, "q3")});
}

Operator build_trimer(const TrimerSpec& spec) {
  const SpinRegister reg = trimer_register();
  const Eigen::Vector3d field(0.0, 0.0, spec.B);
  Operator h = build_zeeman({0, g_tensor(spec.g1, spec.euler1), field}, reg);
  h += build_zeeman({1, g_tensor(spec.g2, spec.euler2), field}, reg);
  h += build_zeeman({2, g_tensor(spec.g3, spec.euler3), field}, reg);
  ExchangeTerm j1;
  j1.i = 0;
  j1.j = 1;
  j1.J_diag = spec.J1;
  ExchangeTerm j2;
  j2.i = 1;
  j2.j = 2;
  j2.J_diag = spec.J2;
  h += build_exchange(j1, reg);
  h += build_exchange(j2, reg);
  return h;
}

double switch_resonance(const TrimerSpec& spec, double m1, double m3) {
  if (std::abs(std::abs(m1) - 0.5) > 1e-12 || std::abs(std::abs(m3) - 0.5) > 1e-12) {
    throw std::invalid_argument("switch_resonance: m1 and m3 must be +-1/2");
  }
  const Eigen::Matrix3d g2 = g_tensor(spec.g2, spec.euler2);
  return g2(2, 2) * units::bohr_magneton_ghz_per_tesla * spec.B + spec.J1(2) * m1 + spec.J2(2) * m3;
}

Operator annihilation(int n_max) {
  if (n_max < 1) throw std::invalid_argument("annihilation: n_max must be >= 1");
  Operator a = Operator::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

SpinRegister spin_photon_register(const SpinPhotonSpec& spec) {
  SpinRegister reg;
  reg.add(SpinSite::boson_mode(spec.n_max, "photon"));
  for (std::size_t k = 0; k < spec.spins.size(); ++k) {
    reg.add(SpinSite::electron(spec.spins[k].s, "spin" + std::to_string(k)));
  }
  return reg;
}

Operator build_spin_photon(const SpinPhotonSpec& spec) {
  if (spec.n_max < 1) throw std::invalid_argument("build_spin_photon: n_max must be >= 1");
  const SpinRegister reg = spin_photon_register(spec);
  const Operator a = annihilation(spec.n_max);
  const Operator adag = a.adjoint();
  Operator h = spec.omega0 * embed(adag * a, 0, reg);
  const Operator field = embed(a + adag, 0, reg);
  for (std::size_t k = 0; k < spec.spins.size(); ++k) {
    const auto& sp = spec.spins[k];
    const auto o = spin_operators(sp.s);
    const Operator local = sp.g * units::bohr_magneton_ghz_per_tesla * spec.B * o.Sz + sp.D * o.Sz * o.Sz;
    h += embed(local, k + 1, reg);
    if (sp.G != 0.0) h += 2.0 * sp.G * embed(o.Sx, k + 1, reg) * field;
  }
  return h;
}

double top_fock_population(const State& psi, const SpinRegister& reg, std::size_t mode_site) {
  if (reg.site(mode_site).kind != SiteKind::mode) throw std::invalid_argument("top_fock_population: site is not a mode");
  const int top = reg.site_dim(mode_site) - 1;
  double pop = 0.0;
  for (int k = 0; k < psi.size(); ++k) {
    if (reg.levels_of(k)[mode_site] == top) pop += std::norm(psi(k));
  }
  if (pop > 1e-4) {
    warn("photon truncation: top Fock level population " + std::to_string(pop) + " exceeds 1e-4; raise n_max");
  }
  return pop;
}

double effective_xy_coupling(double J, double g1, double g2, double B) {
  const double zeeman_gap = std::abs(g1 - g2) * units::bohr_magneton_ghz_per_tesla * std::abs(B);
  if (zeeman_gap == 0.0) {
    throw std::invalid_argument("effective_xy_coupling: |g1 - g2| mu_B B is zero, the perturbative coupling diverges");
  }
  if (zeeman_gap < 10.0 * std::abs(J)) {
    warn("effective_xy_coupling: |g1-g2| mu_B B = " + std::to_string(zeeman_gap) +
         " GHz is not much larger than J = " + std::to_string(J) + " GHz");
  }
  return J * J / (2.0 * zeeman_gap);
}

}  // namespace molspin
