#include "omm/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "omm/errors.hpp"

namespace omm {
namespace {

using namespace std::complex_literals;

cplx checked_divide(cplx num, cplx den, const char* what) {
  if (den == 0.0) throw SingularityError(std::string("singular denominator in ") + what);
  return num / den;
}

Mode cavity_mode(int i) { return i == 0 ? Mode::A1 : Mode::A2; }
Mode magnon_mode(int i) { return i == 0 ? Mode::m1 : Mode::m2; }

/// Mean fields of everything except b for given effective detunings.
struct DrivenAmplitudes {
  cplx a;
  std::array<cplx, 2> m;
  std::array<cplx, 2> A;
};

DrivenAmplitudes driven_amplitudes(const SystemConfig& c, double eff_a,
                                   const std::array<double, 2>& eff_A) {
  DrivenAmplitudes out;
  out.a = checked_divide(c.optical.rabi, 1i * eff_a + c.mode(Mode::a).decay, "optical amplitude");
  for (int i = 0; i < 2; ++i) {
    const double kA = c.mode(cavity_mode(i)).decay;
    const double km = c.mode(magnon_mode(i)).decay;
    const double g = c.couplings.magnon_cavity[i];
    const cplx cav = 1i * eff_A[i] + kA;
    const cplx mag = 1i * c.microwave[i].magnon_detuning + km;
    out.m[i] = checked_divide(cav * c.microwave[i].rabi, g * g + mag * cav, "magnon amplitude");
    out.A[i] = checked_divide(g * out.m[i], -eff_A[i] + 1i * kA, "cavity amplitude");
  }
  return out;
}

cplx mechanical_amplitude(const SystemConfig& c, cplx a, const std::array<cplx, 2>& A) {
  const auto& g = c.couplings;
  const double drive = g.optomechanical * std::norm(a) + g.cavity_mechanical[0] * std::norm(A[0]) +
                       g.cavity_mechanical[1] * std::norm(A[1]);
  return checked_divide(drive, c.mode(Mode::b).frequency - 1i * c.mode(Mode::b).decay,
                        "mechanical amplitude");
}

SteadyState assemble(const DrivenAmplitudes& d, cplx b) {
  SteadyState ss;
  ss.amplitude[index(Mode::a)] = d.a;
  ss.amplitude[index(Mode::b)] = b;
  for (int i = 0; i < 2; ++i) {
    ss.amplitude[index(cavity_mode(i))] = d.A[i];
    ss.amplitude[index(magnon_mode(i))] = d.m[i];
  }
  return ss;
}

SteadyState solve_effective(const SystemConfig& c) {
  const std::array<double, 2> eff_A{c.microwave[0].cavity_detuning, c.microwave[1].cavity_detuning};
  const auto d = driven_amplitudes(c, c.optical.detuning, eff_A);
  const cplx b = mechanical_amplitude(c, d.a, d.A);
  SteadyState ss = assemble(d, b);
  const double x_b = 2.0 * b.real();
  ss.effective_detuning_a = c.optical.detuning;
  ss.effective_detuning_A = eff_A;
  ss.bare_detuning_a = c.optical.detuning + c.couplings.optomechanical * x_b;
  for (int i = 0; i < 2; ++i)
    ss.bare_detuning_A[i] = eff_A[i] + c.couplings.cavity_mechanical[i] * x_b;
  return ss;
}

// Iterate x <- (1 - w) x + w F(x) over (a, m1, m2, A1, A2, b).
SteadyState solve_bare(const SystemConfig& c, const SteadyStateOptions& opt) {
  const double bare_a = c.optical.detuning;
  const std::array<double, 2> bare_A{c.microwave[0].cavity_detuning, c.microwave[1].cavity_detuning};
  const auto& g = c.couplings;

  auto shifted = [&](cplx b) {
    const double x_b = 2.0 * b.real();
    return std::pair{bare_a - g.optomechanical * x_b,
                     std::array<double, 2>{bare_A[0] - g.cavity_mechanical[0] * x_b,
                                           bare_A[1] - g.cavity_mechanical[1] * x_b}};
  };

  std::array<cplx, 6> x{};
  {
    const auto d = driven_amplitudes(c, bare_a, bare_A);
    x = {d.a, d.m[0], d.m[1], d.A[0], d.A[1], 0.0};
  }

  const double w = opt.damping;
  double change = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const auto [eff_a, eff_A] = shifted(x[5]);
    const auto d = driven_amplitudes(c, eff_a, eff_A);
    const cplx b = mechanical_amplitude(c, x[0], {x[3], x[4]});
    const std::array<cplx, 6> fx{d.a, d.m[0], d.m[1], d.A[0], d.A[1], b};

    change = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const cplx next = (1.0 - w) * x[k] + w * fx[k];
      const double delta = std::abs(next - x[k]);
      if (delta > 0.0) change = std::max(change, delta / std::max(std::abs(next), 1e-300));
      x[k] = next;
    }
    if (!std::isfinite(change)) break;
    if (change <= opt.tolerance) {
      const auto [fa, fA] = shifted(x[5]);
      const auto dd = driven_amplitudes(c, fa, fA);
      SteadyState ss = assemble(dd, x[5]);
      ss.effective_detuning_a = fa;
      ss.effective_detuning_A = fA;
      ss.bare_detuning_a = bare_a;
      ss.bare_detuning_A = bare_A;
      ss.iterations = it;
      return ss;
    }
  }
  throw ConvergenceError("bare-detuning fixed point did not converge (last relative change " +
                             std::to_string(change) + ")",
                         change);
}

double rel_diff(cplx lhs, cplx rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

}  // namespace

void SystemConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  for (Mode m : kAllModes) {
    const auto& p = mode(m);
    const std::string name(mode_name(m));
    if (!finite(p.frequency) || p.frequency <= 0.0)
      throw ConfigError("eigenfrequency of mode " + name + " must be positive");
    if (!finite(p.decay) || p.decay <= 0.0)
      throw ConfigError("decay rate of mode " + name + " must be positive");
  }
  const auto& g = couplings;
  for (double v : {g.optomechanical, g.cavity_mechanical[0], g.cavity_mechanical[1],
                   g.magnon_cavity[0], g.magnon_cavity[1]})
    if (!finite(v) || v < 0.0) throw ConfigError("couplings must be finite and non-negative");
  for (double v : {optical.rabi, microwave[0].rabi, microwave[1].rabi})
    if (!finite(v) || v < 0.0) throw ConfigError("drive Rabi frequencies must be non-negative");
  for (double v : {optical.detuning, microwave[0].cavity_detuning, microwave[0].magnon_detuning,
                   microwave[1].cavity_detuning, microwave[1].magnon_detuning})
    if (!finite(v)) throw ConfigError("detunings must be finite");
  if (!finite(temperature) || temperature < 0.0)
    throw ConfigError("temperature must be non-negative");
}

SystemConfig default_config() {
  using constants::two_pi;
  const double omega_b = two_pi * 10e6;
  SystemConfig c;
  c.mode(Mode::a) = {two_pi * 370e12, 0.4 * omega_b};
  c.mode(Mode::b) = {omega_b, two_pi * 100.0};
  for (Mode m : {Mode::A1, Mode::A2, Mode::m1, Mode::m2}) c.mode(m) = {two_pi * 10e9, 0.1 * omega_b};
  c.couplings.optomechanical = 1.2 * c.mode(Mode::b).decay;
  c.couplings.cavity_mechanical = {kCalibratedCavityMechanicalCoupling,
                                   kCalibratedCavityMechanicalCoupling};
  c.couplings.magnon_cavity = {two_pi * 1.7e6, two_pi * 1.7e6};
  c.optical = {1.43e12, omega_b};
  c.microwave[0] = {7.13e14, 0.0, 0.0};
  c.microwave[1] = {7.13e14, 0.0, 0.0};
  c.detuning_mode = DetuningMode::Effective;
  c.temperature = 10e-3;
  return c;
}

double bose_einstein(double omega, double temperature) {
  if (!(omega > 0.0)) throw std::domain_error("bose_einstein: frequency must be positive");
  if (!(temperature >= 0.0)) throw std::domain_error("bose_einstein: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::k_B * temperature);
  return 1.0 / std::expm1(x);  // expm1 overflows to inf for large x, giving exactly 0
}

double magnon_frequency_from_field(double field_tesla) {
  if (!(field_tesla >= 0.0)) throw std::domain_error("bias field must be >= 0");
  return constants::gyromagnetic_ratio * field_tesla;
}

double field_for_magnon_frequency(double omega) {
  if (!(omega >= 0.0)) throw std::domain_error("magnon frequency must be >= 0");
  return omega / constants::gyromagnetic_ratio;
}

double vacuum_optomech_coupling(double omega_cav, double x_zpf, double length) {
  if (!(omega_cav > 0.0) || !(length > 0.0) || !(x_zpf >= 0.0))
    throw std::domain_error("vacuum_optomech_coupling: inputs must be positive");
  return omega_cav * x_zpf / length;
}

SteadyState solve_steady_state(const SystemConfig& config, const SteadyStateOptions& options) {
  return config.detuning_mode == DetuningMode::Effective ? solve_effective(config)
                                                         : solve_bare(config, options);
}

double steady_state_residual(const SystemConfig& c, const SteadyState& ss) {
  const auto& g = c.couplings;
  const double x_b = 2.0 * ss[Mode::b].real();
  double r = 0.0;
  // detuning-shift relation
  r = std::max(r, rel_diff(ss.effective_detuning_a, ss.bare_detuning_a - g.optomechanical * x_b));
  for (int i = 0; i < 2; ++i)
    r = std::max(r, rel_diff(ss.effective_detuning_A[i],
                             ss.bare_detuning_A[i] - g.cavity_mechanical[i] * x_b));

  const auto d = driven_amplitudes(c, ss.effective_detuning_a, ss.effective_detuning_A);
  r = std::max(r, rel_diff(ss[Mode::a], d.a));
  for (int i = 0; i < 2; ++i) {
    r = std::max(r, rel_diff(ss[magnon_mode(i)], d.m[i]));
    // A_i from the returned m_i rather than a recomputed one
    const double kA = c.mode(cavity_mode(i)).decay;
    r = std::max(r, rel_diff(ss[cavity_mode(i)],
                             g.magnon_cavity[i] * ss[magnon_mode(i)] /
                                 (-ss.effective_detuning_A[i] + 1i * kA)));
  }
  r = std::max(r, rel_diff(ss[Mode::b],
                           mechanical_amplitude(c, ss[Mode::a], {ss[Mode::A1], ss[Mode::A2]})));
  return r;
}

SystemConfig with_bare_detunings(const SystemConfig& config, const SteadyState& ss) {
  SystemConfig out = config;
  out.detuning_mode = DetuningMode::Bare;
  out.optical.detuning = ss.bare_detuning_a;
  for (int i = 0; i < 2; ++i) out.microwave[i].cavity_detuning = ss.bare_detuning_A[i];
  return out;
}

EffectiveCouplings effective_couplings(const SystemConfig& c, const SteadyState& ss) {
  const auto& g = c.couplings;
  EffectiveCouplings e;
  e.GR_ab = g.optomechanical * ss[Mode::a].real();
  e.GI_ab = g.optomechanical * ss[Mode::a].imag();
  for (int i = 0; i < 2; ++i) {
    e.GR_Ab[i] = g.cavity_mechanical[i] * ss[cavity_mode(i)].real();
    e.GI_Ab[i] = g.cavity_mechanical[i] * ss[cavity_mode(i)].imag();
  }
  return e;
}

Matrix12d build_drift(const SystemConfig& c, const SteadyState& ss) {
  const auto G = effective_couplings(c, ss);
  Matrix12d A = Matrix12d::Zero();

  const double ka = c.mode(Mode::a).decay;
  const double kb = c.mode(Mode::b).decay;
  const double wb = c.mode(Mode::b).frequency;
  const double da = ss.effective_detuning_a;

  // optical cavity
  A(0, 0) = -ka;
  A(0, 1) = da;
  A(0, 2) = -2.0 * G.GI_ab;
  A(1, 0) = -da;
  A(1, 1) = -ka;
  A(1, 2) = 2.0 * G.GR_ab;
  // mechanics
  A(2, 2) = -kb;
  A(2, 3) = wb;
  A(3, 0) = 2.0 * G.GR_ab;
  A(3, 1) = 2.0 * G.GI_ab;
  A(3, 2) = -wb;
  A(3, 3) = -kb;

  for (int i = 0; i < 2; ++i) {
    const auto xa = static_cast<Eigen::Index>(quadrature_offset(cavity_mode(i)));
    const auto xm = static_cast<Eigen::Index>(quadrature_offset(magnon_mode(i)));
    const double kA = c.mode(cavity_mode(i)).decay;
    const double km = c.mode(magnon_mode(i)).decay;
    const double dA = ss.effective_detuning_A[i];
    const double dm = c.microwave[i].magnon_detuning;
    const double g = c.couplings.magnon_cavity[i];

    A(3, xa) = 2.0 * G.GR_Ab[i];
    A(3, xa + 1) = 2.0 * G.GI_Ab[i];

    A(xa, 2) = -2.0 * G.GI_Ab[i];
    A(xa, xa) = -kA;
    A(xa, xa + 1) = dA;
    A(xa, xm + 1) = g;
    A(xa + 1, 2) = 2.0 * G.GR_Ab[i];
    A(xa + 1, xa) = -dA;
    A(xa + 1, xa + 1) = -kA;
    A(xa + 1, xm) = -g;

    A(xm, xa + 1) = g;
    A(xm, xm) = -km;
    A(xm, xm + 1) = dm;
    A(xm + 1, xa) = -g;
    A(xm + 1, xm) = -dm;
    A(xm + 1, xm + 1) = -km;
  }
  return A;
}

Matrix12d build_diffusion(const SystemConfig& c) {
  Matrix12d D = Matrix12d::Zero();
  for (Mode m : kAllModes) {
    const auto& p = c.mode(m);
    const double n = bose_einstein(p.frequency, c.temperature);
    const auto k = static_cast<Eigen::Index>(quadrature_offset(m));
    D(k, k) = D(k + 1, k + 1) = p.decay * (2.0 * n + 1.0);
  }
  return D;
}

std::pair<double, double> supermode_frequencies(double omega, double g) {
  return {omega + g, omega - g};
}

}  // namespace omm
