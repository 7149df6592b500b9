#include "flame/mb_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "flame/constants.hpp"

namespace flame {

namespace {

using cplx = std::complex<double>;
using constants::two_pi;

void parallel_for(std::size_t n, unsigned jobs,
                  const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += jobs) body(i);
    });
  }
  for (auto& th : workers) th.join();
}

double trapz(const std::vector<double>& y, double dt) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dt;
}

// One velocity class of the medium.  Passive classes (un-pumped absorber)
// carry no storage coherence.
struct MediumClass {
  double weight = 0.0;
  double kappa = 0.0;      // field-atom coupling, sqrt units
  double delta_p = 0.0;    // angular detuning of the polarization
  double delta2 = 0.0;     // angular static two-photon detuning
  double gamma_p_extra = 0.0;  // angular bin-dephasing supplement
  bool has_storage = true;
};

struct SolverGrids {
  std::vector<double> time;
  double dt = 0.0;
  double dz = 0.0;
  std::size_t n_z = 0;
  std::vector<double> omega_c;       // angular control Rabi at t_j
  std::vector<double> omega_c_half;  // ... at t_j + dt/2
  std::vector<double> tof_rate;      // amplitude decay rate at t_j
  std::vector<double> tof_rate_half;
  std::vector<MediumClass> classes;
  double gamma_p = 0.0;  // angular
  double gamma_s = 0.0;  // angular
};

// Combined storage+retrieval control intensity with a single extinction
// floor (one Pockels chain generates both pulses).
double combined_control_intensity(const Scenario& sc, double t) {
  const double floor_s = 1.0 / sc.control_storage.extinction_ratio;
  const double floor_r = 1.0 / sc.control_retrieval.extinction_ratio;
  const double is = control_intensity_profile(sc.control_storage, t) - floor_s;
  const double ir =
      control_intensity_profile(sc.control_retrieval, t) - floor_r;
  const double floor = std::max(floor_s, floor_r);
  return floor + std::max(is, 0.0) + std::max(ir, 0.0);
}

double control_rabi_angular(const Scenario& sc, double t,
                            double control_scale) {
  const double omega_peak =
      sc.scheme.omega_control_peak *
      std::sqrt(sc.control_storage.peak_power / sc.scheme.control_power_cal);
  return two_pi * control_scale * omega_peak *
         std::sqrt(combined_control_intensity(sc, t));
}

VelocityGrid make_velocity_grid(const Scenario& sc) {
  const auto& cfg = sc.solver;
  switch (cfg.grid_kind) {
    case VelocityGridKind::custom:
      if (!cfg.custom_velocity_nodes)
        throw validation_error("solver.custom_velocity_nodes",
                               "required for the custom grid kind");
      return VelocityGrid::custom(*cfg.custom_velocity_nodes);
    case VelocityGridKind::uniform:
      return VelocityGrid::uniform(cfg.n_v, sc.sigma_v(), cfg.velocity_span);
    case VelocityGridKind::gauss_hermite:
    default:
      return VelocityGrid::gauss_hermite(cfg.n_v, sc.sigma_v());
  }
}

SolverGrids build_grids(const Scenario& sc, double od, double control_scale) {
  SolverGrids g;
  const auto& tm = sc.timing;
  const double rise = sc.control_storage.rise_fall_10_90;
  const double ret_center = tm.retrieval_control_center();
  const double ret_window_start = tm.retrieved_window_start
                                      ? *tm.retrieved_window_start
                                      : ret_center - sc.control_retrieval.fwhm / 2;
  double t0 = std::min(tm.signal_center - 4.0 * sc.signal.fwhm,
                       tm.storage_control_center -
                           sc.control_storage.fwhm / 2 - 3.0 * rise);
  t0 = std::min(t0, tm.signal_center - tm.integration_window);
  double t1 = std::max({ret_window_start + tm.integration_window + 4e-9,
                        ret_center + sc.control_retrieval.fwhm + 3.0 * rise,
                        tm.signal_center + 4.0 * sc.signal.fwhm});
  if (sc.solver.t_start) t0 = *sc.solver.t_start;
  if (sc.solver.t_end) t1 = *sc.solver.t_end;
  g.dt = sc.solver.dt;
  const auto n_t =
      static_cast<std::size_t>(std::ceil((t1 - t0) / g.dt)) + 1;
  g.time.resize(n_t);
  for (std::size_t j = 0; j < n_t; ++j) g.time[j] = t0 + g.dt * j;

  g.n_z = sc.solver.n_z;
  g.dz = sc.ensemble.cell_length / static_cast<double>(g.n_z);

  g.omega_c.resize(n_t);
  g.omega_c_half.resize(n_t);
  for (std::size_t j = 0; j < n_t; ++j) {
    g.omega_c[j] = control_rabi_angular(sc, g.time[j], control_scale);
    g.omega_c_half[j] =
        control_rabi_angular(sc, g.time[j] + 0.5 * g.dt, control_scale);
  }

  const double tau_tof = sc.tau_time_of_flight();
  g.tof_rate.assign(n_t, 0.0);
  g.tof_rate_half.assign(n_t, 0.0);
  if (std::isfinite(tau_tof)) {
    const double inv2 = 1.0 / (tau_tof * tau_tof);
    for (std::size_t j = 0; j < n_t; ++j) {
      g.tof_rate[j] = std::max(0.0, g.time[j] - tm.signal_center) * inv2;
      g.tof_rate_half[j] =
          std::max(0.0, g.time[j] + 0.5 * g.dt - tm.signal_center) * inv2;
    }
  }

  g.gamma_p = two_pi * sc.scheme.gamma_intermediate;
  g.gamma_s = two_pi * sc.scheme.gamma_storage;

  // Velocity classes and the coupling normalization.  The coupling is fixed
  // so that the weak-probe, no-control, resonant CW intensity transmission
  // equals exp(-OD), matching how the optical depth is measured.
  const VelocityGrid grid = make_velocity_grid(sc);
  const double ks = two_pi / sc.scheme.lambda_signal;
  const double kc = two_pi / sc.scheme.lambda_control;
  const double dk_two_photon = (sc.scheme.geometry ==
                                BeamGeometry::counter_propagating)
                                   ? (kc - ks)
                                   : -(ks + kc);
  const double off_ang = two_pi * sc.absorber_offset;
  const double p_active =
      sc.pumping_absorber_on ? sc.ensemble.pumping_efficiency : 1.0;
  const double q_passive = 1.0 - p_active;

  // Doppler-broadened continuum absorption kernel; the homogeneous width is
  // far below the Doppler width, so the Gaussian limit of the Voigt profile
  // applies.  Normalizing against the continuum (not the discrete quadrature)
  // keeps the per-class coupling physical for any node count.
  const double doppler_w = ks * sc.sigma_v();
  auto a_cont = [&](double x) {
    return std::sqrt(constants::pi / 2.0) / doppler_w *
           std::exp(-0.5 * x * x / (doppler_w * doppler_w));
  };
  const double a_active = a_cont(0.0);
  const double a_passive = a_cont(off_ang);
  const double denom = p_active * a_active + q_passive * a_passive;
  const double k2 =
      denom > 0 ? od / (2.0 * sc.ensemble.cell_length * denom) : 0.0;

  // Each quadrature node stands for a velocity bin; the bin's collective
  // polarization dephases at ~ks times the bin half-width.  Without this a
  // lone class rings for the full homogeneous lifetime, an artifact of the
  // discretization.  Exactly specified (custom) classes are left untouched.
  const auto& nodes = grid.nodes();
  std::vector<double> bin_dephase(nodes.size(), 0.0);
  if (sc.solver.grid_kind != VelocityGridKind::custom && nodes.size() > 1) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double lo = i > 0 ? nodes[i - 1].velocity : nodes[i].velocity;
      const double hi = i + 1 < nodes.size() ? nodes[i + 1].velocity
                                             : nodes[i].velocity;
      const double half_width = 0.25 * (hi - lo);
      bin_dephase[i] = ks * half_width;
    }
  }

  const double delta_s_ang = two_pi * sc.scheme.delta_signal;
  const double delta2_ang = two_pi * sc.scheme.delta_two_photon;
  for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
    const auto& nd = nodes[ni];
    const double v = nd.velocity;
    MediumClass active;
    active.weight = nd.weight;
    active.kappa = std::sqrt(p_active * k2);
    active.gamma_p_extra = bin_dephase[ni];
    active.delta_p = delta_s_ang - ks * v;
    double shift = 0.0;
    if (sc.dressing_on && sc.scheme.omega_dressing > 0) {
      shift = dressing_light_shift(sc.scheme.omega_dressing,
                                   sc.scheme.delta_dressing,
                                   two_pi / sc.scheme.lambda_dressing, v,
                                   sc.scheme.dressing_pole_guard);
    }
    active.delta2 = delta2_ang + dk_two_photon * v - two_pi * shift;
    active.has_storage = true;
    g.classes.push_back(active);
    if (q_passive > 0) {
      MediumClass passive;
      passive.weight = nd.weight;
      passive.kappa = std::sqrt(q_passive * k2);
      passive.delta_p = delta_s_ang - ks * v + off_ang;
      passive.delta2 = 0.0;
      passive.gamma_p_extra = bin_dephase[ni];
      passive.has_storage = false;
      g.classes.push_back(passive);
    }
  }
  return g;
}

// Per-class state trajectories at one z slice.
struct ClassTrace {
  std::vector<cplx> p;
  std::vector<cplx> s;  // empty for passive classes
};

// Integrate the atomic equations of one class over the whole time grid,
// driven by the field samples at this z position.  RK4 with the field
// linearly interpolated at half steps.
void integrate_class(const SolverGrids& g, const MediumClass& mc,
                     const std::vector<cplx>& field, ClassTrace& out) {
  const std::size_t n_t = g.time.size();
  out.p.assign(n_t, cplx{0.0, 0.0});
  if (mc.has_storage) out.s.assign(n_t, cplx{0.0, 0.0});
  const double h = g.dt;
  const cplx ik{0.0, mc.kappa};
  const cplx lam_p{-(g.gamma_p + mc.gamma_p_extra), -mc.delta_p};

  cplx p{0.0, 0.0}, s{0.0, 0.0};
  for (std::size_t j = 0; j + 1 < n_t; ++j) {
    const cplx e0 = field[j];
    const cplx e1 = field[j + 1];
    const cplx eh = 0.5 * (e0 + e1);
    const double w0 = 0.5 * g.omega_c[j];
    const double wh = 0.5 * g.omega_c_half[j];
    const double w1 = 0.5 * g.omega_c[j + 1];

    if (mc.has_storage) {
      const cplx lam_s0{-(g.gamma_s + g.tof_rate[j]), -mc.delta2};
      const cplx lam_sh{-(g.gamma_s + g.tof_rate_half[j]), -mc.delta2};
      const cplx lam_s1{-(g.gamma_s + g.tof_rate[j + 1]), -mc.delta2};
      auto deriv = [&](const cplx& pp, const cplx& ss, const cplx& e,
                       double w, const cplx& lam_s, cplx& dp, cplx& ds) {
        dp = lam_p * pp + ik * e + cplx{0.0, w} * ss;
        ds = lam_s * ss + cplx{0.0, w} * pp;
      };
      cplx k1p, k1s, k2p, k2s, k3p, k3s, k4p, k4s;
      deriv(p, s, e0, w0, lam_s0, k1p, k1s);
      deriv(p + 0.5 * h * k1p, s + 0.5 * h * k1s, eh, wh, lam_sh, k2p, k2s);
      deriv(p + 0.5 * h * k2p, s + 0.5 * h * k2s, eh, wh, lam_sh, k3p, k3s);
      deriv(p + h * k3p, s + h * k3s, e1, w1, lam_s1, k4p, k4s);
      p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      s += (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
      out.p[j + 1] = p;
      out.s[j + 1] = s;
    } else {
      auto deriv = [&](const cplx& pp, const cplx& e) {
        return lam_p * pp + ik * e;
      };
      const cplx k1 = deriv(p, e0);
      const cplx k2 = deriv(p + 0.5 * h * k1, eh);
      const cplx k3 = deriv(p + 0.5 * h * k2, eh);
      const cplx k4 = deriv(p + h * k3, e1);
      p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out.p[j + 1] = p;
    }
  }
}

struct SliceResult {
  std::vector<cplx> source;        // i dE/dz source: sum_v kappa w P
  std::vector<double> excitation;  // sum_v w (|P|^2 + |S|^2)
  std::vector<double> scatter;     // sum_v w (2 gp |P|^2 + 2 (gs+tof) |S|^2)
  std::vector<cplx> coherence;     // sum over active classes of w S
};

// Atoms at one z slice; velocity classes run concurrently, reduction in
// fixed class order so results are bit-stable across thread counts.
void atoms_at_slice(const SolverGrids& g, const std::vector<cplx>& field,
                    unsigned jobs, std::vector<ClassTrace>& scratch,
                    SliceResult& out, bool with_diagnostics) {
  const std::size_t n_t = g.time.size();
  const std::size_t n_c = g.classes.size();
  scratch.resize(n_c);
  parallel_for(n_c, jobs, [&](std::size_t c) {
    integrate_class(g, g.classes[c], field, scratch[c]);
  });
  out.source.assign(n_t, cplx{0.0, 0.0});
  if (with_diagnostics) {
    out.excitation.assign(n_t, 0.0);
    out.scatter.assign(n_t, 0.0);
    out.coherence.assign(n_t, cplx{0.0, 0.0});
  }
  for (std::size_t c = 0; c < n_c; ++c) {
    const auto& mc = g.classes[c];
    const auto& tr = scratch[c];
    const double kw = mc.kappa * mc.weight;
    for (std::size_t j = 0; j < n_t; ++j) out.source[j] += kw * tr.p[j];
    if (!with_diagnostics) continue;
    for (std::size_t j = 0; j < n_t; ++j) {
      const double p2 = std::norm(tr.p[j]);
      double s2 = 0.0;
      if (mc.has_storage) {
        s2 = std::norm(tr.s[j]);
        out.coherence[j] += mc.weight * tr.s[j];
      }
      out.excitation[j] += mc.weight * (p2 + s2);
      out.scatter[j] += mc.weight *
                        (2.0 * (g.gamma_p + mc.gamma_p_extra) * p2 +
                         2.0 * (g.gamma_s + g.tof_rate[j]) * s2);
    }
  }
}

PropagationRecord propagate_single(const Scenario& sc,
                                   const PropagateOptions& opt,
                                   double control_scale) {
  const double od =
      opt.od_override ? *opt.od_override : sc.ensemble.optical_depth;
  if (od < 0) throw validation_error("optical_depth", "must be >= 0");
  SolverGrids g = build_grids(sc, od, control_scale);
  const std::size_t n_t = g.time.size();

  PropagationRecord rec;
  rec.time = g.time;
  rec.input_field.resize(n_t);
  if (opt.input_override) {
    if (opt.input_override->size() != n_t)
      throw validation_error("input_override",
                             "length must match the solver time grid");
    rec.input_field = *opt.input_override;
  } else {
    for (std::size_t j = 0; j < n_t; ++j)
      rec.input_field[j] = signal_envelope(sc.signal, g.time[j]);
  }

  std::vector<double> in_intensity(n_t);
  for (std::size_t j = 0; j < n_t; ++j)
    in_intensity[j] = std::norm(rec.input_field[j]);
  rec.energy.input = trapz(in_intensity, g.dt);

  if (od == 0.0) {
    // Medium removed: the envelope equation has no source.
    rec.output_field = rec.input_field;
    rec.stored_excitation.assign(n_t, 0.0);
    rec.storage_coherence.assign(n_t, cplx{0.0, 0.0});
    rec.energy.transmitted = rec.energy.input;
    rec.energy.scattered = 0.0;
    rec.energy.stored_final = 0.0;
    rec.energy.residual = 0.0;
    return rec;
  }

  std::vector<cplx> field = rec.input_field;
  std::vector<cplx> field_pred(n_t), field_next(n_t);
  std::vector<ClassTrace> scratch;
  SliceResult cur, pred;
  std::vector<double> scatter_t(n_t, 0.0);
  std::vector<double> stored_t(n_t, 0.0);
  std::vector<cplx> coherence_t(n_t, cplx{0.0, 0.0});

  const bool diag = sc.solver.record_stored_energy;
  atoms_at_slice(g, field, opt.jobs, scratch, cur, true);

  auto accumulate = [&](const SliceResult& sr, double zweight) {
    for (std::size_t j = 0; j < n_t; ++j) {
      stored_t[j] += zweight * sr.excitation[j];
      scatter_t[j] += zweight * sr.scatter[j];
      coherence_t[j] += zweight * sr.coherence[j];
    }
  };
  accumulate(cur, 0.5 * g.dz);

  const cplx idz{0.0, g.dz};
  for (std::size_t i = 0; i < g.n_z; ++i) {
    for (std::size_t j = 0; j < n_t; ++j)
      field_pred[j] = field[j] + idz * cur.source[j];
    atoms_at_slice(g, field_pred, opt.jobs, scratch, pred, false);
    for (std::size_t j = 0; j < n_t; ++j)
      field_next[j] =
          field[j] + 0.5 * idz * (cur.source[j] + pred.source[j]);
    field.swap(field_next);
    atoms_at_slice(g, field, opt.jobs, scratch, cur, true);
    accumulate(cur, (i + 1 == g.n_z) ? 0.5 * g.dz : g.dz);
    if (!std::isfinite(field[n_t - 1].real()) ||
        !std::isfinite(std::norm(field[n_t / 2])))
      throw solver_error("propagate: non-finite field at z slice " +
                         std::to_string(i + 1));
  }

  rec.output_field = field;
  std::vector<double> out_intensity(n_t);
  for (std::size_t j = 0; j < n_t; ++j)
    out_intensity[j] = std::norm(field[j]);
  rec.energy.transmitted = trapz(out_intensity, g.dt);
  rec.energy.scattered = trapz(scatter_t, g.dt);
  rec.energy.stored_final = stored_t[n_t - 1];
  rec.energy.residual = rec.energy.input - rec.energy.transmitted -
                        rec.energy.scattered - rec.energy.stored_final;
  if (diag) {
    rec.stored_excitation = std::move(stored_t);
    rec.storage_coherence = std::move(coherence_t);
  }
  return rec;
}

// Radial shells with equal signal power; the control Rabi frequency is
// scaled by its Gaussian profile at the shell radius.
std::vector<double> shell_control_scales(const Scenario& sc) {
  const std::size_t n = sc.solver.n_shells;
  std::vector<double> scales(n);
  if (n == 1) {
    scales[0] = 1.0;
    return scales;
  }
  const double ws2 = sc.ensemble.signal_waist * sc.ensemble.signal_waist;
  const double wc2 = sc.ensemble.control_waist * sc.ensemble.control_waist;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = (j + 0.5) / static_cast<double>(n);
    const double r2 = -0.5 * ws2 * std::log(1.0 - u);
    scales[j] = std::exp(-r2 / wc2);
  }
  return scales;
}

double window_energy(const std::vector<double>& t,
                     const std::vector<double>& intensity, double a,
                     double b) {
  if (t.size() < 2 || b <= a) return 0.0;
  const double dt = t[1] - t[0];
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < t.size(); ++j) {
    const double lo = std::max(a, t[j]);
    const double hi = std::min(b, t[j + 1]);
    if (hi <= lo) continue;
    auto value = [&](double tt) {
      const double f = (tt - t[j]) / dt;
      return intensity[j] * (1.0 - f) + intensity[j + 1] * f;
    };
    sum += 0.5 * (value(lo) + value(hi)) * (hi - lo);
  }
  return sum;
}

// Pulse centers are owned by the timing plan; sync them before solving so
// edits to the plan (storage-time scans) move the pulses with it.
Scenario with_synced_centers(const Scenario& in) {
  Scenario sc = in;
  sc.signal.center = sc.timing.signal_center;
  sc.control_storage.center = sc.timing.storage_control_center;
  sc.control_retrieval.center = sc.timing.retrieval_control_center();
  return sc;
}

}  // namespace

std::vector<double> solver_time_grid(const Scenario& sc_in) {
  const Scenario scenario = with_synced_centers(sc_in);
  scenario.validate();
  return build_grids(scenario, 0.0, 1.0).time;
}

PropagationRecord propagate(const Scenario& sc_in,
                            const PropagateOptions& options) {
  const Scenario scenario = with_synced_centers(sc_in);
  scenario.validate();
  const auto scales = shell_control_scales(scenario);
  if (scales.size() == 1) return propagate_single(scenario, options, scales[0]);

  // Intensity-weighted average over shells; the combined output field keeps
  // the intensity profile only (phase taken from the innermost shell).
  PropagationRecord total;
  const double w = 1.0 / static_cast<double>(scales.size());
  bool first = true;
  std::vector<double> out_int;
  for (double s : scales) {
    PropagationRecord rec = propagate_single(scenario, options, s);
    if (first) {
      total = rec;
      out_int.resize(rec.time.size());
      for (std::size_t j = 0; j < rec.time.size(); ++j)
        out_int[j] = w * std::norm(rec.output_field[j]);
      for (auto& e : total.stored_excitation) e *= w;
      for (auto& c : total.storage_coherence) c *= w;
      total.energy.transmitted *= w;
      total.energy.scattered *= w;
      total.energy.stored_final *= w;
      first = false;
      continue;
    }
    for (std::size_t j = 0; j < rec.time.size(); ++j)
      out_int[j] += w * std::norm(rec.output_field[j]);
    for (std::size_t j = 0; j < total.stored_excitation.size(); ++j)
      total.stored_excitation[j] += w * rec.stored_excitation[j];
    for (std::size_t j = 0; j < total.storage_coherence.size(); ++j)
      total.storage_coherence[j] += w * rec.storage_coherence[j];
    total.energy.transmitted += w * rec.energy.transmitted;
    total.energy.scattered += w * rec.energy.scattered;
    total.energy.stored_final += w * rec.energy.stored_final;
  }
  for (std::size_t j = 0; j < total.time.size(); ++j) {
    const double mag = std::sqrt(out_int[j]);
    const double cur = std::abs(total.output_field[j]);
    total.output_field[j] =
        cur > 0 ? total.output_field[j] * (mag / cur) : cplx{mag, 0.0};
  }
  total.energy.residual = total.energy.input - total.energy.transmitted -
                          total.energy.scattered - total.energy.stored_final;
  return total;
}

StorageResult run_storage_retrieval(const Scenario& scenario, unsigned jobs) {
  scenario.validate();
  PropagateOptions opt;
  opt.jobs = jobs;
  PropagationRecord medium = propagate(scenario, opt);
  PropagateOptions ref_opt = opt;
  ref_opt.od_override = 0.0;
  PropagationRecord reference = propagate(scenario, ref_opt);

  const auto& tm = scenario.timing;
  const double w = tm.integration_window;
  const double ref_start = tm.signal_center - 0.5 * w;
  const double ret_center = tm.retrieval_control_center();
  const double ret_start =
      tm.retrieved_window_start
          ? *tm.retrieved_window_start
          : ret_center - scenario.control_retrieval.fwhm / 2;

  StorageResult res;
  const std::size_t n_t = medium.time.size();
  std::vector<double> out_int(n_t), ref_int(n_t);
  for (std::size_t j = 0; j < n_t; ++j) {
    out_int[j] = std::norm(medium.output_field[j]);
    ref_int[j] = std::norm(reference.output_field[j]);
  }

  const double ref_energy =
      window_energy(medium.time, ref_int, ref_start, ref_start + w);
  const double ret_energy =
      window_energy(medium.time, out_int, ret_start, ret_start + w);
  if (ref_energy <= 0)
    throw solver_error("run_storage_retrieval: empty reference window");
  res.eta_internal = ret_energy / ref_energy;

  res.retrieved_waveform.time = medium.time;
  res.retrieved_waveform.intensity = out_int;
  res.stored_energy_vs_time = medium.stored_excitation;
  res.energy = medium.energy;

  const double storage_end =
      tm.storage_control_center + scenario.control_storage.fwhm / 2 +
      scenario.control_storage.rise_fall_10_90;
  const double leak_end = std::min(ret_start, storage_end + 2e-9);
  res.transmitted_leakage =
      medium.energy.input > 0
          ? window_energy(medium.time, out_int, medium.time.front(), leak_end) /
                medium.energy.input
          : 0.0;

  if (ret_start < storage_end)
    res.warnings.push_back(
        "retrieved window overlaps the storage control pulse");
  if (ret_start + w > medium.time.back())
    res.warnings.push_back("retrieved window clipped by the time grid");
  if (ref_start < medium.time.front())
    res.warnings.push_back("reference window clipped by the time grid");
  return res;
}

std::vector<std::pair<double, double>> lifetime_curve(
    const Scenario& scenario, const std::vector<double>& storage_times,
    unsigned jobs) {
  if (!std::is_sorted(storage_times.begin(), storage_times.end()))
    throw validation_error("storage_times", "must be ascending");
  for (double t : storage_times)
    if (t <= 0) throw validation_error("storage_times", "must be positive");
  std::vector<std::pair<double, double>> out;
  out.reserve(storage_times.size());
  for (double t : storage_times) {
    Scenario sc = scenario;
    sc.timing.storage_time = t;
    out.emplace_back(t, run_storage_retrieval(sc, jobs).eta_internal);
  }
  return out;
}

}  // namespace flame
