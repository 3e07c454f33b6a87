#include "ecd/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecd/tolerances.hpp"

namespace ecd {

BoundReport make_report(std::string name,
                        std::vector<std::pair<std::string, double>> inputs, double bound,
                        std::optional<double> measured) {
  BoundReport r;
  r.name = std::move(name);
  r.inputs = std::move(inputs);
  r.bound_value = bound;
  r.measured = measured;
  if (measured) {
    r.satisfied = *measured <= bound + tol::verify;
    r.margin = bound - *measured;
  }
  return r;
}

double gibbs_entropy_bits(const EntropySource& src, double x) {
  if (x < 0.0) throw std::invalid_argument("gibbs_entropy_bits: negative energy");
  if (std::holds_alternative<OscillatorEntropy>(src)) return g_function(x);
  return max_entropy_at_energy(std::get<Hamiltonian>(src), x);
}

double speed_limit_bound(double t, double e) {
  if (t < 0.0 || e < 0.0) throw std::invalid_argument("speed_limit_bound: negative argument");
  return std::min(1.0, std::cbrt(4.0 * t * e));
}

double truncation_step_bound(double t, double e, double eps) {
  if (eps <= 0.0 || eps > 1.0)
    throw std::invalid_argument("truncation_step_bound: eps outside (0, 1]");
  if (t < 0.0 || e < 0.0)
    throw std::invalid_argument("truncation_step_bound: negative argument");
  return t * e / (2.0 * eps) + std::sqrt(eps);
}

TruncationOptimum truncation_step_optimum(double t, double e) {
  TruncationOptimum out;
  out.eps = std::min(1.0, std::pow(0.5 * t * e, 2.0 / 3.0));
  out.value = out.eps > 0.0 ? truncation_step_bound(t, e, out.eps)
                            : 0.0;
  return out;
}

double entropy_continuity_bound(double eps, double eps_prime, double e_tilde,
                                const EntropySource& src) {
  if (!(eps >= 0.0 && eps < eps_prime && eps_prime <= 1.0))
    throw std::invalid_argument("entropy_continuity_bound: need 0 <= eps < eps' <= 1");
  const double delta = (eps_prime - eps) / (1.0 + eps_prime);
  return 6.0 * eps_prime * gibbs_entropy_bits(src, e_tilde / delta) +
         3.0 * g_function(eps_prime);
}

OptimizedEntropyBound entropy_continuity_bound_optimized(double eps, double e_tilde,
                                                         const EntropySource& src) {
  OptimizedEntropyBound out;
  if (eps >= 1.0) {
    out.bound = out.fixed_bound = std::numeric_limits<double>::infinity();
    out.eps_prime = 1.0;
    return out;
  }
  auto f = [&](double ep) { return entropy_continuity_bound(eps, ep, e_tilde, src); };
  // golden section over (eps, 1]
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = eps + 1e-12 * (1.0 + eps), b = 1.0;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = f(c1), f2 = f(c2);
  for (int it = 0; it < 160; ++it) {
    if (f1 > f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = f(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = f(c1);
    }
    if (b - a < 1e-12) break;
  }
  out.eps_prime = 0.5 * (a + b);
  out.bound = f(out.eps_prime);
  const double fixed = std::min(1.0, 2.0 * std::sqrt(eps));
  out.fixed_bound = fixed > eps ? f(fixed) : std::numeric_limits<double>::infinity();
  if (out.fixed_bound < out.bound) {
    out.bound = out.fixed_bound;
    out.eps_prime = fixed;
  }
  return out;
}

double entropy_trivial_bound(double e_tilde, const EntropySource& src) {
  if (e_tilde < 0.0) throw std::invalid_argument("entropy_trivial_bound: negative energy");
  return 2.0 * gibbs_entropy_bits(src, e_tilde);
}

TelescopingBound telescoping_bound(double eps, double e, double alpha, double e0,
                                   const EntropySource& src) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("telescoping_bound: need 0 <= eps < 1");
  if (alpha < 0.0 || e0 < 0.0 || e < 0.0)
    throw std::invalid_argument("telescoping_bound: negative parameter");
  TelescopingBound out;
  if (eps == 0.0) return out;
  const double delta = std::sqrt(eps);
  const double et = alpha * e + e0;
  out.simplified =
      28.0 * delta * gibbs_entropy_bits(src, 4.0 * et / delta) + 3.0 * g_function(4.0 * delta);
  out.tighter = 14.0 * delta * (1.0 + delta) *
                    gibbs_entropy_bits(src, (1.0 + 3.0 * delta) * et / delta) +
                3.0 * g_function(2.0 * delta * (1.0 + delta));
  return out;
}

CapacityBound capacity_continuity_bound(double eps, double e, double alpha, double e0,
                                        const EntropySource& src) {
  const double b = 2.0 * telescoping_bound(eps, e, alpha, e0, src).simplified;
  return CapacityBound{b, b};
}

BoundReport verify_entropy_bound(const Channel& n1, const Channel& n2,
                                 const DensityMatrix& rho_ac, std::size_t dim_c,
                                 const Hamiltonian& h_in, const Hamiltonian& h_out, double e,
                                 const SolveOptions& opts) {
  const std::size_t da = n1.dim_in(), db = n1.dim_out();
  if (rho_ac.dim() != da * dim_c)
    throw std::invalid_argument("verify_entropy_bound: probe dimension mismatch");
  // probe energy hypothesis
  HermitianMatrix marg_a =
      HermitianMatrix::symmetrized(partial_trace(rho_ac.mat(), da, dim_c, 0));
  if (mean_energy(marg_a, h_in) > e + tol::verify)
    throw std::invalid_argument("verify_entropy_bound: probe violates the energy bound");

  auto cert = channel_distance(n1, n2, h_in, e, opts);
  const double eps = 0.5 * cert.norm_upper;

  DensityMatrix w1 = n1.apply(rho_ac, dim_c);
  DensityMatrix w2 = n2.apply(rho_ac, dim_c);
  const double s1 = conditional_entropy(w1, db, dim_c);
  const double s2 = conditional_entropy(w2, db, dim_c);
  const double measured = std::abs(s1 - s2);

  const double et1 =
      mean_energy(HermitianMatrix::symmetrized(partial_trace(w1.mat(), db, dim_c, 0)), h_out);
  const double et2 =
      mean_energy(HermitianMatrix::symmetrized(partial_trace(w2.mat(), db, dim_c, 0)), h_out);
  const double e_tilde = std::max(et1, et2);

  const EntropySource src = h_out;
  double bound = entropy_trivial_bound(e_tilde, src);
  if (eps < 1.0)
    bound = std::min(bound, entropy_continuity_bound_optimized(eps, e_tilde, src).bound);

  BoundReport r = make_report("entropy-continuity",
                              {{"eps", eps},
                               {"e_tilde", e_tilde},
                               {"e", e},
                               {"norm_lower", cert.norm_lower},
                               {"norm_upper", cert.norm_upper}},
                              bound, measured);
  r.measured_lower = measured;
  r.measured_upper = measured;
  return r;
}

std::vector<BoundReport> speed_limit_campaign(const Hamiltonian& h,
                                              const std::vector<double>& t_grid,
                                              const std::vector<double>& e_grid,
                                              const SolveOptions& opts) {
  std::vector<BoundReport> out;
  const Channel id = Channel::identity(h.dim());
  for (double t : t_grid) {
    const Channel ut = Channel::unitary_evolution(h, t);
    std::optional<DensityMatrix> warm;
    for (double e : e_grid) {
      SolveOptions o = opts;
      o.warm_start = warm;
      auto cert = channel_distance(ut, id, h, e, o);
      warm = cert.probe_marginal;
      // the certified lower bound is the measured side of the inequality
      BoundReport r = make_report("speed-limit",
                                  {{"t", t},
                                   {"e", e},
                                   {"dim", double(h.dim())},
                                   {"iterations", double(cert.iterations)},
                                   {"gap", cert.gap}},
                                  speed_limit_bound(t, e), 0.5 * cert.norm_lower);
      r.measured_lower = 0.5 * cert.norm_lower;
      r.measured_upper = 0.5 * cert.norm_upper;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace ecd
