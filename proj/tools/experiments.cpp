#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "ecd/bounds.hpp"
#include "ecd/discrimination.hpp"
#include "ecd/random.hpp"
#include "ecd/serialize.hpp"
#include "ecd/tolerances.hpp"

namespace ecd::cli {

namespace {

using nlohmann::json;

std::vector<double> parse_grid(const json& g) {
  if (g.is_array()) return g.get<std::vector<double>>();
  const double from = g.at("from").get<double>();
  const double to = g.at("to").get<double>();
  const std::size_t count = g.at("count").get<std::size_t>();
  const std::string scale = g.value("scale", "linear");
  if (count == 0) throw std::invalid_argument("grid: count must be positive");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = from;
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    const double s = double(k) / double(count - 1);
    if (scale == "log") {
      if (from <= 0.0 || to <= 0.0) throw std::invalid_argument("grid: log scale needs > 0");
      out[k] = std::exp(std::log(from) + s * (std::log(to) - std::log(from)));
    } else {
      out[k] = from + s * (to - from);
    }
  }
  return out;
}

Hamiltonian parse_hamiltonian(const json& j, std::size_t default_dim) {
  if (j.contains("spectrum"))
    return Hamiltonian::from_spectrum(j.at("spectrum").get<std::vector<double>>());
  const std::string type = j.value("type", "number");
  const std::size_t dim = j.value("dim", default_dim);
  if (type == "qubit") return Hamiltonian::qubit();
  if (type == "number") return Hamiltonian::number_operator(dim);
  throw std::invalid_argument("hamiltonian: unknown type " + type);
}

// CSV writer with a timestamp comment line; everything below it is
// deterministic for a fixed config and seed.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file " + path);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
    out_ << "# generated " << buf << "\n";
    write_row(header);
  }
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

std::string fmt(double v) { return format_csv_number(v); }

void write_reports(const std::vector<BoundReport>& reports, const std::string& out_path,
                   const std::vector<std::string>& input_names) {
  std::vector<std::string> header = {"name"};
  for (const auto& n : input_names) header.push_back(n);
  header.insert(header.end(),
                {"bound", "measured_lower", "measured_upper", "satisfied", "margin"});
  CsvWriter csv(out_path, header);
  std::ofstream jsonl(out_path + ".jsonl");
  for (const auto& r : reports) {
    std::vector<std::string> row = {r.name};
    for (const auto& n : input_names) {
      double v = 0.0;
      for (const auto& [k, x] : r.inputs)
        if (k == n) v = x;
      row.push_back(fmt(v));
    }
    row.push_back(fmt(r.bound_value));
    row.push_back(fmt(r.measured_lower.value_or(r.measured.value_or(0.0))));
    row.push_back(fmt(r.measured_upper.value_or(r.measured.value_or(0.0))));
    row.push_back(r.satisfied.value_or(true) ? "true" : "false");
    row.push_back(fmt(r.margin.value_or(0.0)));
    csv.write_row(row);
    jsonl << bound_report_to_json(r) << "\n";
  }
}

SolveOptions solve_options_from(const json& params) {
  SolveOptions opts;
  opts.gap_tol = params.value("gap_tol", opts.gap_tol);
  opts.max_iterations = params.value("max_iterations", opts.max_iterations);
  opts.certify_every = params.value("certify_every", opts.certify_every);
  opts.polish_steps = params.value("polish_steps", opts.polish_steps);
  return opts;
}

//----------------------------------------------------------------------
// experiments
//----------------------------------------------------------------------

int attenuator_sweep(const json& cfg, const std::string& out_path, std::uint64_t) {
  const json params = cfg.value("parameters", json::object());
  const double eta = params.value("eta", 0.9);
  const double eta_prime = params.value("eta_prime", 0.6);
  const std::size_t dim = cfg.value("truncation_dim", std::size_t(16));
  std::vector<double> energies = parse_grid(params.at("energy_grid"));
  SolveOptions opts = solve_options_from(params);

  const Hamiltonian h = Hamiltonian::number_operator(dim);
  auto delta = HermitianPreservingMap::difference(Channel::attenuator(eta, dim),
                                                  Channel::attenuator(eta_prime, dim));
  CsvWriter csv(out_path,
                {"experiment", "eta", "eta_prime", "dim", "energy", "norm_lower",
                 "norm_upper", "gap", "iterations", "status", "gap_tol", "feas_tol"});
  std::optional<DensityMatrix> warm;
  double prev_lower = -1.0;
  bool monotone = true;
  for (double e : energies) {
    opts.warm_start = warm;
    auto cert = solve(assemble(delta, h, e), opts);
    warm = cert.probe_marginal;
    csv.write_row({"attenuator-sweep", fmt(eta), fmt(eta_prime), std::to_string(dim), fmt(e),
                   fmt(cert.norm_lower), fmt(cert.norm_upper), fmt(cert.gap),
                   std::to_string(cert.iterations),
                   cert.status == SolveStatus::optimal ? "optimal" : "max-iterations",
                   fmt(opts.gap_tol), fmt(opts.feas_tol)});
    // certified monotonicity: the new upper bound may never undercut the
    // previous lower bound
    if (cert.norm_upper < prev_lower - 1e-9) monotone = false;
    prev_lower = std::max(prev_lower, cert.norm_lower);
  }
  if (!monotone) {
    std::cerr << "attenuator-sweep: monotonicity violation in the energy column\n";
    return kExitInvariantViolation;
  }
  return kExitOk;
}

int speed_limit(const json& cfg, const std::string& out_path, std::uint64_t) {
  const json params = cfg.value("parameters", json::object());
  const Hamiltonian h = parse_hamiltonian(cfg.value("hamiltonian", json{{"type", "qubit"}}),
                                          cfg.value("truncation_dim", std::size_t(2)));
  auto reports = speed_limit_campaign(h, parse_grid(params.at("t_grid")),
                                      parse_grid(params.at("e_grid")),
                                      solve_options_from(params));
  write_reports(reports, out_path, {"t", "e", "dim", "iterations"});
  for (const auto& r : reports)
    if (r.satisfied && !*r.satisfied) {
      std::cerr << "speed-limit: bound violated at t=" << r.inputs[0].second
                << " e=" << r.inputs[1].second << "\n";
      return kExitInvariantViolation;
    }
  return kExitOk;
}

int entropy_bound(const json& cfg, const std::string& out_path, std::uint64_t seed) {
  const json params = cfg.value("parameters", json::object());
  const std::size_t trials = params.value("trials", std::size_t(20));
  const double e = params.value("energy", 0.8);
  Rng rng(seed);
  const Hamiltonian h = Hamiltonian::qubit();
  SolveOptions opts = solve_options_from(params);

  std::vector<BoundReport> reports;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    // random qubit channel pair from isometries
    auto make_channel = [&rng]() {
      ComplexMatrix v = gram_schmidt(rng.gaussian_matrix(4, 2));
      std::vector<ComplexMatrix> kraus;
      for (std::size_t env = 0; env < 2; ++env) {
        ComplexMatrix k(2, 2);
        for (std::size_t b = 0; b < 2; ++b)
          for (std::size_t a = 0; a < 2; ++a) k(b, a) = v(b * 2 + env, a);
        kraus.push_back(std::move(k));
      }
      return Channel(std::move(kraus), 2, 2);
    };
    Channel n1 = make_channel(), n2 = make_channel();
    // random probe with a damped excited component
    std::vector<Complex> psi = rng.unit_vector(4);
    for (int rep = 0; rep < 64; ++rep) {
      double en = std::norm(psi[2]) + std::norm(psi[3]);
      if (en <= e) break;
      psi[2] *= 0.8;
      psi[3] *= 0.8;
      double nrm = 0.0;
      for (auto& c : psi) nrm += std::norm(c);
      for (auto& c : psi) c /= std::sqrt(nrm);
    }
    auto r = verify_entropy_bound(n1, n2, DensityMatrix::pure(psi), 2, h, h, e, opts);
    r.inputs.emplace_back("trial", double(trial));
    reports.push_back(std::move(r));
  }
  write_reports(reports, out_path, {"trial", "eps", "e_tilde", "e"});
  for (const auto& r : reports)
    if (r.satisfied && !*r.satisfied) {
      std::cerr << "entropy-bound: violation in a trial\n";
      return kExitInvariantViolation;
    }
  return kExitOk;
}

int norm_properties(const json& cfg, const std::string& out_path, std::uint64_t seed) {
  const json params = cfg.value("parameters", json::object());
  const std::size_t trials = params.value("trials", std::size_t(10));
  const double e = params.value("energy", 0.5);
  const double e_prime = params.value("energy_prime", 1.0);
  const double tol_prop = params.value("tolerance", 1e-3);
  Rng rng(seed);
  const Hamiltonian h = Hamiltonian::qubit();

  auto random_pair = [&rng]() {
    ComplexMatrix v = gram_schmidt(rng.gaussian_matrix(4, 2));
    std::vector<ComplexMatrix> kraus;
    for (std::size_t env = 0; env < 2; ++env) {
      ComplexMatrix k(2, 2);
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t a = 0; a < 2; ++a) k(b, a) = v(b * 2 + env, a);
      kraus.push_back(std::move(k));
    }
    return Channel(std::move(kraus), 2, 2);
  };
  auto mid = [&](const HermitianPreservingMap& m, const Hamiltonian& hh, double ee) {
    auto c = solve(assemble(m, hh, ee));
    return 0.5 * (c.norm_lower + c.norm_upper);
  };

  CsvWriter csv(out_path, {"trial", "property", "lhs", "rhs", "pass"});
  bool all_pass = true;
  auto emit = [&](std::size_t trial, const char* prop, double lhs, double rhs) {
    const bool pass = lhs <= rhs + tol_prop;
    all_pass = all_pass && pass;
    csv.write_row({std::to_string(trial), prop, fmt(lhs), fmt(rhs), pass ? "true" : "false"});
  };

  for (std::size_t trial = 0; trial < trials; ++trial) {
    auto d1 = HermitianPreservingMap::difference(random_pair(), random_pair());
    auto d2 = HermitianPreservingMap::difference(random_pair(), random_pair());
    const double v1 = mid(d1, h, e), v2 = mid(d2, h, e);
    emit(trial, "triangle", mid(d1.plus(d2), h, e), v1 + v2);
    const double c = 1.0 + 0.02 * double(trial % 7);
    emit(trial, "homogeneity-upper", mid(d1.scaled(c), h, e), c * v1);
    emit(trial, "homogeneity-lower", c * v1, mid(d1.scaled(c), h, e));
    const double vp = mid(d1, h, e_prime);
    emit(trial, "energy-monotone", v1, vp);
    emit(trial, "energy-scaling", vp, (e_prime / e) * v1);
    if (trial % 5 == 0) {
      auto t = random_pair();
      auto s = sum_hamiltonian(h, h);
      const double vt = mid(d1.tensor_with_channel(t).permute_input(s.perm), s.h, e);
      emit(trial, "tensor-stability-upper", vt, v1);
      emit(trial, "tensor-stability-lower", v1, vt);
      // super-multiplicativity under an energy split
      auto joint = d1.tensor_with_map(d2).permute_input(s.perm);
      const double vj = mid(joint, s.h, e);
      double best = 0.0;
      for (double e1 : {0.25 * e, 0.5 * e, 0.75 * e})
        best = std::max(best, mid(d1, h, e1) * mid(d2, h, e - e1));
      emit(trial, "super-multiplicative", best, vj);
    }
  }
  if (!all_pass) {
    std::cerr << "norm-properties: violation\n";
    return kExitInvariantViolation;
  }
  return kExitOk;
}

int witness_scan(const json& cfg, const std::string& out_path, std::uint64_t) {
  const json params = cfg.value("parameters", json::object());
  std::vector<double> spectrum = params.at("spectrum").get<std::vector<double>>();
  std::vector<double> ts = parse_grid(params.at("t_grid"));
  CsvWriter csv(out_path,
                {"t", "in_hull", "overlap_abs", "distance_lower", "witness_energy"});
  std::size_t hits = 0;
  for (double t : ts) {
    auto w = orthogonality_witness(spectrum, t);
    const double ov = std::abs(w.overlap);
    csv.write_row({fmt(t), w.in_hull ? "true" : "false", fmt(ov),
                   fmt(w.in_hull ? 2.0 * std::sqrt(1.0 - ov * ov) : 0.0),
                   fmt(w.energy)});
    if (w.in_hull) ++hits;
  }
  std::cerr << "witness-scan: " << hits << "/" << ts.size() << " grid times in hull\n";
  return kExitOk;
}

}  // namespace

int run_experiment(const json& config, const std::string& out_path,
                   unsigned long long seed_override, bool has_seed_override) {
  try {
    const std::string id = config.at("experiment").get<std::string>();
    if (config.contains("truncation_dim") &&
        config.at("truncation_dim").get<std::size_t>() < 2)
      throw std::invalid_argument("truncation_dim must be at least 2");
    const std::uint64_t seed =
        has_seed_override ? seed_override : config.value("seed", std::uint64_t(1));
    std::string out = out_path;
    if (out.empty()) out = config.value("output", "results.csv");
    if (id == "attenuator-sweep") return attenuator_sweep(config, out, seed);
    if (id == "speed-limit") return speed_limit(config, out, seed);
    if (id == "entropy-bound") return entropy_bound(config, out, seed);
    if (id == "norm-properties") return norm_properties(config, out, seed);
    if (id == "witness-scan") return witness_scan(config, out, seed);
    std::cerr << "unknown experiment id: " << id << "\n";
    return kExitConfigError;
  } catch (const std::exception& ex) {
    std::cerr << "experiment failed: " << ex.what() << "\n";
    return kExitConfigError;
  }
}

//----------------------------------------------------------------------
// norm + validate entry points
//----------------------------------------------------------------------

namespace {

HermitianPreservingMap map_from_config(const json& cfg, std::size_t dim_override) {
  if (cfg.contains("channels")) {
    const auto refs = cfg.at("channels").get<std::vector<std::string>>();
    if (refs.size() != 2)
      throw std::invalid_argument("norm config: expected exactly two channel files");
    return HermitianPreservingMap::difference(load_channel(refs[0]), load_channel(refs[1]));
  }
  if (cfg.contains("builtin")) {
    const json& b = cfg.at("builtin");
    const std::string pair = b.value("pair", "attenuator");
    std::size_t dim = b.value("dim", std::size_t(16));
    if (dim_override) dim = dim_override;
    if (pair == "attenuator") {
      return HermitianPreservingMap::difference(
          Channel::attenuator(b.at("eta").get<double>(), dim),
          Channel::attenuator(b.at("eta_prime").get<double>(), dim));
    }
    if (pair == "evolution") {
      const Hamiltonian h = Hamiltonian::number_operator(dim);
      return HermitianPreservingMap::difference(
          Channel::unitary_evolution(h, b.at("t").get<double>()), Channel::identity(dim));
    }
    throw std::invalid_argument("norm config: unknown builtin pair " + pair);
  }
  if (cfg.contains("map")) {
    const json& m = cfg.at("map");
    const std::size_t din = m.at("dim_in").get<std::size_t>();
    const std::size_t dout = m.at("dim_out").get<std::size_t>();
    auto load_kraus = [](const json& arr) {
      std::vector<ComplexMatrix> out;
      for (const auto& k : arr) {
        const std::size_t r = k.size(), c = k.at(0).size();
        ComplexMatrix mat(r, c);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < c; ++j)
            mat(i, j) = Complex(k.at(i).at(j).at(0).get<double>(),
                                k.at(i).at(j).at(1).get<double>());
        out.push_back(std::move(mat));
      }
      return out;
    };
    return HermitianPreservingMap::from_parts(
        load_kraus(m.value("plus", json::array())),
        load_kraus(m.value("minus", json::array())), din, dout);
  }
  throw std::invalid_argument("norm config: need channels, builtin, or map");
}

}  // namespace

int run_norm(const json& config, const std::string& out_path, double gap_tol,
             std::size_t max_iter, std::size_t dim_override) {
  try {
    auto delta = map_from_config(config, dim_override);
    const Hamiltonian h =
        parse_hamiltonian(config.value("hamiltonian", json{{"type", "number"}}),
                          delta.dim_in());
    const double e = config.at("energy").get<double>();
    SolveOptions opts;
    if (gap_tol > 0.0) opts.gap_tol = gap_tol;
    if (max_iter > 0) opts.max_iterations = max_iter;
    if (config.contains("solver")) {
      const json& s = config["solver"];
      opts.max_iterations = s.value("max_iterations", opts.max_iterations);
      opts.gap_tol = s.value("gap_tol", opts.gap_tol);
      opts.certify_every = s.value("certify_every", opts.certify_every);
      opts.polish_steps = s.value("polish_steps", opts.polish_steps);
    }
    auto cert = solve(assemble(delta, h, e), opts);
    const std::string text = certificate_to_json(cert);
    if (out_path.empty() || out_path == "-") {
      std::cout << text << "\n";
    } else {
      std::ofstream f(out_path);
      if (!f) throw std::runtime_error("cannot open " + out_path);
      f << text << "\n";
    }
    return cert.status == SolveStatus::optimal ? kExitOk : kExitSolverNonOptimal;
  } catch (const std::exception& ex) {
    std::cerr << "norm computation failed: " << ex.what() << "\n";
    return kExitConfigError;
  }
}

int run_validate(const std::string& path) {
  try {
    Channel c = load_channel(path);
    const double resid = c.completeness_residual();
    std::printf("dim_in %zu dim_out %zu kraus %zu\n", c.dim_in(), c.dim_out(),
                c.kraus().size());
    std::printf("completeness residual %.3e%s\n", resid,
                c.trace_nonincreasing() ? " (trace non-increasing)" : "");
    bool ok = resid <= tol::cptp || c.trace_nonincreasing();
    if (c.energy_limit()) {
      const Hamiltonian hin = Hamiltonian::number_operator(c.dim_in());
      const Hamiltonian hout = Hamiltonian::number_operator(c.dim_out());
      HermitianMatrix heis = c.adjoint_apply(hout.matrix());
      std::vector<double> shifted(c.dim_in());
      for (std::size_t a = 0; a < c.dim_in(); ++a)
        shifted[a] = c.energy_limit()->alpha * hin.level(a) + c.energy_limit()->e0;
      ComplexMatrix m = ComplexMatrix::diagonal(shifted) - heis.mat();
      const double lmin = min_eigenvalue(HermitianMatrix::symmetrized(m));
      std::printf("energy limit alpha %.6g e0 %.6g: min eigenvalue %.3e\n",
                  c.energy_limit()->alpha, c.energy_limit()->e0, lmin);
      if (lmin < -1e-9 * std::max(1.0, heis.mat().max_abs())) {
        std::printf("claimed energy limit FAILS the operator inequality\n");
        ok = false;
      }
    }
    std::printf(ok ? "valid\n" : "invalid\n");
    return ok ? kExitOk : kExitConfigError;
  } catch (const std::exception& ex) {
    std::cerr << "validation failed: " << ex.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace ecd::cli
