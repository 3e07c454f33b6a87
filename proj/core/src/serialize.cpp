#include "ecd/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ecd {

namespace {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("matrix_from_json: expected a non-empty array");
  const std::size_t r = rows.size();
  const std::size_t c = rows.at(0).size();
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const auto& row = rows.at(i);
    if (row.size() != c) throw std::invalid_argument("matrix_from_json: ragged rows");
    for (std::size_t k = 0; k < c; ++k) {
      const auto& ent = row.at(k);
      if (!ent.is_array() || ent.size() != 2)
        throw std::invalid_argument("matrix_from_json: entries must be [re, im]");
      m(i, k) = Complex(ent.at(0).get<double>(), ent.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

std::string channel_to_json(const Channel& c) {
  json j;
  j["dim_in"] = c.dim_in();
  j["dim_out"] = c.dim_out();
  json kraus = json::array();
  for (const auto& k : c.kraus()) kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  if (c.energy_limit()) {
    j["energy_limit"] = {{"alpha", c.energy_limit()->alpha}, {"e0", c.energy_limit()->e0}};
  }
  return j.dump(2);
}

Channel channel_from_json(const std::string& text) {
  json j = json::parse(text);
  const std::size_t din = j.at("dim_in").get<std::size_t>();
  const std::size_t dout = j.at("dim_out").get<std::size_t>();
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
  Channel c(std::move(kraus), din, dout, /*allow_nonincreasing=*/true);
  if (j.contains("energy_limit")) {
    EnergyLimit lim;
    lim.alpha = j["energy_limit"].at("alpha").get<double>();
    lim.e0 = j["energy_limit"].at("e0").get<double>();
    c.set_energy_limit(lim);
  }
  return c;
}

void save_channel(const Channel& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_channel: cannot open " + path);
  f << channel_to_json(c) << "\n";
}

Channel load_channel(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_channel: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return channel_from_json(ss.str());
}

std::string certificate_to_json(const EcdCertificate& cert) {
  json j;
  j["mode"] = cert.mode == NormMode::cptp_difference ? "cptp-difference" : "general";
  j["primal_value"] = cert.primal_value;
  j["dual_value"] = cert.dual_value;
  j["norm_lower"] = cert.norm_lower;
  j["norm_upper"] = cert.norm_upper;
  j["gap"] = cert.gap;
  j["dual_x"] = cert.dual_x;
  j["dual_y"] = cert.dual_y;
  j["iterations"] = cert.iterations;
  switch (cert.status) {
    case SolveStatus::optimal: j["status"] = "optimal"; break;
    case SolveStatus::max_iterations: j["status"] = "max-iterations"; break;
    case SolveStatus::infeasible_numerics: j["status"] = "infeasible-numerics"; break;
  }
  j["residuals"] = {{"primal_psd", cert.residuals.primal_psd},
                    {"primal_cap", cert.residuals.primal_cap},
                    {"trace", cert.residuals.trace},
                    {"energy", cert.residuals.energy},
                    {"dual_psd", cert.residuals.dual_psd},
                    {"dual_cover", cert.residuals.dual_cover}};
  j["probe_marginal"] = matrix_to_json(cert.probe_marginal.mat());
  if (cert.primal_variable) j["primal_variable"] = matrix_to_json(cert.primal_variable->mat());
  if (cert.dual_z) j["dual_z"] = matrix_to_json(cert.dual_z->mat());
  return j.dump(2);
}

std::string problem_to_json(const EcdProblem& p) {
  json j;
  j["dim_in"] = p.dim_in;
  j["dim_out"] = p.dim_out;
  j["energy"] = p.energy;
  j["mode"] = p.mode == NormMode::cptp_difference ? "cptp-difference" : "general";
  j["hamiltonian"] = p.hamiltonian.spectrum();
  j["trace_annihilation_residual"] = p.trace_annihilation_residual;
  if (p.choi) j["choi"] = matrix_to_json(p.choi->mat());
  if (!p.blocks.empty()) {
    json blocks = json::array();
    for (const auto& b : p.blocks) {
      json blk;
      blk["out_idx"] = b.out_idx;
      blk["in_idx"] = b.in_idx;
      blk["j"] = matrix_to_json(b.j);
      blocks.push_back(std::move(blk));
    }
    j["blocks"] = std::move(blocks);
  }
  return j.dump(2);
}

std::string bound_report_to_json(const BoundReport& r) {
  json j;
  j["name"] = r.name;
  json in = json::object();
  for (const auto& [k, v] : r.inputs) in[k] = v;
  j["inputs"] = std::move(in);
  j["bound"] = r.bound_value;
  if (r.measured) j["measured"] = *r.measured;
  if (r.measured_lower) j["measured_lower"] = *r.measured_lower;
  if (r.measured_upper) j["measured_upper"] = *r.measured_upper;
  if (r.satisfied) j["satisfied"] = *r.satisfied;
  if (r.margin) j["margin"] = *r.margin;
  return j.dump();
}

std::string format_csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace ecd
