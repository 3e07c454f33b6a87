#pragma once

#include <string>

#include "ecd/bounds.hpp"
#include "ecd/channel.hpp"
#include "ecd/sdp.hpp"

// JSON schemas (matrices as nested [re, im] pairs, row by row):
//   channel file:   {"dim_in": n, "dim_out": m, "kraus": [[[[re,im],...],...],...],
//                    "energy_limit": {"alpha": a, "e0": b}}   (energy_limit optional)
//   certificate:    values, status, residuals, iterations, probe marginal and,
//                   for small instances, the primal/dual matrices.
// Round-trips are bit-exact for finite doubles.

namespace ecd {

std::string channel_to_json(const Channel& c);
Channel channel_from_json(const std::string& text);
void save_channel(const Channel& c, const std::string& path);
Channel load_channel(const std::string& path);

std::string certificate_to_json(const EcdCertificate& cert);
std::string problem_to_json(const EcdProblem& problem);

std::string bound_report_to_json(const BoundReport& r);

// CSV numbers use 12 significant digits, '.' decimal separator, no locale.
std::string format_csv_number(double v);

}  // namespace ecd
